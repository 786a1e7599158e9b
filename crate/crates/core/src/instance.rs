//! String sets and the mapping between `(string, position)` selectors and
//! flat QUBO variable indices.
//!
//! Variables are laid out position-major: all `n` selectors of position 1
//! come first, then position 2, and so on. Every position therefore owns a
//! contiguous block `[(i-1)·n, i·n)`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A validated set of equal-length strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    strings: Vec<Vec<char>>,
    alphabet: BTreeSet<char>,
}

impl CspInstance {
    /// Validates a raw string set.
    pub fn new<I, S>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let strings: Vec<Vec<char>> = raw
            .into_iter()
            .map(|s| s.as_ref().chars().collect())
            .collect();
        Self::from_symbols(strings)
    }

    pub fn from_symbols(strings: Vec<Vec<char>>) -> Result<Self> {
        let first = strings.first().ok_or(Error::EmptySet)?;
        let m = first.len();
        for (k, s) in strings.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::ZeroLength { index: k + 1 });
            }
            if s.len() != m {
                return Err(Error::LengthMismatch {
                    index: Some(k + 1),
                    expected: m,
                    found: s.len(),
                });
            }
        }
        let alphabet = strings.iter().flatten().copied().collect();
        Ok(Self { strings, alphabet })
    }

    /// Number of strings.
    pub fn n(&self) -> usize {
        self.strings.len()
    }

    /// Common string length.
    pub fn m(&self) -> usize {
        self.strings[0].len()
    }

    pub fn num_vars(&self) -> usize {
        self.n() * self.m()
    }

    pub fn strings(&self) -> &[Vec<char>] {
        &self.strings
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    /// Symbol `s_xi` with 1-based `x` and `i`.
    pub fn symbol(&self, x: usize, i: usize) -> Result<char> {
        self.check_string(x)?;
        self.check_position(i)?;
        Ok(self.strings[x - 1][i - 1])
    }

    /// Column `i` (1-based) of the string matrix, top to bottom.
    pub fn column(&self, i: usize) -> Result<Vec<char>> {
        self.check_position(i)?;
        Ok(self.strings.iter().map(|s| s[i - 1]).collect())
    }

    pub(crate) fn column_unchecked(&self, i: usize) -> impl Iterator<Item = char> + '_ {
        self.strings.iter().map(move |s| s[i - 1])
    }

    /// Sub-instance made of positions `start..start+width` (1-based start).
    pub fn window(&self, start: usize, width: usize) -> Result<Self> {
        self.check_position(start)?;
        let end = start - 1 + width;
        if width == 0 || end > self.m() {
            return Err(Error::IndexOutOfRange {
                name: "window end",
                value: end,
                max: self.m(),
            });
        }
        Self::from_symbols(
            self.strings
                .iter()
                .map(|s| s[start - 1..end].to_vec())
                .collect(),
        )
    }

    pub fn check_string(&self, x: usize) -> Result<()> {
        if x == 0 || x > self.n() {
            return Err(Error::IndexOutOfRange {
                name: "x",
                value: x,
                max: self.n(),
            });
        }
        Ok(())
    }

    pub fn check_position(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.m() {
            return Err(Error::IndexOutOfRange {
                name: "i",
                value: i,
                max: self.m(),
            });
        }
        Ok(())
    }

    /// Flat index of the selector `α_xi` in this instance.
    pub fn var(&self, x: usize, i: usize) -> Result<usize> {
        self.check_position(i)?;
        flat_index(x, i, self.n())
    }
}

/// The `(x, i)` identity of a selector variable, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarIndex {
    pub x: usize,
    pub i: usize,
}

impl VarIndex {
    pub fn flat(self, n: usize) -> Result<usize> {
        flat_index(self.x, self.i, n)
    }

    pub fn from_flat(flat: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::IndexOutOfRange {
                name: "x",
                value: 0,
                max: 0,
            });
        }
        Ok(Self {
            x: flat % n + 1,
            i: flat / n + 1,
        })
    }
}

/// `(i-1)·n + (x-1)`.
pub fn flat_index(x: usize, i: usize, n: usize) -> Result<usize> {
    if x == 0 || x > n {
        return Err(Error::IndexOutOfRange {
            name: "x",
            value: x,
            max: n,
        });
    }
    if i == 0 {
        return Err(Error::IndexOutOfRange {
            name: "i",
            value: i,
            max: usize::MAX,
        });
    }
    Ok((i - 1) * n + (x - 1))
}
