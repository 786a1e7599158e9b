//! Hamming-distance primitives and the exact classical solvers used to
//! ground-truth the QUBO models.
//!
//! The sum of distances `D(c) = Σ_x d(c, s_x)` separates into independent
//! per-column terms `Δ_i(c_i)`, and any symbol absent from column `i` scores
//! the worst possible `n` there, so the minimizer of `D` can be read off
//! column by column from the symbols that actually occur in each column.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::CspInstance;

/// Default cap on the number of candidates `brute_force_closest` will visit.
pub const DEFAULT_SEARCH_LIMIT: u128 = 10_000_000;

/// 0 when the symbols are equal, 1 otherwise.
#[inline]
pub fn hamming_f(c1: char, c2: char) -> usize {
    usize::from(c1 != c2)
}

pub fn hamming_distance(s1: &[char], s2: &[char]) -> Result<usize> {
    if s1.len() != s2.len() {
        return Err(Error::LengthMismatch {
            index: None,
            expected: s1.len(),
            found: s2.len(),
        });
    }
    Ok(s1.iter().zip(s2).map(|(&a, &b)| hamming_f(a, b)).sum())
}

/// `D(candidate)`: sum of Hamming distances to every string of the instance.
pub fn sum_distance(candidate: &[char], instance: &CspInstance) -> Result<usize> {
    check_candidate(candidate, instance)?;
    instance
        .strings()
        .iter()
        .map(|s| hamming_distance(candidate, s))
        .sum()
}

/// `max_x d(candidate, s_x)`, the closest-string objective `k`.
pub fn max_distance(candidate: &[char], instance: &CspInstance) -> Result<usize> {
    check_candidate(candidate, instance)?;
    instance
        .strings()
        .iter()
        .map(|s| hamming_distance(candidate, s))
        .try_fold(0, |k, d| d.map(|d| k.max(d)))
}

/// `Δ_i(symbol)`: mismatches of `symbol` against column `i` (1-based).
pub fn delta_i(symbol: char, i: usize, instance: &CspInstance) -> Result<usize> {
    instance.check_position(i)?;
    Ok(column_delta(symbol, i, instance))
}

pub(crate) fn column_delta(symbol: char, i: usize, instance: &CspInstance) -> usize {
    instance
        .column_unchecked(i)
        .map(|c| hamming_f(symbol, c))
        .sum()
}

fn check_candidate(candidate: &[char], instance: &CspInstance) -> Result<()> {
    if candidate.len() != instance.m() {
        return Err(Error::LengthMismatch {
            index: None,
            expected: instance.m(),
            found: candidate.len(),
        });
    }
    Ok(())
}

/// Symbols occurring in one column of the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionAlphabet {
    pub i: usize,
    pub symbols: BTreeSet<char>,
}

pub fn position_alphabet(i: usize, instance: &CspInstance) -> Result<PositionAlphabet> {
    instance.check_position(i)?;
    Ok(PositionAlphabet {
        i,
        symbols: instance.column_unchecked(i).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosestResult {
    /// Minimizing symbols at each position.
    pub winners: Vec<BTreeSet<char>>,
    /// Smallest-code-point winner at every position.
    pub canonical: String,
    /// `max_x d(canonical, s_x)`.
    pub k: usize,
    /// `D(canonical)`.
    pub total: usize,
}

impl ClosestResult {
    fn from_winners(winners: Vec<BTreeSet<char>>, instance: &CspInstance) -> Self {
        let canonical: Vec<char> = winners
            .iter()
            .map(|w| *w.first().expect("every position has a winner"))
            .collect();
        let total = sum_distance(&canonical, instance).expect("length m");
        let k = max_distance(&canonical, instance).expect("length m");
        Self {
            winners,
            canonical: canonical.into_iter().collect(),
            k,
            total,
        }
    }

    /// Whether `candidate` picks a minimizing symbol at every position.
    pub fn is_optimal(&self, candidate: &str) -> bool {
        candidate.chars().count() == self.winners.len()
            && candidate
                .chars()
                .zip(&self.winners)
                .all(|(c, w)| w.contains(&c))
    }
}

/// Exact solver: independently minimizes `Δ_i` over the symbols of each column.
pub fn per_position_argmin(instance: &CspInstance) -> ClosestResult {
    let winners = (1..=instance.m())
        .map(|i| {
            let column: BTreeSet<char> = instance.column_unchecked(i).collect();
            let scored: Vec<(char, usize)> = column
                .into_iter()
                .map(|c| (c, column_delta(c, i, instance)))
                .collect();
            let best = scored.iter().map(|&(_, d)| d).min().unwrap_or(0);
            scored
                .into_iter()
                .filter(|&(_, d)| d == best)
                .map(|(c, _)| c)
                .collect()
        })
        .collect();
    ClosestResult::from_winners(winners, instance)
}

/// Candidate set enumerated by [`brute_force_closest`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// Every string in `Σ^m`.
    FullAlphabet,
    /// Strings drawn from the column alphabets, `Π_i Σ_i`.
    PerPosition,
}

/// Exhaustively minimizes `D` over whole candidate strings, without using the
/// per-column decomposition. Candidates are visited in lexicographic order so
/// the first minimizer found is the lexicographically smallest one.
pub fn brute_force_closest(
    instance: &CspInstance,
    space: SearchSpace,
    limit: u128,
) -> Result<ClosestResult> {
    let m = instance.m();
    let choices: Vec<Vec<char>> = (1..=m)
        .map(|i| match space {
            SearchSpace::FullAlphabet => instance.alphabet().iter().copied().collect(),
            SearchSpace::PerPosition => instance
                .column_unchecked(i)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        })
        .collect();
    let size = choices
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if size > limit {
        return Err(Error::SearchSpaceTooLarge { size, limit });
    }

    let mut digits = vec![0usize; m];
    let mut candidate: Vec<char> = choices.iter().map(|c| c[0]).collect();
    let mut best = usize::MAX;
    let mut best_string = candidate.clone();
    let mut winners = vec![BTreeSet::new(); m];
    loop {
        let d = sum_distance(&candidate, instance)?;
        if d < best {
            best = d;
            best_string.clone_from(&candidate);
            winners.iter_mut().for_each(BTreeSet::clear);
        }
        if d == best {
            for (w, &c) in winners.iter_mut().zip(&candidate) {
                w.insert(c);
            }
        }

        // odometer increment, last position fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                let result = ClosestResult::from_winners(winners, instance);
                debug_assert_eq!(result.canonical, best_string.iter().collect::<String>());
                return Ok(result);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < choices[pos].len() {
                candidate[pos] = choices[pos][digits[pos]];
                break;
            }
            digits[pos] = 0;
            candidate[pos] = choices[pos][0];
        }
    }
}
