//! Binary quadratic models with a constant offset, and their spin form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary vector over the variables of a model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    /// Low `len` bits of `word`, bit `k` of the word becoming variable `k`.
    pub fn from_word(word: u64, len: usize) -> Self {
        Self {
            bits: (0..len).map(|k| word >> k & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Spin value `2x - 1` for each bit.
    pub fn to_spins(&self) -> Vec<i8> {
        self.bits.iter().map(|&b| if b { 1 } else { -1 }).collect()
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Assignment>) -> Self {
        Self {
            bits: parts.into_iter().flat_map(|a| a.bits.iter().copied()).collect(),
        }
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn accumulate<K: Ord + Copy>(map: &mut BTreeMap<K, f64>, key: K, value: f64) {
    let sum = map.get(&key).copied().unwrap_or(0.0) + value;
    if sum == 0.0 {
        map.remove(&key);
    } else {
        map.insert(key, sum);
    }
}

/// `offset + Σ_u linear[u]·x_u + Σ_{u<v} quadratic[(u,v)]·x_u·x_v`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuboModel {
    num_vars: usize,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboModel {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            ..Self::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn linear_coeff(&self, u: usize) -> f64 {
        self.linear.get(&u).copied().unwrap_or(0.0)
    }

    pub fn quadratic_coeff(&self, u: usize, v: usize) -> f64 {
        self.quadratic.get(&ordered(u, v)).copied().unwrap_or(0.0)
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    pub fn add_linear(&mut self, u: usize, value: f64) {
        assert!(u < self.num_vars, "variable {u} out of range");
        if value != 0.0 {
            accumulate(&mut self.linear, u, value);
        }
    }

    /// Adds `value·x_u·x_v`. A diagonal term (`u == v`) folds into the
    /// linear part since `x² = x` for binary variables.
    pub fn add_quadratic(&mut self, u: usize, v: usize, value: f64) {
        assert!(u < self.num_vars && v < self.num_vars, "variable out of range");
        if u == v {
            self.add_linear(u, value);
        } else if value != 0.0 {
            accumulate(&mut self.quadratic, ordered(u, v), value);
        }
    }

    /// Term-wise sum; both models must have the same variable count.
    pub fn add_model(&mut self, other: &QuboModel) {
        assert_eq!(self.num_vars, other.num_vars, "variable count differs");
        self.offset += other.offset;
        for (&u, &c) in &other.linear {
            self.add_linear(u, c);
        }
        for (&(u, v), &c) in &other.quadratic {
            self.add_quadratic(u, v, c);
        }
    }

    pub fn energy(&self, a: &Assignment) -> Result<f64> {
        if a.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                index: None,
                expected: self.num_vars,
                found: a.len(),
            });
        }
        let lin: f64 = self
            .linear
            .iter()
            .filter(|(&u, _)| a.get(u))
            .map(|(_, c)| c)
            .sum();
        let quad: f64 = self
            .quadratic
            .iter()
            .filter(|(&(u, v), _)| a.get(u) && a.get(v))
            .map(|(_, c)| c)
            .sum();
        Ok(self.offset + lin + quad)
    }

    /// Largest absolute linear or quadratic coefficient; 0 for a constant model.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.linear
            .values()
            .chain(self.quadratic.values())
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Restricts the model to the contiguous variable range `start..start+len`,
    /// renumbering from 0. Terms touching variables outside the range are
    /// dropped, so callers must only use this on blocks with no outgoing
    /// couplings. The offset is not carried over.
    pub fn block(&self, start: usize, len: usize) -> QuboModel {
        let end = start + len;
        let mut out = QuboModel::new(len);
        for (&u, &c) in self.linear.range(start..end) {
            out.add_linear(u - start, c);
        }
        for (&(u, v), &c) in &self.quadratic {
            if (start..end).contains(&u) && (start..end).contains(&v) {
                out.add_quadratic(u - start, v - start, c);
            }
        }
        out
    }

    /// Substitutes `x = (s + 1) / 2`.
    pub fn to_ising(&self) -> IsingModel {
        let mut ising = IsingModel::new(self.num_vars);
        ising.offset = self.offset;
        for (&u, &c) in &self.linear {
            ising.add_field(u, c / 2.0);
            ising.offset += c / 2.0;
        }
        for (&(u, v), &c) in &self.quadratic {
            let q = c / 4.0;
            ising.add_coupling(u, v, q);
            ising.add_field(u, q);
            ising.add_field(v, q);
            ising.offset += q;
        }
        ising
    }
}

/// `offset + Σ_u h[u]·s_u + Σ_{u<v} J[(u,v)]·s_u·s_v` over spins in {-1, +1}.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IsingModel {
    num_vars: usize,
    h: BTreeMap<usize, f64>,
    j: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl IsingModel {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            ..Self::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn fields(&self) -> &BTreeMap<usize, f64> {
        &self.h
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.j
    }

    pub fn field(&self, u: usize) -> f64 {
        self.h.get(&u).copied().unwrap_or(0.0)
    }

    pub fn coupling(&self, u: usize, v: usize) -> f64 {
        self.j.get(&ordered(u, v)).copied().unwrap_or(0.0)
    }

    pub fn add_field(&mut self, u: usize, value: f64) {
        if value != 0.0 {
            accumulate(&mut self.h, u, value);
        }
    }

    pub fn add_coupling(&mut self, u: usize, v: usize, value: f64) {
        assert_ne!(u, v, "self-coupling");
        if value != 0.0 {
            accumulate(&mut self.j, ordered(u, v), value);
        }
    }

    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                index: None,
                expected: self.num_vars,
                found: spins.len(),
            });
        }
        let s = |u: usize| f64::from(spins[u]);
        let fields: f64 = self.h.iter().map(|(&u, &c)| c * s(u)).sum();
        let couplings: f64 = self.j.iter().map(|(&(u, v), &c)| c * s(u) * s(v)).sum();
        Ok(self.offset + fields + couplings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_model() {
        let mut q = QuboModel::new(0);
        q.add_offset(5.0);
        assert_eq!(q.energy(&Assignment::zeros(0)).unwrap(), 5.0);
        let ising = q.to_ising();
        assert!(ising.fields().is_empty() && ising.couplings().is_empty());
        assert_eq!(ising.offset(), 5.0);
    }

    #[test]
    fn single_linear_term() {
        let mut q = QuboModel::new(1);
        q.add_linear(0, 3.0);
        let ising = q.to_ising();
        assert_eq!(ising.field(0), 1.5);
        assert_eq!(ising.offset(), 1.5);
    }

    #[test]
    fn single_quadratic_term() {
        let mut q = QuboModel::new(2);
        q.add_quadratic(1, 0, 2.0);
        assert_eq!(q.quadratic().keys().collect::<Vec<_>>(), vec![&(0, 1)]);
        let ising = q.to_ising();
        assert_eq!(ising.coupling(0, 1), 0.5);
        assert_eq!(ising.field(0), 0.5);
        assert_eq!(ising.field(1), 0.5);
        assert_eq!(ising.offset(), 0.5);
    }

    #[test]
    fn cancelled_terms_are_not_stored() {
        let mut q = QuboModel::new(3);
        q.add_linear(0, 2.0);
        q.add_linear(0, -2.0);
        q.add_quadratic(1, 2, 1.0);
        q.add_quadratic(2, 1, -1.0);
        assert!(q.linear().is_empty());
        assert!(q.quadratic().is_empty());
    }

    #[test]
    fn energy_rejects_wrong_length() {
        let q = QuboModel::new(3);
        assert!(matches!(
            q.energy(&Assignment::zeros(2)),
            Err(Error::LengthMismatch { expected: 3, found: 2, .. })
        ));
    }

    #[test]
    fn all_zeros_is_offset() {
        let mut q = QuboModel::new(4);
        q.add_offset(-1.25);
        q.add_linear(2, 7.0);
        q.add_quadratic(0, 3, -4.0);
        assert_eq!(q.energy(&Assignment::zeros(4)).unwrap(), -1.25);
    }

    #[test]
    fn block_extraction_renumbers() {
        let mut q = QuboModel::new(6);
        q.add_linear(3, 1.0);
        q.add_quadratic(3, 5, 2.0);
        q.add_linear(0, 9.0);
        let b = q.block(3, 3);
        assert_eq!(b.num_vars(), 3);
        assert_eq!(b.linear_coeff(0), 1.0);
        assert_eq!(b.quadratic_coeff(0, 2), 2.0);
        assert_eq!(b.offset(), 0.0);
    }
}
