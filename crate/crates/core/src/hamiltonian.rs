//! Penalty and objective Hamiltonians for the closest string problem.
//!
//! One selector `α_xi` per string `x` and position `i` says whether the
//! symbol `s_xi` is chosen for position `i`. The penalty
//!
//! ```text
//! H_A = A Σ_i Σ_x (1 - α_xi) + A Σ_i Σ_{x<y} α_xi α_yi
//! ```
//!
//! charges every unselected variable and every pair selected together in
//! the same column. The objectives weight each selector by how badly its
//! symbol matches the rest of its column, either by mismatch count
//! (`Standard`) or by a smooth numeric distance through a symbol map
//! (`Numeric`). No term couples different positions.

use std::collections::BTreeMap;

use crate::distance::{column_delta, hamming_f};
use crate::error::{Error, Result};
use crate::instance::CspInstance;
use crate::model::{Assignment, QuboModel};

/// Maps symbols to reals for the numeric objective.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SymbolMap {
    /// Unicode scalar value (ASCII code for ASCII text).
    #[default]
    CodePoint,
    Custom(BTreeMap<char, f64>),
}

impl SymbolMap {
    pub fn value(&self, c: char) -> Result<f64> {
        match self {
            SymbolMap::CodePoint => Ok(f64::from(u32::from(c))),
            SymbolMap::Custom(map) => map.get(&c).copied().ok_or(Error::UnmappedSymbol(c)),
        }
    }

    /// Checks that the map is defined and injective on the instance alphabet.
    pub fn validate(&self, instance: &CspInstance) -> Result<()> {
        let mut seen: Vec<(f64, char)> = Vec::new();
        for &c in instance.alphabet() {
            let v = self.value(c)?;
            if !v.is_finite() {
                return Err(Error::Domain(format!("symbol {c:?} maps to {v}")));
            }
            if let Some(&(_, first)) = seen.iter().find(|&&(w, _)| w == v) {
                return Err(Error::NonInjectiveBijection {
                    first,
                    second: c,
                    value: v,
                });
            }
            seen.push((v, c));
        }
        Ok(())
    }

    /// Pair weight `d² / (d² + 1)` with `d = C(a) - C(b)`, in `[0, 1)`.
    pub fn weight(&self, a: char, b: char) -> Result<f64> {
        let d = self.value(a)? - self.value(b)?;
        let d2 = d * d;
        Ok(d2 / (d2 + 1.0))
    }
}

/// Which objective Hamiltonian to pair with the penalty.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum HamiltonianKind {
    /// Mismatch counts: `H = H_A + H_B`.
    #[default]
    Standard,
    /// Smoothed numeric distances: `H' = H_A + H_B'`.
    Numeric(SymbolMap),
}

impl HamiltonianKind {
    pub fn numeric() -> Self {
        HamiltonianKind::Numeric(SymbolMap::CodePoint)
    }
}

/// Lagrange multipliers for the penalty (`a`) and objective (`b`) terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    pub a: f64,
    pub b: f64,
}

impl PenaltyParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!(
                "Lagrange multipliers must be positive, got A = {a}, B = {b}"
            )));
        }
        Ok(Self { a, b })
    }
}

fn penalty_block(model: &mut QuboModel, n: usize, base: usize, a: f64) {
    model.add_offset(a * n as f64);
    for x in 0..n {
        model.add_linear(base + x, -a);
        for y in x + 1..n {
            model.add_quadratic(base + x, base + y, a);
        }
    }
}

/// `H_A` over the whole instance.
pub fn build_penalty(instance: &CspInstance, a: f64) -> QuboModel {
    let n = instance.n();
    let mut model = QuboModel::new(instance.num_vars());
    for i in 0..instance.m() {
        penalty_block(&mut model, n, i * n, a);
    }
    model
}

/// Objective weight of selector `(x, i)` before scaling by `B`.
fn selector_weight(instance: &CspInstance, kind: &HamiltonianKind, x: usize, i: usize) -> Result<f64> {
    let symbol = instance.strings()[x - 1][i - 1];
    match kind {
        HamiltonianKind::Standard => Ok(column_delta(symbol, i, instance) as f64),
        HamiltonianKind::Numeric(map) => instance
            .column_unchecked(i)
            .map(|other| map.weight(symbol, other))
            .sum(),
    }
}

fn objective_block(
    model: &mut QuboModel,
    instance: &CspInstance,
    kind: &HamiltonianKind,
    b: f64,
    i: usize,
    base: usize,
) -> Result<()> {
    for x in 1..=instance.n() {
        model.add_linear(base + x - 1, b * selector_weight(instance, kind, x, i)?);
    }
    Ok(())
}

/// `H_B`: linear weight `B·Δ_i(s_xi)` on every selector.
pub fn build_objective_standard(instance: &CspInstance, b: f64) -> QuboModel {
    build_objective(instance, b, &HamiltonianKind::Standard).expect("standard objective is infallible")
}

/// `H_B'`: linear weight `B·Σ_y w(s_xi, s_yi)` on every selector.
pub fn build_objective_numeric(instance: &CspInstance, b: f64, map: &SymbolMap) -> Result<QuboModel> {
    build_objective(instance, b, &HamiltonianKind::Numeric(map.clone()))
}

pub fn build_objective(instance: &CspInstance, b: f64, kind: &HamiltonianKind) -> Result<QuboModel> {
    if let HamiltonianKind::Numeric(map) = kind {
        map.validate(instance)?;
    }
    let n = instance.n();
    let mut model = QuboModel::new(instance.num_vars());
    for i in 1..=instance.m() {
        objective_block(&mut model, instance, kind, b, i, (i - 1) * n)?;
    }
    Ok(model)
}

/// Penalty plus the chosen objective.
pub fn build_hamiltonian(
    instance: &CspInstance,
    params: PenaltyParams,
    kind: &HamiltonianKind,
) -> Result<QuboModel> {
    let mut model = build_penalty(instance, params.a);
    model.add_model(&build_objective(instance, params.b, kind)?);
    Ok(model)
}

/// The `n`-variable sub-model of position `i` (1-based), including its share
/// `A·n` of the constant term. Summed over all positions these reproduce the
/// full Hamiltonian exactly.
pub fn build_per_position(
    instance: &CspInstance,
    params: PenaltyParams,
    kind: &HamiltonianKind,
    i: usize,
) -> Result<QuboModel> {
    instance.check_position(i)?;
    if let HamiltonianKind::Numeric(map) = kind {
        map.validate(instance)?;
    }
    let n = instance.n();
    let mut model = QuboModel::new(n);
    penalty_block(&mut model, n, 0, params.a);
    objective_block(&mut model, instance, kind, params.b, i, 0)?;
    Ok(model)
}

/// Evaluates the Hamiltonian term by term straight from the instance, without
/// building a model. Serves as an independent check on [`build_hamiltonian`].
pub fn hamiltonian_energy_direct(
    instance: &CspInstance,
    params: PenaltyParams,
    kind: &HamiltonianKind,
    a: &Assignment,
) -> Result<f64> {
    let (n, m) = (instance.n(), instance.m());
    if a.len() != n * m {
        return Err(Error::LengthMismatch {
            index: None,
            expected: n * m,
            found: a.len(),
        });
    }
    let alpha = |x: usize, i: usize| f64::from(u8::from(a.get((i - 1) * n + (x - 1))));
    let s = instance.strings();

    let mut unselected = 0.0;
    let mut pairs = 0.0;
    let mut objective = 0.0;
    for i in 1..=m {
        for x in 1..=n {
            unselected += 1.0 - alpha(x, i);
            for y in x + 1..=n {
                pairs += alpha(x, i) * alpha(y, i);
            }
            let mut inner = 0.0;
            for y in 1..=n {
                inner += match kind {
                    HamiltonianKind::Standard => hamming_f(s[x - 1][i - 1], s[y - 1][i - 1]) as f64,
                    HamiltonianKind::Numeric(map) => map.weight(s[x - 1][i - 1], s[y - 1][i - 1])?,
                };
            }
            objective += alpha(x, i) * inner;
        }
    }
    Ok(params.a * unselected + params.a * pairs + params.b * objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::sum_distance;

    fn set(k: usize) -> CspInstance {
        match k {
            1 => CspInstance::new(["aaa", "aaa", "ddd"]),
            2 => CspInstance::new(["aaa", "aaa", "ddd", "ddd", "ddd"]),
            3 => CspInstance::new(["aaa", "aaa", "ded", "ded", "ded", "ddd"]),
            _ => CspInstance::new(["abcdef", "ghijkl", "abcghi", "xyzjkl", "abcmno"]),
        }
        .unwrap()
    }

    fn params(a: f64) -> PenaltyParams {
        PenaltyParams::new(a, 1.0).unwrap()
    }

    fn linear_block(model: &QuboModel, n: usize, i: usize) -> Vec<f64> {
        (0..n).map(|x| model.linear_coeff((i - 1) * n + x)).collect()
    }

    #[test]
    fn penalty_structure_set1() {
        let p = build_penalty(&set(1), 2.0);
        assert_eq!(p.offset(), 18.0);
        assert_eq!(p.linear().len(), 9);
        assert!(p.linear().values().all(|&c| c == -2.0));
        assert_eq!(p.quadratic().len(), 9);
        assert!(p.quadratic().values().all(|&c| c == 2.0));
        for &(u, v) in p.quadratic().keys() {
            assert_eq!(u / 3, v / 3, "cross-position term {u}-{v}");
        }
    }

    #[test]
    fn penalty_extremes() {
        for k in 1..=4 {
            let inst = set(k);
            let (n, m) = (inst.n() as f64, inst.m() as f64);
            let p = build_penalty(&inst, 3.0);
            let all_ones = p.energy(&Assignment::ones(inst.num_vars())).unwrap();
            assert!((all_ones - 3.0 * m * n * (n - 1.0) / 2.0).abs() < 1e-9);
            let all_zeros = p.energy(&Assignment::zeros(inst.num_vars())).unwrap();
            assert!((all_zeros - 3.0 * m * n).abs() < 1e-9);
        }
    }

    #[test]
    fn standard_objective_coefficients() {
        let o = build_objective_standard(&set(1), 1.0);
        assert_eq!(linear_block(&o, 3, 1), vec![1.0, 1.0, 2.0]);
        assert!(o.quadratic().is_empty());
        assert_eq!(o.offset(), 0.0);

        let o = build_objective_standard(&set(2), 1.0);
        assert_eq!(linear_block(&o, 5, 1), vec![3.0, 3.0, 2.0, 2.0, 2.0]);

        let single = CspInstance::new(["abc"]).unwrap();
        assert!(build_objective_standard(&single, 1.0).linear().is_empty());
    }

    #[test]
    fn numeric_weights() {
        let map = SymbolMap::CodePoint;
        assert_eq!(map.weight('a', 'a').unwrap(), 0.0);
        assert!((map.weight('a', 'd').unwrap() - 0.9).abs() < 1e-12);
        let o = build_objective_numeric(&set(1), 1.0, &map).unwrap();
        assert!((o.linear_coeff(2) - 1.8).abs() < 1e-12);
    }

    #[test]
    fn non_injective_map_is_rejected() {
        let map = SymbolMap::Custom(BTreeMap::from([('a', 1.0), ('d', 1.0)]));
        assert!(matches!(
            build_objective_numeric(&set(1), 1.0, &map),
            Err(Error::NonInjectiveBijection { first: 'a', second: 'd', .. })
        ));
        let partial = SymbolMap::Custom(BTreeMap::from([('a', 1.0)]));
        assert_eq!(
            build_objective_numeric(&set(1), 1.0, &partial),
            Err(Error::UnmappedSymbol('d'))
        );
    }

    #[test]
    fn combined_position_block_set1() {
        let h = build_hamiltonian(&set(1), params(2.0), &HamiltonianKind::Standard).unwrap();
        assert_eq!(linear_block(&h, 3, 1), vec![-1.0, -1.0, 0.0]);
        assert_eq!(h.quadratic_coeff(0, 1), 2.0);
        assert_eq!(h.quadratic_coeff(0, 2), 2.0);
        assert_eq!(h.quadratic_coeff(1, 2), 2.0);
        // zero-sum coefficient of (x=3, i=1) is not stored
        assert!(!h.linear().contains_key(&2));

        let block = build_per_position(&set(1), params(2.0), &HamiltonianKind::Standard, 1).unwrap();
        assert_eq!(block.offset(), 6.0);
        let energies: Vec<f64> = (0..8u64)
            .map(|w| block.energy(&Assignment::from_word(w, 3)).unwrap())
            .collect();
        let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, 5.0);
        // (1,0,0) and (0,1,0)
        assert_eq!(energies[1], 5.0);
        assert_eq!(energies[2], 5.0);
    }

    #[test]
    fn per_position_set3_column2() {
        let block = build_per_position(&set(3), params(5.0), &HamiltonianKind::Standard, 2).unwrap();
        assert_eq!(block.num_vars(), 6);
        let expected: Vec<f64> = [4.0, 4.0, 3.0, 3.0, 3.0, 5.0].iter().map(|d| d - 5.0).collect();
        assert_eq!(linear_block(&block, 6, 1), expected);
        assert!(build_per_position(&set(3), params(5.0), &HamiltonianKind::Standard, 4).is_err());
    }

    #[test]
    fn per_position_blocks_sum_to_full_model() {
        let inst = set(4);
        let kind = HamiltonianKind::numeric();
        let full = build_hamiltonian(&inst, params(4.0), &kind).unwrap();
        let n = inst.n();
        let a = Assignment::from_word(0x2b5_c3a1, inst.num_vars());
        let mut total = 0.0;
        for i in 1..=inst.m() {
            let block = build_per_position(&inst, params(4.0), &kind, i).unwrap();
            let part = Assignment::from(a.bits[(i - 1) * n..i * n].to_vec());
            total += block.energy(&part).unwrap();
        }
        assert!((total - full.energy(&a).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn energy_examples_set1() {
        let inst = set(1);
        let h = build_hamiltonian(&inst, params(2.0), &HamiltonianKind::Standard).unwrap();
        assert_eq!(h.energy(&Assignment::zeros(9)).unwrap(), 18.0);
        // offset 18, linear -18 + 12, quadratic 18
        assert_eq!(h.energy(&Assignment::ones(9)).unwrap(), 30.0);
        let aaa = Assignment::from(vec![true, false, false, true, false, false, true, false, false]);
        assert_eq!(h.energy(&aaa).unwrap(), 15.0);
        let direct =
            hamiltonian_energy_direct(&inst, params(2.0), &HamiltonianKind::Standard, &Assignment::ones(9))
                .unwrap();
        assert_eq!(direct, 30.0);
    }

    #[test]
    fn one_hot_identity_standard() {
        let inst = set(2);
        let p = params(3.0);
        let h = build_hamiltonian(&inst, p, &HamiltonianKind::Standard).unwrap();
        // select string 3 ('d') at positions 1 and 3, string 1 ('a') at position 2
        let mut a = Assignment::zeros(15);
        a.bits[2] = true;
        a.bits[5] = true;
        a.bits[12] = true;
        let d = sum_distance(&['d', 'a', 'd'], &inst).unwrap() as f64;
        let expected = 3.0 * 3.0 * 4.0 + d;
        assert!((h.energy(&a).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn direct_evaluator_rejects_wrong_length() {
        assert!(hamiltonian_energy_direct(
            &set(1),
            params(2.0),
            &HamiltonianKind::Standard,
            &Assignment::zeros(8)
        )
        .is_err());
    }

    #[test]
    fn params_must_be_positive() {
        assert!(PenaltyParams::new(0.0, 1.0).is_err());
        assert!(PenaltyParams::new(2.0, -1.0).is_err());
        assert!(PenaltyParams::new(f64::NAN, 1.0).is_err());
    }
}
