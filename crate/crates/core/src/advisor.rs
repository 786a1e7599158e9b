//! Guidance for the Lagrange multipliers and annealer-specific parameters.
//!
//! The admissible penalty range is `B < A ≤ ⌈B·m·n·(n-1) / λ⌉` where
//! `λ = min{H_A} / A`. Two values of `λ` are reported: the published
//! piecewise formula, and the true minimum of the penalty term, which is
//! `m·(n-1)` (attained with one or two selectors per column). They agree
//! only for `n = 2` and `n = 4`.

use serde::Serialize;

use crate::distance::hamming_f;
use crate::error::{Error, Result};
use crate::instance::CspInstance;

/// Pegasus working-graph size of the P16 topology.
pub const PEGASUS_P16: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HbBound {
    /// `B·m·n·(n-1)`, the generic upper bound on the standard objective.
    pub bound: f64,
    /// `B·Σ_i Σ_x Σ_y f(s_xi, s_yi)`, the objective at the all-ones state.
    pub exact: f64,
}

pub fn max_hb_bound(instance: &CspInstance, b: f64) -> HbBound {
    let (n, m) = (instance.n(), instance.m());
    let mismatched_pairs: usize = (1..=m)
        .map(|i| {
            let column: Vec<char> = instance.column_unchecked(i).collect();
            column
                .iter()
                .map(|&c| column.iter().map(|&o| hamming_f(c, o)).sum::<usize>())
                .sum::<usize>()
        })
        .sum();
    HbBound {
        bound: b * (m * n * (n.saturating_sub(1))) as f64,
        exact: b * mismatched_pairs as f64,
    }
}

/// Published piecewise minimum of the penalty term.
pub fn min_ha_paper(m: usize, n: usize, a: f64) -> Result<f64> {
    let (mf, nf) = (m as f64, n as f64);
    match n {
        0 | 1 => Err(Error::Domain(format!(
            "the published penalty minimum needs n >= 2, got n = {n}"
        ))),
        2 => Ok(a * mf),
        3 | 4 => Ok(a * mf * (nf - 1.0) * (nf - 2.0) / 2.0),
        _ => Ok(a * mf * nf),
    }
}

/// Exact minimum of the penalty term: per column `min_k A·[(n-k) + k(k-1)/2]`
/// over the number `k` of selected variables.
pub fn min_ha_exact(m: usize, n: usize, a: f64) -> f64 {
    let per_column = (0..=n)
        .map(|k| (n - k) as f64 + (k * k.saturating_sub(1)) as f64 / 2.0)
        .fold(f64::INFINITY, f64::min);
    a * m as f64 * per_column
}

/// Source of `λ` for the penalty range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LambdaSource {
    Paper,
    #[default]
    Exact,
}

/// `λ = min{H_A} / A`.
pub fn lambda(m: usize, n: usize, source: LambdaSource) -> Result<f64> {
    match source {
        LambdaSource::Paper => min_ha_paper(m, n, 1.0),
        LambdaSource::Exact => Ok(min_ha_exact(m, n, 1.0)),
    }
}

/// Half-open interval `(lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ARange {
    pub lower: f64,
    pub upper: f64,
}

impl ARange {
    pub fn contains(&self, a: f64) -> bool {
        a > self.lower && a <= self.upper
    }

    /// Midpoint rounded up; the CLI default for `A`.
    pub fn default_a(&self) -> f64 {
        ((self.lower + self.upper) / 2.0).ceil()
    }
}

impl std::fmt::Display for ARange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}]", self.lower, self.upper)
    }
}

pub fn a_range(instance: &CspInstance, b: f64, source: LambdaSource) -> Result<ARange> {
    let (n, m) = (instance.n(), instance.m());
    if n < 2 {
        return Err(Error::Domain(format!("the A range needs n >= 2, got n = {n}")));
    }
    if !(b > 0.0) {
        return Err(Error::Domain(format!("B must be positive, got {b}")));
    }
    let lambda = lambda(m, n, source)?;
    let upper = (b * (m * n * (n - 1)) as f64 / lambda).ceil();
    Ok(ARange { lower: b, upper })
}

/// Chain-strength regime. `Baseline` covers instances that embed without
/// chains; the numbered cases rank larger instances by string count first
/// and symbol spread second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum ChainCase {
    Baseline,
    /// Fewer strings, low symbol spread.
    Case1,
    /// Fewer strings, high symbol spread.
    Case2,
    /// More strings, low symbol spread.
    Case3,
    /// More strings, high symbol spread.
    Case4,
}

impl ChainCase {
    /// Suggested starting chain strength.
    pub fn gamma(self) -> f64 {
        match self {
            ChainCase::Baseline => 0.0,
            ChainCase::Case1 => 1.0,
            ChainCase::Case2 => 2.0,
            ChainCase::Case3 => 4.0,
            ChainCase::Case4 => 6.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ChainCase::Baseline => "baseline",
            ChainCase::Case1 => "case 1",
            ChainCase::Case2 => "case 2",
            ChainCase::Case3 => "case 3",
            ChainCase::Case4 => "case 4",
        }
    }
}

/// Thresholds separating the four chain-strength cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPolicy {
    /// Largest `n` with a chain-free (subgraph) embedding.
    pub baseline_max_n: usize,
    /// Largest `n` still counted as "fewer strings".
    pub few_strings_max_n: usize,
    /// Largest symbol spread still counted as "low".
    pub low_spread_max: f64,
}

impl Default for ChainPolicy {
    fn default() -> Self {
        Self {
            baseline_max_n: 4,
            few_strings_max_n: 8,
            low_spread_max: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainAdvice {
    pub case: ChainCase,
    pub gamma: f64,
    pub spread: f64,
}

/// Mean over positions of `(|Σ_i| - 1) / (n - 1)`, in `[0, 1]`; 0 for `n = 1`.
pub fn symbol_spread(instance: &CspInstance) -> f64 {
    let (n, m) = (instance.n(), instance.m());
    if n < 2 {
        return 0.0;
    }
    let total: f64 = (1..=m)
        .map(|i| {
            let distinct = instance
                .column_unchecked(i)
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            (distinct - 1) as f64 / (n - 1) as f64
        })
        .sum();
    total / m as f64
}

pub fn classify_chain_case(instance: &CspInstance, policy: &ChainPolicy) -> ChainCase {
    let n = instance.n();
    if n <= policy.baseline_max_n {
        return ChainCase::Baseline;
    }
    let few = n <= policy.few_strings_max_n;
    let low = symbol_spread(instance) <= policy.low_spread_max;
    match (few, low) {
        (true, true) => ChainCase::Case1,
        (true, false) => ChainCase::Case2,
        (false, true) => ChainCase::Case3,
        (false, false) => ChainCase::Case4,
    }
}

pub fn chain_strength_guideline(instance: &CspInstance) -> ChainAdvice {
    chain_strength_with(instance, &ChainPolicy::default(), None)
}

/// Like [`chain_strength_guideline`] with explicit thresholds and an optional
/// manual classification. An override never lifts an instance out of the
/// baseline: chain-free instances always get `γ = 0`.
pub fn chain_strength_with(
    instance: &CspInstance,
    policy: &ChainPolicy,
    case_override: Option<ChainCase>,
) -> ChainAdvice {
    let case = if instance.n() <= policy.baseline_max_n {
        ChainCase::Baseline
    } else {
        match case_override {
            Some(c) if c != ChainCase::Baseline => c,
            _ => classify_chain_case(instance, policy),
        }
    };
    ChainAdvice {
        case,
        gamma: case.gamma(),
        spread: symbol_spread(instance),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QpuCapacity {
    /// Largest complete graph `K_n` embeddable: `12M - 10`.
    pub max_n: usize,
    /// Strings supported when `m_max` positions are embedded together.
    pub max_strings: usize,
}

pub fn qpu_capacity(working_graph_size: usize, m_max: usize) -> Result<QpuCapacity> {
    if working_graph_size == 0 || m_max == 0 {
        return Err(Error::Domain(format!(
            "graph size and positions per embedding must be >= 1, got {working_graph_size} and {m_max}"
        )));
    }
    let max_n = 12 * working_graph_size - 10;
    Ok(QpuCapacity {
        max_n,
        max_strings: max_n / m_max,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdvisorReport {
    pub b: f64,
    pub hb_bound: HbBound,
    pub lambda_paper: Option<f64>,
    pub lambda_exact: f64,
    pub a_upper_paper: Option<f64>,
    pub a_upper_exact: Option<f64>,
    pub a_range_paper: Option<ARange>,
    pub a_range_exact: Option<ARange>,
    pub chain_case: ChainCase,
    pub gamma_suggested: f64,
    pub symbol_spread: f64,
    pub capacity_p16: usize,
    pub max_strings_for_window: usize,
}

impl AdvisorReport {
    pub fn a_range(&self, source: LambdaSource) -> Option<ARange> {
        match source {
            LambdaSource::Paper => self.a_range_paper,
            LambdaSource::Exact => self.a_range_exact,
        }
    }
}

/// Collects every figure above. `window` is the number of positions embedded
/// at once (defaults to `m`).
pub fn advise(
    instance: &CspInstance,
    b: f64,
    window: Option<usize>,
    case_override: Option<ChainCase>,
) -> Result<AdvisorReport> {
    let (n, m) = (instance.n(), instance.m());
    let paper = a_range(instance, b, LambdaSource::Paper).ok();
    let exact = a_range(instance, b, LambdaSource::Exact).ok();
    let chain = chain_strength_with(instance, &ChainPolicy::default(), case_override);
    let cap = qpu_capacity(PEGASUS_P16, window.unwrap_or(m).max(1))?;
    Ok(AdvisorReport {
        b,
        hb_bound: max_hb_bound(instance, b),
        lambda_paper: min_ha_paper(m, n, 1.0).ok(),
        lambda_exact: min_ha_exact(m, n, 1.0),
        a_upper_paper: paper.map(|r| r.upper),
        a_upper_exact: exact.map(|r| r.upper),
        a_range_paper: paper,
        a_range_exact: exact,
        chain_case: chain.case,
        gamma_suggested: chain.gamma,
        symbol_spread: chain.spread,
        capacity_p16: cap.max_n,
        max_strings_for_window: cap.max_strings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(k: usize) -> CspInstance {
        match k {
            1 => CspInstance::new(["aaa", "aaa", "ddd"]),
            2 => CspInstance::new(["aaa", "aaa", "ddd", "ddd", "ddd"]),
            3 => CspInstance::new(["aaa", "aaa", "ded", "ded", "ded", "ddd"]),
            _ => CspInstance::new(["abcdef", "ghijkl", "abcghi", "xyzjkl", "abcmno"]),
        }
        .unwrap()
    }

    #[test]
    fn hb_bounds() {
        assert_eq!(max_hb_bound(&set(1), 1.0), HbBound { bound: 18.0, exact: 12.0 });
        assert_eq!(max_hb_bound(&set(2), 1.0), HbBound { bound: 60.0, exact: 36.0 });
        let single = CspInstance::new(["abc"]).unwrap();
        assert_eq!(max_hb_bound(&single, 1.0), HbBound { bound: 0.0, exact: 0.0 });
    }

    #[test]
    fn published_penalty_minimum() {
        assert_eq!(min_ha_paper(3, 2, 1.0).unwrap(), 3.0);
        assert_eq!(min_ha_paper(3, 4, 1.0).unwrap(), 9.0);
        assert_eq!(min_ha_paper(3, 5, 1.0).unwrap(), 15.0);
        assert!(min_ha_paper(3, 1, 1.0).is_err());
    }

    #[test]
    fn exact_penalty_minimum() {
        assert_eq!(min_ha_exact(3, 2, 1.0), 3.0);
        assert_eq!(min_ha_exact(3, 3, 1.0), 6.0);
        assert_eq!(min_ha_exact(1, 5, 2.0), 8.0);
        assert_eq!(min_ha_exact(4, 1, 1.0), 0.0);
        for n in 1..12 {
            assert_eq!(min_ha_exact(2, n, 1.5), 1.5 * 2.0 * (n - 1) as f64);
        }
    }

    #[test]
    fn penalty_ranges() {
        let r = a_range(&set(1), 1.0, LambdaSource::Paper).unwrap();
        assert_eq!(r, ARange { lower: 1.0, upper: 6.0 });
        assert!(r.contains(2.0));
        assert!(!r.contains(1.0));
        let r = a_range(&set(1), 1.0, LambdaSource::Exact).unwrap();
        assert_eq!(r, ARange { lower: 1.0, upper: 3.0 });
        assert_eq!(r.default_a(), 2.0);
        let r = a_range(&set(3), 1.0, LambdaSource::Paper).unwrap();
        assert_eq!(r, ARange { lower: 1.0, upper: 5.0 });
        assert!(r.contains(5.0));
        let single = CspInstance::new(["abc"]).unwrap();
        assert!(a_range(&single, 1.0, LambdaSource::Exact).is_err());
    }

    #[test]
    fn chain_strength_defaults() {
        let c = chain_strength_guideline(&set(1));
        assert_eq!((c.case, c.gamma), (ChainCase::Baseline, 0.0));
        // default thresholds: n = 5 and 6 count as "fewer strings"
        assert_eq!(chain_strength_guideline(&set(2)).case, ChainCase::Case1);
        assert_eq!(chain_strength_guideline(&set(3)).case, ChainCase::Case1);
        assert_eq!(chain_strength_guideline(&set(4)).case, ChainCase::Case2);
        assert!((symbol_spread(&set(2)) - 0.25).abs() < 1e-12);
        assert!((symbol_spread(&set(4)) - 0.625).abs() < 1e-12);
    }

    #[test]
    fn chain_strength_overrides() {
        let policy = ChainPolicy::default();
        let c = chain_strength_with(&set(2), &policy, Some(ChainCase::Case2));
        assert_eq!((c.case, c.gamma), (ChainCase::Case2, 2.0));
        let c = chain_strength_with(&set(4), &policy, Some(ChainCase::Case4));
        assert_eq!((c.case, c.gamma), (ChainCase::Case4, 6.0));
        let c = chain_strength_with(&set(1), &policy, Some(ChainCase::Case4));
        assert_eq!(c.gamma, 0.0);
    }

    #[test]
    fn capacities() {
        assert_eq!(qpu_capacity(16, 1).unwrap(), QpuCapacity { max_n: 182, max_strings: 182 });
        assert_eq!(qpu_capacity(16, 6).unwrap(), QpuCapacity { max_n: 182, max_strings: 30 });
        assert_eq!(qpu_capacity(1, 1).unwrap(), QpuCapacity { max_n: 2, max_strings: 2 });
        assert!(qpu_capacity(0, 1).is_err());
    }

    #[test]
    fn report_for_set4() {
        let r = advise(&set(4), 1.0, None, None).unwrap();
        assert_eq!(r.lambda_paper, Some(30.0));
        assert_eq!(r.lambda_exact, 24.0);
        assert_eq!(r.a_upper_paper, Some(4.0));
        assert_eq!(r.a_upper_exact, Some(5.0));
        assert_eq!(r.capacity_p16, 182);
        assert_eq!(r.max_strings_for_window, 30);
    }
}
