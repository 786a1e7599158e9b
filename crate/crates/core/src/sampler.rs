//! Ground-state search over QUBO models: exhaustive enumeration, the
//! per-position decomposition, and a multi-read simulated annealer that
//! mimics the repeated-read workflow of an annealing QPU.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_per_position, HamiltonianKind, PenaltyParams};
use crate::instance::CspInstance;
use crate::model::{Assignment, QuboModel};

/// Largest variable count [`solve_exhaustive`] accepts by default.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;
/// Cap on the number of tied optima collected.
pub const MAX_TIES: usize = 10_000;

const TIE_TOLERANCE: f64 = 1e-9;
// running Gray-code energies drift; anything this close to the best is re-evaluated
const SCREEN_TOLERANCE: f64 = 1e-6;

/// Adjacency form of a model for fast single-flip updates.
#[derive(Debug, Clone)]
struct Compiled {
    offset: f64,
    linear: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Compiled {
    fn new(model: &QuboModel) -> Self {
        let n = model.num_vars();
        let mut linear = vec![0.0; n];
        for (&u, &c) in model.linear() {
            linear[u] = c;
        }
        let mut neighbors = vec![Vec::new(); n];
        for (&(u, v), &c) in model.quadratic() {
            neighbors[u].push((v, c));
            neighbors[v].push((u, c));
        }
        Self {
            offset: model.offset(),
            linear,
            neighbors,
        }
    }

    fn len(&self) -> usize {
        self.linear.len()
    }

    fn energy_word(&self, word: u64) -> f64 {
        let on = |k: usize| word >> k & 1 == 1;
        let mut e = self.offset;
        for u in 0..self.len() {
            if on(u) {
                e += self.linear[u];
                for &(v, c) in &self.neighbors[u] {
                    if v > u && on(v) {
                        e += c;
                    }
                }
            }
        }
        e
    }

    /// Energy change from flipping bit `k` of `word`.
    fn flip_delta_word(&self, word: u64, k: usize) -> f64 {
        let field = self.linear[k]
            + self.neighbors[k]
                .iter()
                .filter(|&&(v, _)| word >> v & 1 == 1)
                .map(|&(_, c)| c)
                .sum::<f64>();
        if word >> k & 1 == 1 {
            -field
        } else {
            field
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveSolution {
    pub energy: f64,
    /// All optimal assignments, in increasing binary-word order.
    pub optima: Vec<Assignment>,
    /// Set when more than [`MAX_TIES`] optima exist and the list was cut.
    pub truncated: bool,
}

/// Enumerates all `2^num_vars` assignments in Gray-code order.
pub fn solve_exhaustive(model: &QuboModel) -> Result<ExhaustiveSolution> {
    solve_exhaustive_with_limit(model, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn solve_exhaustive_with_limit(model: &QuboModel, limit: usize) -> Result<ExhaustiveSolution> {
    let num_vars = model.num_vars();
    if num_vars > limit || num_vars >= 64 {
        return Err(Error::TooManyVariables { num_vars, limit });
    }
    let compiled = Compiled::new(model);

    let mut best = f64::INFINITY;
    let mut optima: Vec<u64> = Vec::new();
    let mut truncated = false;
    let mut consider = |word: u64, running: f64, best: &mut f64| {
        if running > *best + SCREEN_TOLERANCE {
            return;
        }
        let exact = compiled.energy_word(word);
        if exact < *best - TIE_TOLERANCE {
            *best = exact;
            optima.clear();
            truncated = false;
            optima.push(word);
        } else if (exact - *best).abs() <= TIE_TOLERANCE {
            if optima.len() < MAX_TIES {
                optima.push(word);
            } else {
                truncated = true;
            }
        }
    };

    let mut word = 0u64;
    let mut running = compiled.offset;
    consider(word, running, &mut best);
    for g in 1..(1u64 << num_vars) {
        let k = g.trailing_zeros() as usize;
        running += compiled.flip_delta_word(word, k);
        word ^= 1 << k;
        consider(word, running, &mut best);
    }

    optima.sort_unstable();
    let optima: Vec<Assignment> = optima
        .into_iter()
        .map(|w| Assignment::from_word(w, num_vars))
        .collect();
    let energy = model.energy(&optima[0])?;
    Ok(ExhaustiveSolution {
        energy,
        optima,
        truncated,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedSolution {
    /// Sum of the per-position minima.
    pub energy: f64,
    /// First optimum of every block, concatenated in position order.
    pub assignment: Assignment,
    pub block_energies: Vec<f64>,
    pub block_optima: Vec<Vec<Assignment>>,
    pub truncated: bool,
}

/// Solves each position's `n`-variable block exhaustively. Valid because the
/// Hamiltonians have no couplings across positions.
pub fn solve_decomposed(
    instance: &CspInstance,
    params: PenaltyParams,
    kind: &HamiltonianKind,
) -> Result<DecomposedSolution> {
    solve_decomposed_with_limit(instance, params, kind, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn solve_decomposed_with_limit(
    instance: &CspInstance,
    params: PenaltyParams,
    kind: &HamiltonianKind,
    limit: usize,
) -> Result<DecomposedSolution> {
    let blocks = (1..=instance.m())
        .map(|i| {
            let block = build_per_position(instance, params, kind, i)?;
            solve_exhaustive_with_limit(&block, limit)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecomposedSolution {
        energy: blocks.iter().map(|b| b.energy).sum(),
        assignment: Assignment::concat(blocks.iter().map(|b| &b.optima[0])),
        block_energies: blocks.iter().map(|b| b.energy).collect(),
        truncated: blocks.iter().any(|b| b.truncated),
        block_optima: blocks.into_iter().map(|b| b.optima).collect(),
    })
}

/// Geometric cooling from `initial_temperature` to `final_temperature`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    initial_temperature: f64,
    final_temperature: f64,
    sweeps: usize,
}

impl AnnealSchedule {
    pub fn new(initial_temperature: f64, final_temperature: f64, sweeps: usize) -> Result<Self> {
        if !(final_temperature > 0.0) || !(initial_temperature >= final_temperature) || sweeps == 0 {
            return Err(Error::Domain(format!(
                "invalid schedule: need initial ({initial_temperature}) >= final ({final_temperature}) > 0 and sweeps ({sweeps}) >= 1"
            )));
        }
        Ok(Self {
            initial_temperature,
            final_temperature,
            sweeps,
        })
    }

    /// Starts at the largest coefficient magnitude, ends at 0.01, and runs
    /// `20·num_vars` sweeps per read.
    pub fn for_model(model: &QuboModel) -> Self {
        let final_temperature = 0.01;
        Self {
            initial_temperature: model.max_abs_coefficient().max(final_temperature),
            final_temperature,
            sweeps: (20 * model.num_vars()).max(1),
        }
    }

    pub fn initial_temperature(&self) -> f64 {
        self.initial_temperature
    }

    pub fn final_temperature(&self) -> f64 {
        self.final_temperature
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Temperature during sweep `s` (0-based).
    pub fn temperature(&self, s: usize) -> f64 {
        if self.sweeps == 1 {
            return self.final_temperature;
        }
        let t = s as f64 / (self.sweeps - 1) as f64;
        self.initial_temperature * (self.final_temperature / self.initial_temperature).powf(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub assignment: Assignment,
    pub energy: f64,
    pub count: usize,
}

/// Distinct assignments with their energies and multiplicities, sorted by
/// ascending energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub records: Vec<SampleRecord>,
    pub num_reads: usize,
}

impl SampleSet {
    /// Aggregates individual reads, evaluating each distinct assignment once.
    pub fn from_reads(model: &QuboModel, reads: &[Assignment]) -> Result<Self> {
        let mut counts: BTreeMap<&Assignment, usize> = BTreeMap::new();
        for a in reads {
            *counts.entry(a).or_default() += 1;
        }
        let mut records = counts
            .into_iter()
            .map(|(a, count)| {
                Ok(SampleRecord {
                    energy: model.energy(a)?,
                    assignment: a.clone(),
                    count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        records.sort_by(|x, y| {
            x.energy
                .total_cmp(&y.energy)
                .then_with(|| x.assignment.cmp(&y.assignment))
        });
        Ok(Self {
            records,
            num_reads: reads.len(),
        })
    }

    pub fn lowest(&self) -> Option<&SampleRecord> {
        self.records.first()
    }
}

/// Runs one annealing read per index. Read `r` draws from the ChaCha stream
/// `r` of `seed`, so the output does not depend on how reads are scheduled
/// across threads.
pub fn anneal_reads(
    model: &QuboModel,
    num_reads: usize,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<Vec<Assignment>> {
    if num_reads == 0 {
        return Err(Error::Domain("num_reads must be at least 1".into()));
    }
    let compiled = Compiled::new(model);
    Ok((0..num_reads)
        .into_par_iter()
        .map(|r| anneal_one(&compiled, schedule, seed, r as u64))
        .collect())
}

pub fn sample_sa(
    model: &QuboModel,
    num_reads: usize,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<SampleSet> {
    let reads = anneal_reads(model, num_reads, schedule, seed)?;
    SampleSet::from_reads(model, &reads)
}

fn anneal_one(model: &Compiled, schedule: &AnnealSchedule, seed: u64, read: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(read);

    let n = model.len();
    let mut bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    // local field: energy change of switching a variable on
    let mut field = model.linear.clone();
    for u in 0..n {
        if bits[u] {
            for &(v, c) in &model.neighbors[u] {
                field[v] += c;
            }
        }
    }

    for s in 0..schedule.sweeps {
        let temperature = schedule.temperature(s);
        for k in 0..n {
            let delta = if bits[k] { -field[k] } else { field[k] };
            if delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp() {
                let sign = if bits[k] { -1.0 } else { 1.0 };
                bits[k] = !bits[k];
                for &(v, c) in &model.neighbors[k] {
                    field[v] += sign * c;
                }
            }
        }
    }
    Assignment::from(bits)
}
