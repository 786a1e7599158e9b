//! QUBO formulations of the closest string problem.
//!
//! Given `n` strings of length `m`, one binary selector per `(string, position)`
//! pair encodes a candidate closest string. A penalty term keeps exactly one
//! symbol per position, and an objective term charges each selected symbol by
//! its disagreement with the rest of its column. The crate builds both the
//! mismatch-count and the numeric variant of the objective, advises penalty
//! multipliers, solves models exactly or with multi-read simulated annealing,
//! and summarizes read sets by how often each decoded string occurs.
//!
//! ```
//! use csp_qubo::prelude::*;
//!
//! let instance = CspInstance::new(["aaa", "aaa", "ddd"]).unwrap();
//! let params = PenaltyParams::new(2.0, 1.0).unwrap();
//! let model = build_hamiltonian(&instance, params, &HamiltonianKind::Standard).unwrap();
//! let ground = solve_exhaustive(&model).unwrap();
//! assert_eq!(ground.energy, 15.0);
//! assert_eq!(
//!     decode(&ground.optima[0], &instance).unwrap(),
//!     DecodedOutcome::Valid("aaa".into())
//! );
//! ```

pub mod advisor;
pub mod analysis;
pub mod cli;
pub mod distance;
pub mod error;
pub mod hamiltonian;
pub mod instance;
pub mod model;
pub mod reference;
pub mod sampler;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::advisor::{
        a_range, advise, chain_strength_guideline, chain_strength_with, max_hb_bound,
        min_ha_exact, min_ha_paper, qpu_capacity, AdvisorReport, ChainCase, ChainPolicy,
        LambdaSource,
    };
    pub use crate::analysis::{decode, occurrence_report, DecodedOutcome, InvalidReason, OccurrenceReport};
    pub use crate::distance::{
        brute_force_closest, delta_i, hamming_distance, hamming_f, per_position_argmin,
        position_alphabet, sum_distance, ClosestResult, SearchSpace, DEFAULT_SEARCH_LIMIT,
    };
    pub use crate::error::{Error, Result};
    pub use crate::hamiltonian::{
        build_hamiltonian, build_objective_numeric, build_objective_standard, build_penalty,
        build_per_position, hamiltonian_energy_direct, HamiltonianKind, PenaltyParams, SymbolMap,
    };
    pub use crate::instance::{flat_index, CspInstance, VarIndex};
    pub use crate::model::{Assignment, IsingModel, QuboModel};
    pub use crate::sampler::{
        sample_sa, solve_decomposed, solve_exhaustive, AnnealSchedule, SampleSet,
    };
}
