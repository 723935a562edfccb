//! Elliptical potentials under arbitrary matrix powers.
//!
//! The crate maintains ridge design matrices `V_t = λI + Σ_{s<t} u_s u_sᵀ`,
//! evaluates matrix-power norms `‖u‖_{V^{-p}}` for any `p > 0`, and exposes
//! closed-form bounds on `Σ_t ‖u_t‖_{V_{t+1}^{-p}}` together with every
//! intermediate inequality as a checkable predicate. A small LinUCB-style
//! bandit consumes the potentials.
//!
//! Randomized sweeps fan out over rayon when the default `parallel` feature
//! is enabled and fall back to a sequential loop otherwise; results are
//! identical either way.

pub mod accumulator;
pub mod bandit;
pub mod bounds;
pub mod error;
pub mod format;
pub mod linalg;
pub mod parallel;
pub mod potential;
pub mod rng;
pub mod sequences;
pub mod suite;
pub mod verifiers;

pub use accumulator::{Convention, DesignAccumulator, NormPair};
pub use bounds::{
    epl_empirical_sum, epl_upper_bound, increment_bound_check, lower_bound_sequence,
    lower_bound_value, run_sequence, sandwich_check, BoundRegime,
};
pub use error::{Error, Result};
pub use linalg::{SymEig, SymMatrix};
pub use potential::PotentialSpec;
pub use verifiers::ProofStepReport;
