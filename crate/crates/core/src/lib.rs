//! Ground-state solvers for the biased quantum Rabi model
//!
//! ```text
//! H = ω a†a − (Ω/2) σx + (ε/2) σz + g σz (a† + a)
//! ```
//!
//! * [`variational`]: optimized single-coherent-state ansatz, its
//!   small-coupling fixed-point approximation and the GRWA baseline.
//! * [`exact`]: truncated-basis exact diagonalization used as the reference.
//! * [`sweep`]: parameter sweeps and figure datasets written as CSV.
//! * [`validate`]: property checks over a parameter grid.

// `!(a < b)` is deliberate: NaN has to fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exact;
pub mod model;
pub mod regime;
pub mod special;
pub mod subspace;
pub mod sweep;
pub mod validate;
pub mod variational;

pub use error::{Error, Result};
pub use exact::{ground_state, ExactSolution, TruncationPolicy};
pub use model::{BiasedParams, ModelParams};
pub use regime::{classify_regime, RegimeCase, RegimeDiagnostic};
pub use variational::{
    energy_functional, energy_gradient, solve_fixed_point, solve_grwa, solve_numeric, Method,
    MinimizerOptions, Observables, VariationalSolution,
};
