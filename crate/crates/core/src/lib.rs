//! Nonequilibrium steady states of a three-qubit XX chain whose end spins sit in
//! two bosonic baths at different temperatures, and the pairwise concurrence of
//! those states.
//!
//! The pipeline is [`model`] → [`lindblad`] → [`steady`] → [`entanglement`],
//! with [`sweep`] composing them over parameter grids.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod state;
pub mod steady;
pub mod sweep;

pub use entanglement::{
    concurrence, eigenstate_populations, gibbs_state, pairwise_concurrences, partial_trace,
    ConcurrenceTriple, Pair, PairState, PopulationDistribution,
};
pub use error::{Error, Result};
pub use faer::c64;
pub use lindblad::{
    bose_occupation, dissipator_apply, eigenoperators, liouvillian, spectral_rate, BathSpec,
    EigenOperatorSet, Side, Superoperator, DEFAULT_GAMMA,
};
pub use model::{
    analytic_eigensystem, hamiltonian, verify_spectrum, EigenSystem, ModelParams, Operator,
};
pub use state::DensityMatrix;
pub use steady::{
    effective_hamiltonian, steady_state_null, steady_state_rk4, EffectiveHamiltonian, Method,
    Rk4Options, SolveDiagnostics,
};
pub use sweep::{emit, run_point, run_sweep, Format, Preset, SolverChoice, SweepRow, SweepSpec};
