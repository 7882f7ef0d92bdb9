//! Discrete-time quantum walks whose positions are SU(1,1) coherent states
//! on a circle of the Poincaré disk.
//!
//! [`walk`] evolves amplitudes on the non-orthogonal site basis,
//! [`observables`] turns them into probabilities and coin entanglement through
//! the Gram matrix of the chosen [`Frame`], and [`oracle`] re-runs the same
//! walk in the discrete ladder basis as an independent reference.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod frame;
pub mod observables;
pub mod oracle;
pub mod su11;
pub mod walk;

pub type C64 = num_complex::Complex64;

pub use error::{Error, Result};
pub use frame::Frame;
pub use observables::{
    bloch_vector, entanglement_entropy, linear_fit, measure, probabilities, state_norm, std_dev,
    BlochVector, GramMatrix, LinearFit, ProbabilityDistribution, StepObservables,
};
pub use oracle::{
    cross_check, oracle_init, oracle_observables, oracle_step, CrossCheckConfig, CrossCheckReport,
    OracleInit, OracleState, Realization, SiteExpansions,
};
pub use su11::{hw_overlap, su11_overlap, HWParams, HyperboloidPoint, SU11Params};
pub use walk::{
    hadamard, run, run_with_gram, CoinOperator, PhaseMode, Trajectory, WalkConfig, WalkState,
};
