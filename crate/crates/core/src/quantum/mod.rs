//! Two-qubit quantization of the synchronization model.
//!
//! The collective operators `l_i = (sigma_i x 1 + 1 x sigma_i) / 2` act on the
//! basis `|00>, |01>, |10>, |11>` with `sigma_z |0> = |0>`. The density
//! matrix obeys
//!
//! ```text
//! d rho / dt = [R rho, R^dag] + [R, rho R^dag],   R = l_z - i l_y
//! ```
//!
//! whose stationary states are exactly the operators supported on the two
//! dark states annihilated by `R`.

mod density;
mod lindblad;
mod operators;
mod stationary;

pub use density::{DensityMatrix, DensityMatrixJson, POSITIVITY_TOL, TRACE_TOL};
pub use lindblad::{
    ehrenfest_lx, evolve, evolve_with, lindblad_rhs, liouvillian_matrix, unvectorize, vectorize,
    EvolutionSample, MasterEquation, DEFAULT_DT, EVOLVED_POSITIVITY_TOL, POSITIVITY_LOST_BELOW,
};
pub use operators::{pauli_x, pauli_y, pauli_z, OperatorSet};
pub use stationary::{
    project_to_stationary, stationary_state, KernelBasis, StationaryFit, StationaryParams,
    PARAMS_TOL,
};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid stationary parameters: {0}")]
    InvalidParams(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("positivity lost at t = {t} (min eigenvalue {min_eigenvalue:e}); reduce dt")]
    PositivityLost { t: f64, min_eigenvalue: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
