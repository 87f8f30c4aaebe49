//! A classical model of phase synchronization between two subsystems, its
//! two-qubit Lindblad quantization, and a Peres partial-transpose analysis of
//! every stationary state of the quantum model.
//!
//! - [`linalg`]: dense complex matrices, Hermitian eigensolver, SVD null spaces.
//! - [`classical`]: the three-variable dissipative flow and its field representations.
//! - [`quantum`]: collective spin operators, the master equation and its stationary family.
//! - [`entanglement`]: partial transpose, closed-form PT spectrum, separability verdicts.
//! - [`verify`]: the end-to-end claim checklist used by the CLI and the acceptance suite.

pub mod classical;
pub mod entanglement;
pub mod linalg;
pub mod ode;
pub mod quantum;
pub mod sampling;
pub mod verify;

pub use linalg::{ComplexMatrix, ComplexVector, C64};
