use serde::{Deserialize, Serialize};

use super::QuantumError;
use crate::linalg::{c, hermitian_eigensystem, ComplexMatrix, ComplexVector};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a valid density matrix.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityMatrixJson", into = "DensityMatrixJson")]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates with the default tolerances.
    pub fn new(mat: ComplexMatrix) -> Result<Self, QuantumError> {
        Self::with_positivity_tol(mat, POSITIVITY_TOL)
    }

    /// Validates, accepting eigenvalues down to `-positivity_tol`.
    pub fn with_positivity_tol(mat: ComplexMatrix, positivity_tol: f64) -> Result<Self, QuantumError> {
        let invalid = |msg: String| Err(QuantumError::InvalidDensityMatrix(msg));
        if !mat.is_square() || mat.rows() == 0 {
            return invalid(format!("shape {:?} is not square", mat.shape()));
        }
        if mat.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("non-finite entry".into());
        }
        let dev = mat.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return invalid(format!("not Hermitian (deviation {dev:e})"));
        }
        let tr = mat.trace();
        if (tr - c(1.0, 0.0)).norm() > TRACE_TOL {
            return invalid(format!("trace {tr} is not 1"));
        }
        let min = hermitian_eigensystem(&mat)?.min_value();
        if min < -positivity_tol {
            return invalid(format!("negative eigenvalue {min:e}"));
        }
        Ok(Self(mat))
    }

    pub(crate) fn from_unchecked(mat: ComplexMatrix) -> Self {
        Self(mat)
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(&ComplexMatrix::identity(dim) * (1.0 / dim as f64))
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &ComplexVector) -> Self {
        let psi = psi.normalized();
        Self(psi.outer(&psi))
    }

    /// `|ij><ij|` for two qubits, `i, j` in `{0, 1}`.
    pub fn basis_state(i: usize, j: usize) -> Result<Self, QuantumError> {
        if i > 1 || j > 1 {
            return Err(QuantumError::InvalidArgument(format!(
                "basis label |{i}{j}> is not a two-qubit state"
            )));
        }
        Ok(Self::pure(&ComplexVector::basis(4, 2 * i + j)))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `Re tr(rho A)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        (&self.0 * op).trace().re
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigensystem(&self.0.hermitian_part())
            .expect("hermitian part is Hermitian")
            .values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Wire form: `{"dim": d, "re": [...], "im": [...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for DensityMatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
        }
    }
}

impl From<DensityMatrix> for DensityMatrixJson {
    fn from(rho: DensityMatrix) -> Self {
        Self::from(&rho.0)
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = QuantumError;

    fn try_from(j: DensityMatrixJson) -> Result<Self, QuantumError> {
        let n = j.dim * j.dim;
        if j.re.len() != n || j.im.len() != n {
            return Err(QuantumError::InvalidDensityMatrix(format!(
                "expected {n} real and imaginary parts for dim {}, got {} and {}",
                j.dim,
                j.re.len(),
                j.im.len()
            )));
        }
        let data = j.re.iter().zip(&j.im).map(|(&r, &i)| c(r, i)).collect();
        Self::new(ComplexMatrix::new(j.dim, j.dim, data)?)
    }
}
