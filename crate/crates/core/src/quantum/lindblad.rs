use super::{DensityMatrix, OperatorSet, QuantumError};
use crate::linalg::{c, commutator, hermitian_eigensystem, tensor_product, ComplexMatrix, ComplexVector};
use crate::ode::{rk4_step, step_schedule};

pub const DEFAULT_DT: f64 = 1e-3;
/// Evolution aborts once the smallest eigenvalue drops below this.
pub const POSITIVITY_LOST_BELOW: f64 = -1e-6;
/// Positivity slack expected of a healthy RK4 trajectory.
pub const EVOLVED_POSITIVITY_TOL: f64 = 1e-8;

/// `d rho/dt = [R rho, R^dag] + [R, rho R^dag]`, evaluated literally from the
/// commutators.
pub fn lindblad_rhs(rho: &DensityMatrix, ops: &OperatorSet) -> ComplexMatrix {
    let rho = rho.matrix();
    let left = commutator(&(&ops.r * rho), &ops.r_dagger).expect("square operators");
    let right = commutator(&ops.r, &(rho * &ops.r_dagger)).expect("square operators");
    &left + &right
}

/// Master equation with a single jump operator and an optional Hamiltonian:
///
/// `d rho/dt = -i[H, rho] + 2 R rho R^dag - R^dag R rho - rho R^dag R`.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    hamiltonian: ComplexMatrix,
    jump: ComplexMatrix,
    jump_dagger: ComplexMatrix,
    jump_dag_jump: ComplexMatrix,
}

impl MasterEquation {
    /// The synchronization dissipator `R = l_z - i l_y` with `H = 0`.
    pub fn new(ops: &OperatorSet) -> Self {
        Self {
            hamiltonian: ComplexMatrix::zeros(ops.dim(), ops.dim()),
            jump: ops.r.clone(),
            jump_dagger: ops.r_dagger.clone(),
            jump_dag_jump: ops.r_dag_r(),
        }
    }

    pub fn with_hamiltonian(mut self, h: ComplexMatrix) -> Result<Self, QuantumError> {
        if h.shape() != self.jump.shape() {
            return Err(QuantumError::InvalidArgument(format!(
                "Hamiltonian shape {:?} does not match {:?}",
                h.shape(),
                self.jump.shape()
            )));
        }
        if !h.is_hermitian(1e-12) {
            return Err(QuantumError::InvalidArgument("Hamiltonian is not Hermitian".into()));
        }
        self.hamiltonian = h;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.jump.rows()
    }

    pub fn rhs(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let sandwich = &(&(&self.jump * rho) * &self.jump_dagger) * 2.0;
        let anti = &(&self.jump_dag_jump * rho) + &(rho * &self.jump_dag_jump);
        let mut out = &sandwich - &anti;
        if self.hamiltonian.max_abs() > 0.0 {
            let unitary = commutator(&self.hamiltonian, rho).expect("square operators");
            out += &unitary.scale(c(0.0, -1.0));
        }
        out
    }

    /// Superoperator acting on column-stacked `vec(rho)`, using
    /// `vec(A rho B) = (B^T x A) vec(rho)`.
    pub fn liouvillian(&self) -> ComplexMatrix {
        let d = self.dim();
        let id = ComplexMatrix::identity(d);
        let sandwich = &tensor_product(&self.jump.conj(), &self.jump) * 2.0;
        let left = tensor_product(&id, &self.jump_dag_jump);
        let right = tensor_product(&self.jump_dag_jump.transpose(), &id);
        let mut l = &(&sandwich - &left) - &right;
        let h = &self.hamiltonian;
        let unitary = &tensor_product(&id, h) - &tensor_product(&h.transpose(), &id);
        l += &unitary.scale(c(0.0, -1.0));
        l
    }
}

/// Column-stacking: `vec(M)[i + j d] = M[i, j]`.
pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    let (rows, cols) = m.shape();
    ComplexVector((0..rows * cols).map(|k| m[(k % rows, k / rows)]).collect())
}

/// Inverse of [`vectorize`] for a `d x d` matrix.
pub fn unvectorize(v: &ComplexVector, d: usize) -> ComplexMatrix {
    assert_eq!(v.dim(), d * d, "vector length is not d^2");
    ComplexMatrix::from_fn(d, d, |i, j| v[i + j * d])
}

/// 16x16 superoperator of the synchronization master equation.
pub fn liouvillian_matrix(ops: &OperatorSet) -> ComplexMatrix {
    MasterEquation::new(ops).liouvillian()
}

/// `d<l_x>/dt = <(l_z + i l_y)(l_z - i l_y)> + c.c. = 2 Re tr(rho R^dag R)`.
pub fn ehrenfest_lx(rho: &DensityMatrix, ops: &OperatorSet) -> f64 {
    let i = c(0.0, 1.0);
    let raising = &ops.lz + &ops.ly.scale(i);
    let lowering = &ops.lz - &ops.ly.scale(i);
    2.0 * rho.expectation(&(&raising * &lowering))
}

#[derive(Debug, Clone)]
pub struct EvolutionSample {
    pub t: f64,
    pub rho: DensityMatrix,
    pub min_eigenvalue: f64,
}

/// RK4 evolution under the synchronization master equation; one sample per step.
pub fn evolve(
    rho0: &DensityMatrix,
    ops: &OperatorSet,
    t_final: f64,
    dt: f64,
) -> Result<Vec<EvolutionSample>, QuantumError> {
    evolve_with(rho0, &MasterEquation::new(ops), t_final, dt)
}

/// RK4 evolution of `rho0` under `eq`, Hermitizing after every step.
pub fn evolve_with(
    rho0: &DensityMatrix,
    eq: &MasterEquation,
    t_final: f64,
    dt: f64,
) -> Result<Vec<EvolutionSample>, QuantumError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(QuantumError::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(QuantumError::InvalidArgument(format!(
            "t_final must be positive, got {t_final}"
        )));
    }
    if rho0.dim() != eq.dim() {
        return Err(QuantumError::InvalidArgument(format!(
            "state dimension {} does not match operators {}",
            rho0.dim(),
            eq.dim()
        )));
    }

    let mut samples = vec![EvolutionSample {
        t: 0.0,
        rho: rho0.clone(),
        min_eigenvalue: rho0.min_eigenvalue(),
    }];
    let mut rho = rho0.matrix().clone();
    for (t, h) in step_schedule(t_final, dt) {
        rho = rk4_step(|m: &ComplexMatrix| eq.rhs(m), &rho, h).hermitian_part();
        let min_eigenvalue = hermitian_eigensystem(&rho)?.min_value();
        if min_eigenvalue.is_nan() || min_eigenvalue < POSITIVITY_LOST_BELOW {
            return Err(QuantumError::PositivityLost { t, min_eigenvalue });
        }
        samples.push(EvolutionSample {
            t,
            rho: DensityMatrix::from_unchecked(rho.clone()),
            min_eigenvalue,
        });
    }
    Ok(samples)
}
