use crate::linalg::{c, tensor_product, ComplexMatrix};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// `(sigma x 1 + 1 x sigma) / 2`
fn collective(sigma: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    &(&tensor_product(sigma, &id) + &tensor_product(&id, sigma)) * 0.5
}

/// Collective spin operators of two qubits and the jump operator
/// `R = l_z - i l_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSet {
    pub lx: ComplexMatrix,
    pub ly: ComplexMatrix,
    pub lz: ComplexMatrix,
    pub l_squared: ComplexMatrix,
    pub r: ComplexMatrix,
    pub r_dagger: ComplexMatrix,
}

impl OperatorSet {
    pub fn two_qubit() -> Self {
        let lx = collective(&pauli_x());
        let ly = collective(&pauli_y());
        let lz = collective(&pauli_z());
        let l_squared = &(&(&lx * &lx) + &(&ly * &ly)) + &(&lz * &lz);
        let r = &lz - &ly.scale(c(0.0, 1.0));
        let r_dagger = r.adjoint();
        Self {
            lx,
            ly,
            lz,
            l_squared,
            r,
            r_dagger,
        }
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// `R^dag R`.
    pub fn r_dag_r(&self) -> ComplexMatrix {
        &self.r_dagger * &self.r
    }
}

impl Default for OperatorSet {
    fn default() -> Self {
        Self::two_qubit()
    }
}
