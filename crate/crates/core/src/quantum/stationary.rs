use num_complex::Complex64;
use serde::Serialize;

use super::{DensityMatrix, QuantumError};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// Slack on `a + b = 1` and `ab >= |c|^2`.
pub const PARAMS_TOL: f64 = 1e-12;

/// The two dark states of `R`: `psi1 = (1,1,1,1)/2` (both qubits in `|+>`)
/// and the singlet `psi2 = (0,1,-1,0)/sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBasis {
    pub psi1: ComplexVector,
    pub psi2: ComplexVector,
}

impl KernelBasis {
    pub fn standard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            psi1: ComplexVector::from_real(&[0.5, 0.5, 0.5, 0.5]),
            psi2: ComplexVector::from_real(&[0.0, s, -s, 0.0]),
        }
    }

    pub fn vectors(&self) -> [&ComplexVector; 2] {
        [&self.psi1, &self.psi2]
    }
}

impl Default for KernelBasis {
    fn default() -> Self {
        Self::standard()
    }
}

/// Coefficients of `a|psi1><psi1| + b|psi2><psi2| + c|psi1><psi2| + h.c.`
/// with `a + b = 1`, `a, b >= 0`, `ab >= |c|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryParams {
    a: f64,
    b: f64,
    c: Complex64,
}

impl StationaryParams {
    /// `b = 1 - a`.
    pub fn new(a: f64, c: Complex64) -> Result<Self, QuantumError> {
        Self::with_b(a, 1.0 - a, c)
    }

    pub fn real(a: f64, c_re: f64) -> Result<Self, QuantumError> {
        Self::new(a, Complex64::new(c_re, 0.0))
    }

    pub fn with_b(a: f64, b: f64, c: Complex64) -> Result<Self, QuantumError> {
        let invalid = |msg: String| Err(QuantumError::InvalidParams(msg));
        if ![a, b, c.re, c.im].iter().all(|x| x.is_finite()) {
            return invalid("non-finite parameter".into());
        }
        if (a + b - 1.0).abs() > PARAMS_TOL {
            return invalid(format!("a + b = {} must equal 1", a + b));
        }
        if a < 0.0 || b < 0.0 {
            return invalid(format!("a = {a} and b = {b} must be nonnegative"));
        }
        if a * b - c.norm_sqr() < -PARAMS_TOL {
            return invalid(format!("ab = {} is below |c|^2 = {}", a * b, c.norm_sqr()));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// `Some(Re c)` when `|Im c| <= 1e-12`.
    pub fn real_c(&self) -> Option<f64> {
        (self.c.im.abs() <= 1e-12).then_some(self.c.re)
    }

    /// Roots of `lambda^2 - lambda + ab - |c|^2 = 0`, ascending: the nonzero
    /// spectrum of the stationary state.
    pub fn quadratic_roots(&self) -> [f64; 2] {
        let disc = (1.0 - 4.0 * (self.a * self.b - self.c.norm_sqr())).max(0.0).sqrt();
        [(1.0 - disc) / 2.0, (1.0 + disc) / 2.0]
    }
}

fn combine(a: f64, b: f64, cc: Complex64, basis: &KernelBasis) -> ComplexMatrix {
    let p11 = basis.psi1.outer(&basis.psi1);
    let p22 = basis.psi2.outer(&basis.psi2);
    let p12 = basis.psi1.outer(&basis.psi2);
    let coherence = p12.scale(cc);
    let mut m = &(&p11 * a) + &(&p22 * b);
    m += &coherence;
    m += &coherence.adjoint();
    m
}

/// The stationary density matrix for `params`.
pub fn stationary_state(params: &StationaryParams, basis: &KernelBasis) -> DensityMatrix {
    DensityMatrix::from_unchecked(combine(params.a, params.b, params.c, basis))
}

/// Overlaps of a state with the dark-state basis and its distance from the
/// stationary family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryFit {
    /// `<psi1|rho|psi1>`
    pub a: f64,
    /// `<psi2|rho|psi2>`
    pub b: f64,
    /// `<psi1|rho|psi2>`
    pub c: Complex64,
    /// Max-entry distance from `rho` to the stationary state with the
    /// overlaps rescaled so that `a + b = 1`.
    pub residual: f64,
}

impl StationaryFit {
    /// The fitted parameters rescaled to `a + b = 1`.
    pub fn params(&self) -> Result<StationaryParams, QuantumError> {
        let w = self.a + self.b;
        if w <= 0.0 {
            return Err(QuantumError::InvalidParams(
                "state has no weight on the dark subspace".into(),
            ));
        }
        StationaryParams::with_b(self.a / w, 1.0 - self.a / w, self.c / w)
    }
}

pub fn project_to_stationary(rho: &DensityMatrix, basis: &KernelBasis) -> StationaryFit {
    let m = rho.matrix();
    let a = basis.psi1.inner(&m.mul_vec(&basis.psi1)).re;
    let b = basis.psi2.inner(&m.mul_vec(&basis.psi2)).re;
    let cc = basis.psi1.inner(&m.mul_vec(&basis.psi2));
    let w = a + b;
    let residual = if w > 0.0 {
        m.max_abs_diff(&combine(a / w, b / w, cc / w, basis))
    } else {
        m.max_abs()
    };
    StationaryFit {
        a,
        b,
        c: cc,
        residual,
    }
}
