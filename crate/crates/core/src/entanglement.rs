//! Peres partial-transpose test on the stationary family.
//!
//! For two qubits a state is separable iff its partial transpose is positive
//! semidefinite. For real `c` the partial transpose of the stationary state
//! has the eigenvector `(1,0,0,-1)/sqrt(2)` with eigenvalue `b/2`; its other
//! three eigenvalues solve
//!
//! ```text
//! lambda^3 - (a + b/2) lambda^2 - (b^2/4 + c^2 - ab/2) lambda + b^3/8 = 0
//! ```
//!
//! whose root product `-b^3/8` forces a negative eigenvalue whenever `b > 0`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{hermitian_eigensystem, ComplexMatrix, LinalgError};
use crate::quantum::{stationary_state, DensityMatrix, KernelBasis, QuantumError, StationaryParams, PARAMS_TOL};

/// Minimum PT eigenvalue at or above `-SEPARABILITY_TOL` counts as separable.
pub const SEPARABILITY_TOL: f64 = 1e-10;

/// Allowed disagreement between the closed-form and numerical PT spectra.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntanglementError {
    #[error("subsystem must be 1 or 2, got {0}")]
    BadSubsystem(usize),
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    BadDimension {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("closed-form spectrum requires real c, got Im c = {0:e}")]
    ComplexCoherence(f64),
    #[error("cubic has complex roots (discriminant indicator {0:e})")]
    ComplexRoots(f64),
    #[error("closed-form and numerical PT spectra differ by {0:e}")]
    ClosedFormMismatch(f64),
    #[error("grid must have at least 2 points per axis, got {0}")]
    InvalidGrid(usize),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subsystem {
    First,
    Second,
}

impl TryFrom<usize> for Subsystem {
    type Error = EntanglementError;

    fn try_from(k: usize) -> Result<Self, EntanglementError> {
        match k {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            other => Err(EntanglementError::BadSubsystem(other)),
        }
    }
}

/// Partial transpose of a `(da*db) x (da*db)` matrix over one factor.
pub fn partial_transpose_dims(
    m: &ComplexMatrix,
    (da, db): (usize, usize),
    subsystem: Subsystem,
) -> Result<ComplexMatrix, EntanglementError> {
    let n = da * db;
    if m.shape() != (n, n) {
        return Err(EntanglementError::BadDimension {
            expected: n,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (i1, i2) = (row / db, row % db);
        let (j1, j2) = (col / db, col % db);
        match subsystem {
            Subsystem::First => m[(j1 * db + i2, i1 * db + j2)],
            Subsystem::Second => m[(i1 * db + j2, j1 * db + i2)],
        }
    }))
}

/// Two-qubit partial transpose.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> Result<ComplexMatrix, EntanglementError> {
    partial_transpose_dims(rho.matrix(), (2, 2), subsystem)
}

/// Sum of the magnitudes of the negative eigenvalues.
pub fn negativity(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&x| x < 0.0).map(|x| -x).sum()
}

fn cubic_at(r: f64, b2: f64, b1: f64, b0: f64) -> f64 {
    ((r + b2) * r + b1) * r + b0
}

fn newton_polish(mut r: f64, b2: f64, b1: f64, b0: f64) -> f64 {
    for _ in 0..8 {
        let f = cubic_at(r, b2, b1, b0);
        let df = (3.0 * r + 2.0 * b2) * r + b1;
        if f == 0.0 || df == 0.0 {
            break;
        }
        let next = r - f / df;
        if cubic_at(next, b2, b1, b0).abs() >= f.abs() {
            break;
        }
        r = next;
    }
    r
}

/// Real roots (ascending) of `x^3 + b2 x^2 + b1 x + b0` when all three are real.
///
/// Trigonometric solution of the depressed cubic locates the roots; the most
/// isolated one is polished by Newton and deflated, and the remaining pair
/// comes from a cancellation-free quadratic formula. Deflation keeps double
/// roots accurate where the trigonometric form alone loses half the digits.
pub fn solve_real_cubic(b2: f64, b1: f64, b0: f64) -> Result<[f64; 3], EntanglementError> {
    let scale = 1.0 + b2.abs() + b1.abs().sqrt() + b0.abs().cbrt();
    let shift = b2 / 3.0;
    let p = b1 - b2 * b2 / 3.0;
    let q = 2.0 * b2.powi(3) / 27.0 - b2 * b1 / 3.0 + b0;

    let approx: [f64; 3] = if p.abs() <= 1e-14 * scale * scale {
        let t = (-q).cbrt();
        [t - shift; 3]
    } else if p > 0.0 {
        return Err(EntanglementError::ComplexRoots(p));
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = 3.0 * q / (p * m);
        if arg.abs() > 1.0 + 1e-9 {
            return Err(EntanglementError::ComplexRoots(arg.abs() - 1.0));
        }
        let theta = arg.clamp(-1.0, 1.0).acos() / 3.0;
        let tau = std::f64::consts::TAU;
        let mut r = [0, 1, 2].map(|k| m * (theta - tau * k as f64 / 3.0).cos() - shift);
        r.sort_by(f64::total_cmp);
        r
    };

    let isolated = if approx[1] - approx[0] > approx[2] - approx[1] {
        approx[0]
    } else {
        approx[2]
    };
    let r = newton_polish(isolated, b2, b1, b0);
    // x^2 + bq x + cq = (x^3 + b2 x^2 + b1 x + b0) / (x - r)
    let bq = b2 + r;
    // product of roots avoids cancellation when the remaining pair is tiny
    let cq = if r.abs() > 1e-8 * scale { -b0 / r } else { b1 + bq * r };
    let mut disc = bq * bq - 4.0 * cq;
    if disc < 0.0 {
        if disc < -1e-10 * scale * scale {
            return Err(EntanglementError::ComplexRoots(disc));
        }
        disc = 0.0;
    }
    let s = -0.5 * (bq + bq.signum() * disc.sqrt());
    let (x1, x2) = if s != 0.0 { (s, cq / s) } else { (-bq / 2.0, -bq / 2.0) };
    let mut roots = [r, x1, x2];
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Roots of the characteristic cubic of the PT stationary state (real `c`).
pub fn cubic_roots(params: &StationaryParams) -> Result<[f64; 3], EntanglementError> {
    let cc = params
        .real_c()
        .ok_or(EntanglementError::ComplexCoherence(params.c().im))?;
    let (a, b) = (params.a(), params.b());
    solve_real_cubic(-(a + b / 2.0), -(b * b / 4.0 + cc * cc - a * b / 2.0), b.powi(3) / 8.0)
}

/// `{b/2} U cubic_roots`, ascending.
pub fn closed_form_pt_spectrum(params: &StationaryParams) -> Result<[f64; 4], EntanglementError> {
    let [x, y, z] = cubic_roots(params)?;
    let mut all = [params.b() / 2.0, x, y, z];
    all.sort_by(f64::total_cmp);
    Ok(all)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtSpectrumReport {
    /// Numerical PT eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub negativity: f64,
    pub separable: bool,
    /// `{b/2} U cubic roots`; absent for complex `c`.
    pub closed_form_eigenvalues: Option<[f64; 4]>,
}

/// Numerical PT spectrum of an arbitrary two-qubit state.
pub fn ppt_spectrum(rho: &DensityMatrix) -> Result<PtSpectrumReport, EntanglementError> {
    let pt = partial_transpose(rho, Subsystem::Second)?;
    let eigenvalues = hermitian_eigensystem(&pt)?.values;
    let min_eigenvalue = eigenvalues[0];
    Ok(PtSpectrumReport {
        negativity: negativity(&eigenvalues),
        separable: min_eigenvalue >= -SEPARABILITY_TOL,
        min_eigenvalue,
        eigenvalues,
        closed_form_eigenvalues: None,
    })
}

/// PT analysis of the stationary state with `params`, cross-checking the
/// closed-form spectrum when `c` is real.
pub fn ppt_analyze(params: &StationaryParams) -> Result<PtSpectrumReport, EntanglementError> {
    let rho = stationary_state(params, &KernelBasis::standard());
    let mut report = ppt_spectrum(&rho)?;
    if params.real_c().is_some() {
        let closed = closed_form_pt_spectrum(params)?;
        let deviation = closed
            .iter()
            .zip(&report.eigenvalues)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        if deviation > CLOSED_FORM_TOL {
            return Err(EntanglementError::ClosedFormMismatch(deviation));
        }
        report.closed_form_eigenvalues = Some(closed);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    pub c: f64,
    pub min_pt_eigenvalue: f64,
    pub negativity: f64,
    pub separable: bool,
}

/// PT analysis over the uniform grid `a in [0,1]`, real `c in [-1/2, 1/2]`,
/// keeping only points with `ab >= c^2`. Rows are ordered by `(a, c)` grid index.
pub fn sweep(grid_n: usize) -> Result<Vec<SweepRow>, EntanglementError> {
    if grid_n < 2 {
        return Err(EntanglementError::InvalidGrid(grid_n));
    }
    let step = |k: usize| k as f64 / (grid_n - 1) as f64;
    let points: Vec<(f64, f64)> = (0..grid_n)
        .flat_map(|i| (0..grid_n).map(move |j| (step(i), step(j) - 0.5)))
        .filter(|&(a, cc)| a * (1.0 - a) - cc * cc >= -PARAMS_TOL)
        .collect();
    points
        .par_iter()
        .map(|&(a, cc)| {
            let report = ppt_analyze(&StationaryParams::real(a, cc)?)?;
            Ok(SweepRow {
                a,
                c: cc,
                min_pt_eigenvalue: report.min_eigenvalue,
                negativity: report.negativity,
                separable: report.separable,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ComplexVector};
    use crate::sampling::{random_complex_params, random_density_matrix, random_real_params, seeded_rng};
    use proptest::prelude::*;

    fn close(got: &[f64], want: &[f64], tol: f64) -> bool {
        got.len() == want.len() && got.iter().zip(want).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn subsystem_labels() {
        assert_eq!(Subsystem::try_from(1).unwrap(), Subsystem::First);
        assert_eq!(Subsystem::try_from(2).unwrap(), Subsystem::Second);
        assert_eq!(Subsystem::try_from(3), Err(EntanglementError::BadSubsystem(3)));
    }

    #[test]
    fn pt_of_maximally_mixed_is_itself() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert_eq!(&partial_transpose(&rho, Subsystem::Second).unwrap(), rho.matrix());
    }

    #[test]
    fn pt_of_singlet() {
        let singlet = DensityMatrix::pure(&KernelBasis::standard().psi2);
        let ev = hermitian_eigensystem(&partial_transpose(&singlet, Subsystem::Second).unwrap())
            .unwrap()
            .values;
        assert!(close(&ev, &[-0.5, 0.5, 0.5, 0.5], 1e-14));
    }

    #[test]
    fn pt_index_convention() {
        // |00><11| -> |01><10| under transposition of the second qubit
        let m = ComplexVector::basis(4, 0).outer(&ComplexVector::basis(4, 3));
        let pt2 = partial_transpose_dims(&m, (2, 2), Subsystem::Second).unwrap();
        assert_eq!(pt2, ComplexVector::basis(4, 1).outer(&ComplexVector::basis(4, 2)));
        let pt1 = partial_transpose_dims(&m, (2, 2), Subsystem::First).unwrap();
        assert_eq!(pt1, ComplexVector::basis(4, 2).outer(&ComplexVector::basis(4, 1)));
        assert!(partial_transpose_dims(&m, (2, 3), Subsystem::First).is_err());
    }

    #[test]
    fn pt_is_an_involution_with_matching_spectra() {
        let mut rng = seeded_rng(2);
        for _ in 0..50 {
            let rho = random_density_matrix(&mut rng, 4);
            for s in [Subsystem::First, Subsystem::Second] {
                let pt = partial_transpose(&rho, s).unwrap();
                let back = partial_transpose_dims(&pt, (2, 2), s).unwrap();
                assert_eq!(&back, rho.matrix());
                assert!(pt.is_hermitian(1e-15));
                assert!((pt.trace() - c(1.0, 0.0)).norm() <= 1e-14);
            }
            let e1 = hermitian_eigensystem(&partial_transpose(&rho, Subsystem::First).unwrap()).unwrap();
            let e2 = hermitian_eigensystem(&partial_transpose(&rho, Subsystem::Second).unwrap()).unwrap();
            assert!(close(&e1.values, &e2.values, 1e-10));
        }
    }

    #[test]
    fn pt_eigenvector_with_half_b() {
        let v = ComplexVector::from_real(&[1.0, 0.0, 0.0, -1.0]).normalized();
        let mut rng = seeded_rng(4);
        for _ in 0..50 {
            let p = random_real_params(&mut rng);
            let rho = stationary_state(&p, &KernelBasis::standard());
            let pt = partial_transpose(&rho, Subsystem::Second).unwrap();
            assert!(pt.mul_vec(&v).max_abs_diff(&v.scale(c(p.b() / 2.0, 0.0))) <= 1e-12);
        }
    }

    #[test]
    fn cubic_examples() {
        let singlet = cubic_roots(&StationaryParams::real(0.0, 0.0).unwrap()).unwrap();
        assert!(close(&singlet, &[-0.5, 0.5, 0.5], 1e-15));
        let product = cubic_roots(&StationaryParams::real(1.0, 0.0).unwrap()).unwrap();
        assert!(close(&product, &[0.0, 0.0, 1.0], 1e-15));

        let p = StationaryParams::real(0.5, 0.0).unwrap();
        let numeric = ppt_spectrum(&stationary_state(&p, &KernelBasis::standard())).unwrap();
        assert!(close(&closed_form_pt_spectrum(&p).unwrap(), &numeric.eigenvalues, 1e-9));
    }

    #[test]
    fn cubic_with_real_c_factors_through_half_b() {
        // c = 0: (x - b/2)(x^2 - a x - b^2/4)
        for a in [0.1, 0.37, 0.8] {
            let b: f64 = 1.0 - a;
            let roots = cubic_roots(&StationaryParams::real(a, 0.0).unwrap()).unwrap();
            let d = (a * a + b * b).sqrt();
            let mut want = [b / 2.0, (a - d) / 2.0, (a + d) / 2.0];
            want.sort_by(f64::total_cmp);
            assert!(close(&roots, &want, 1e-14));
        }
    }

    #[test]
    fn cubic_solver_special_cases() {
        // (x - 1)^3
        assert!(close(&solve_real_cubic(-3.0, 3.0, -1.0).unwrap(), &[1.0, 1.0, 1.0], 1e-12));
        // (x - 2)(x + 1)^2
        assert!(close(&solve_real_cubic(0.0, -3.0, -2.0).unwrap(), &[-1.0, -1.0, 2.0], 1e-14));
        // x^3 + x has complex roots
        assert!(matches!(solve_real_cubic(0.0, 1.0, 0.0), Err(EntanglementError::ComplexRoots(_))));
    }

    #[test]
    fn complex_c_has_no_closed_form() {
        let p = StationaryParams::new(0.5, c(0.1, 0.2)).unwrap();
        assert!(matches!(cubic_roots(&p), Err(EntanglementError::ComplexCoherence(_))));
        let report = ppt_analyze(&p).unwrap();
        assert!(report.closed_form_eigenvalues.is_none());
        assert!(!report.separable);
    }

    #[test]
    fn analyze_corners() {
        let product = ppt_analyze(&StationaryParams::real(1.0, 0.0).unwrap()).unwrap();
        assert!(product.separable);
        assert!(close(&product.eigenvalues, &[0.0, 0.0, 0.0, 1.0], 1e-14));
        let singlet = ppt_analyze(&StationaryParams::real(0.0, 0.0).unwrap()).unwrap();
        assert!(!singlet.separable);
        assert!((singlet.negativity - 0.5).abs() <= 1e-14);
        assert!(!ppt_analyze(&StationaryParams::real(0.9, 0.0).unwrap()).unwrap().separable);
    }

    #[test]
    fn negativity_vanishes_along_c_zero() {
        let values: Vec<f64> = (0..20)
            .map(|k| 0.5 * (1.0 - k as f64 / 20.0))
            .map(|b| ppt_analyze(&StationaryParams::real(1.0 - b, 0.0).unwrap()).unwrap().negativity)
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
        assert!(*values.last().unwrap() < 1e-3);
    }

    #[test]
    fn sweep_grid() {
        assert!(matches!(sweep(1), Err(EntanglementError::InvalidGrid(1))));
        let rows = sweep(11).unwrap();
        let at = |a: f64, cc: f64| {
            rows.iter()
                .find(|r| (r.a - a).abs() < 1e-12 && (r.c - cc).abs() < 1e-12)
                .copied()
                .unwrap()
        };
        assert!(at(1.0, 0.0).separable);
        assert!((at(0.0, 0.0).negativity - 0.5).abs() <= 1e-12);
        assert!(rows.iter().filter(|r| r.a < 1.0).all(|r| !r.separable));
        // corners (0.5, +-0.5) sit on the pure-state boundary
        at(0.5, 0.5);
        at(0.5, -0.5);
        assert!(rows.iter().all(|r| r.a * (1.0 - r.a) >= r.c * r.c - 1e-12));
        // deterministic ordering
        assert!(rows.windows(2).all(|w| (w[0].a, w[0].c) < (w[1].a, w[1].c)));
    }

    #[test]
    fn random_complex_c_states_are_entangled() {
        let mut rng = seeded_rng(8);
        for _ in 0..50 {
            let p = random_complex_params(&mut rng);
            if p.b() > 1e-3 {
                assert!(!ppt_analyze(&p).unwrap().separable);
            }
        }
    }

    proptest! {
        #[test]
        fn closed_form_matches_numeric(a in 0.0f64..=1.0, t in -1.0f64..=1.0) {
            let cc = t * (a * (1.0 - a)).sqrt();
            let p = StationaryParams::real(a, cc).unwrap();
            let report = ppt_analyze(&p).unwrap();
            let closed = report.closed_form_eigenvalues.unwrap();
            prop_assert!(close(&closed, &report.eigenvalues, 1e-9));
            prop_assert!((report.eigenvalues.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        }

        #[test]
        fn exactly_one_negative_root(a in 0.0f64..0.999_999, t in -1.0f64..=1.0) {
            let cc = t * (a * (1.0 - a)).sqrt();
            let roots = cubic_roots(&StationaryParams::real(a, cc).unwrap()).unwrap();
            prop_assert_eq!(roots.iter().filter(|&&x| x < 0.0).count(), 1);
        }
    }
}
