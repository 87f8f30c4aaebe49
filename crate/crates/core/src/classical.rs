//! The classical three-variable model of phase synchronization.
//!
//! State `l = (l_x, l_y, l_z)` evolves as
//!
//! ```text
//! dl_x/dt =  2 (l_y^2 + l_z^2)
//! dl_y/dt = -2 l_x l_y
//! dl_z/dt = -2 l_x l_z
//! ```
//!
//! with `l^2` and `k = l_y / l_z` conserved and every generic trajectory
//! ending at `(|l|, 0, 0)`. The same field is reproduced by two structural
//! representations: a dissipative cross-product form built from a complex
//! function `R(l)`, and a quasithermodynamic form built from a conserved `H`
//! and a non-decreasing `S`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ode::{rk4_step, step_schedule};

pub const DEFAULT_DT: f64 = 1e-3;

/// Below this `|l_z|` the ratio `l_y / l_z` is reported as undefined.
pub const K_UNDEFINED_BELOW: f64 = 1e-12;

/// Any component beyond this magnitude aborts integration.
pub const DIVERGENCE_GUARD: f64 = 1e6;

/// Step used by the central finite-difference gradient checks.
pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("state left the divergence guard at t = {t}: {state:?}")]
    StepTooLarge { t: f64, state: SpinVector },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpinVector {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl SpinVector {
    pub const fn new(lx: f64, ly: f64, lz: f64) -> Self {
        Self { lx, ly, lz }
    }

    pub fn from_array([lx, ly, lz]: [f64; 3]) -> Self {
        Self { lx, ly, lz }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.lx, self.ly, self.lz]
    }

    pub fn dot(self, o: Self) -> f64 {
        self.lx * o.lx + self.ly * o.ly + self.lz * o.lz
    }

    pub fn cross(self, o: Self) -> Self {
        Self {
            lx: self.ly * o.lz - self.lz * o.ly,
            ly: self.lz * o.lx - self.lx * o.lz,
            lz: self.lx * o.ly - self.ly * o.lx,
        }
    }

    /// `l^2`.
    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(self, o: Self) -> f64 {
        (self - o).max_abs()
    }

    /// `k = l_y / l_z`, `None` where `|l_z| < 1e-12`.
    pub fn phase_ratio(self) -> Option<f64> {
        (self.lz.abs() >= K_UNDEFINED_BELOW).then(|| self.ly / self.lz)
    }
}

impl Add for SpinVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.lx + o.lx, self.ly + o.ly, self.lz + o.lz)
    }
}

impl Sub for SpinVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.lx - o.lx, self.ly - o.ly, self.lz - o.lz)
    }
}

impl Neg for SpinVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.lx, -self.ly, -self.lz)
    }
}

impl Mul<f64> for SpinVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.lx * k, self.ly * k, self.lz * k)
    }
}

/// Two oscillators `z_j = r_j exp(i phi_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorPair {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl OscillatorPair {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn from_polar(r1: f64, phi1: f64, r2: f64, phi2: f64) -> Self {
        Self {
            z1: Complex64::from_polar(r1, phi1),
            z2: Complex64::from_polar(r2, phi2),
        }
    }
}

/// Classical Schwinger map:
/// `l_x = (z1* z2 + z1 z2*)/2`, `l_y = i(z1 z2* - z1* z2)/2`, `l_z = (|z1|^2 - |z2|^2)/2`.
///
/// `l_y = r1 r2 sin(phi2 - phi1)`, so `l_y = 0` marks phase locking.
pub fn schwinger_map(osc: OscillatorPair) -> SpinVector {
    let w = osc.z1.conj() * osc.z2;
    SpinVector::new(w.re, w.im, (osc.z1.norm_sqr() - osc.z2.norm_sqr()) / 2.0)
}

/// Right-hand side of the synchronization flow.
pub fn classical_field(l: SpinVector) -> SpinVector {
    SpinVector::new(
        2.0 * (l.ly * l.ly + l.lz * l.lz),
        -2.0 * l.lx * l.ly,
        -2.0 * l.lx * l.lz,
    )
}

/// A complex-valued function of the state with an analytic gradient.
pub trait ComplexPotential {
    fn value(&self, l: SpinVector) -> Complex64;
    /// `(dR/dl_x, dR/dl_y, dR/dl_z)`.
    fn gradient(&self, l: SpinVector) -> [Complex64; 3];
}

/// `R = l_z - i l_y`, the dissipator that generates the synchronization flow.
#[derive(Debug, Clone, Copy, Default)]
pub struct SyncDissipator;

impl ComplexPotential for SyncDissipator {
    fn value(&self, l: SpinVector) -> Complex64 {
        Complex64::new(l.lz, -l.ly)
    }

    fn gradient(&self, _: SpinVector) -> [Complex64; 3] {
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0), Complex64::new(1.0, 0.0)]
    }
}

/// Adapts a pair of closures into a [`ComplexPotential`].
pub struct FnPotential<V, G> {
    pub value: V,
    pub gradient: G,
}

impl<V, G> ComplexPotential for FnPotential<V, G>
where
    V: Fn(SpinVector) -> Complex64,
    G: Fn(SpinVector) -> [Complex64; 3],
{
    fn value(&self, l: SpinVector) -> Complex64 {
        (self.value)(l)
    }

    fn gradient(&self, l: SpinVector) -> [Complex64; 3] {
        (self.gradient)(l)
    }
}

/// Largest deviation between the analytic gradient of `r` and central
/// finite differences with step `h`.
pub fn potential_gradient_error<P: ComplexPotential + ?Sized>(r: &P, l: SpinVector, h: f64) -> f64 {
    let analytic = r.gradient(l);
    let mut worst = 0.0f64;
    for (axis, g) in analytic.iter().enumerate() {
        let mut e = [0.0; 3];
        e[axis] = h;
        let step = SpinVector::from_array(e);
        let fd = (r.value(l + step) - r.value(l - step)) / (2.0 * h);
        worst = worst.max((fd - g).norm());
    }
    worst
}

/// `l x (i R grad R* - i R* grad R)`, the dissipative part of the quantizable
/// form of the flow (the Hamiltonian part vanishes for this model).
pub fn dissipative_field<P: ComplexPotential + ?Sized>(l: SpinVector, r: &P) -> SpinVector {
    let value = r.value(l);
    let grad = r.gradient(l);
    let i = Complex64::i();
    let g: Vec<f64> = grad
        .iter()
        .map(|d| (i * value * d.conj() - i * value.conj() * d).re)
        .collect();
    l.cross(SpinVector::new(g[0], g[1], g[2]))
}

/// A conserved quantity `H` and a non-decreasing quantity `S` of a flow.
pub trait QuasiThermoFunctions {
    fn h(&self, l: SpinVector) -> f64;
    fn s(&self, l: SpinVector) -> f64;
    fn grad_h(&self, l: SpinVector) -> SpinVector;
    fn grad_s(&self, l: SpinVector) -> SpinVector;
}

/// `H = l^2 / 2`, `S = 2 l_x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SyncQuasiThermo;

impl QuasiThermoFunctions for SyncQuasiThermo {
    fn h(&self, l: SpinVector) -> f64 {
        l.norm_sqr() / 2.0
    }

    fn s(&self, l: SpinVector) -> f64 {
        2.0 * l.lx
    }

    fn grad_h(&self, l: SpinVector) -> SpinVector {
        l
    }

    fn grad_s(&self, _: SpinVector) -> SpinVector {
        SpinVector::new(2.0, 0.0, 0.0)
    }
}

/// Largest deviation of the analytic `grad H`, `grad S` from central finite
/// differences with step `h`.
pub fn quasithermo_gradient_error<F: QuasiThermoFunctions + ?Sized>(
    fns: &F,
    l: SpinVector,
    h: f64,
) -> f64 {
    let mut worst = 0.0f64;
    for axis in 0..3 {
        let mut e = [0.0; 3];
        e[axis] = h;
        let step = SpinVector::from_array(e);
        let fd_h = (fns.h(l + step) - fns.h(l - step)) / (2.0 * h);
        let fd_s = (fns.s(l + step) - fns.s(l - step)) / (2.0 * h);
        worst = worst
            .max((fd_h - fns.grad_h(l).to_array()[axis]).abs())
            .max((fd_s - fns.grad_s(l).to_array()[axis]).abs());
    }
    worst
}

/// `grad H x A` with `A = grad S x grad H`.
pub fn quasithermo_field<F: QuasiThermoFunctions + ?Sized>(l: SpinVector, fns: &F) -> SpinVector {
    let gh = fns.grad_h(l);
    let a = fns.grad_s(l).cross(gh);
    gh.cross(a)
}

/// Time series of an integration, with `H = l^2/2`, `S = 2 l_x` and
/// `k = l_y / l_z` recorded at every step.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpinVector>,
    pub h_values: Vec<f64>,
    pub s_values: Vec<f64>,
    pub k_values: Vec<Option<f64>>,
}

impl Trajectory {
    fn push(&mut self, t: f64, l: SpinVector) {
        let fns = SyncQuasiThermo;
        self.times.push(t);
        self.states.push(l);
        self.h_values.push(fns.h(l));
        self.s_values.push(fns.s(l));
        self.k_values.push(l.phase_ratio());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> SpinVector {
        *self.states.last().expect("trajectory is never empty")
    }

    /// `max_t |H(t) - H(0)|`.
    pub fn max_h_drift(&self) -> f64 {
        let h0 = self.h_values[0];
        self.h_values.iter().fold(0.0, |m, h| m.max((h - h0).abs()))
    }

    /// `max_t |k(t) - k(0)|` over steps where `k` is defined; `None` if `k(0)`
    /// is undefined.
    pub fn max_k_drift(&self) -> Option<f64> {
        let k0 = self.k_values[0]?;
        Some(
            self.k_values
                .iter()
                .flatten()
                .fold(0.0, |m, k| m.max((k - k0).abs())),
        )
    }

    /// Largest single-step decrease of `S` (zero if `S` never decreases).
    pub fn max_s_decrease(&self) -> f64 {
        self.s_values
            .windows(2)
            .fold(0.0, |m, w| m.max(w[0] - w[1]))
    }
}

/// Fixed-step RK4 integration of [`classical_field`] from `initial` to `t_final`.
pub fn integrate(initial: SpinVector, t_final: f64, dt: f64) -> Result<Trajectory, ClassicalError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ClassicalError::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(ClassicalError::InvalidArgument(format!(
            "t_final must be positive, got {t_final}"
        )));
    }
    if !initial.is_finite() {
        return Err(ClassicalError::InvalidArgument("initial state must be finite".into()));
    }

    let mut traj = Trajectory::default();
    let mut l = initial;
    traj.push(0.0, l);
    for (t, h) in step_schedule(t_final, dt) {
        l = rk4_step(|s: &SpinVector| classical_field(*s), &l, h);
        if !l.is_finite() || l.max_abs() > DIVERGENCE_GUARD {
            return Err(ClassicalError::StepTooLarge { t, state: l });
        }
        traj.push(t, l);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn field_examples() {
        assert_eq!(classical_field(SpinVector::new(1.0, 0.0, 0.0)), SpinVector::default());
        assert_eq!(classical_field(SpinVector::new(1.0, 2.0, 3.0)), SpinVector::new(26.0, -4.0, -6.0));
        assert_eq!(classical_field(SpinVector::new(0.0, 0.0, 1.0)), SpinVector::new(2.0, 0.0, 0.0));
    }

    #[test]
    fn schwinger_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(schwinger_map(OscillatorPair::new(one, one)), SpinVector::new(1.0, 0.0, 0.0));
        assert_eq!(schwinger_map(OscillatorPair::new(one, Complex64::i())), SpinVector::new(0.0, 1.0, 0.0));
        assert_eq!(schwinger_map(OscillatorPair::new(one, zero)), SpinVector::new(0.0, 0.0, 0.5));
    }

    #[test]
    fn schwinger_matches_literal_formula() {
        // (z1* z2 + z1 z2*)/2, i (z1 z2* - z1* z2)/2, (|z1|^2 - |z2|^2)/2
        let z1 = Complex64::new(0.3, -1.2);
        let z2 = Complex64::new(-0.7, 0.4);
        let i = Complex64::i();
        let lx = (z1.conj() * z2 + z1 * z2.conj()) / 2.0;
        let ly = i * (z1 * z2.conj() - z1.conj() * z2) / 2.0;
        let l = schwinger_map(OscillatorPair::new(z1, z2));
        assert_abs_diff_eq!(l.lx, lx.re, epsilon = 1e-15);
        assert_abs_diff_eq!(l.ly, ly.re, epsilon = 1e-15);
        assert!(ly.im.abs() < 1e-15);
        assert_abs_diff_eq!(l.lz, (z1.norm_sqr() - z2.norm_sqr()) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn dissipative_examples() {
        let l = SpinVector::new(1.0, 2.0, 3.0);
        assert_eq!(dissipative_field(l, &SyncDissipator), SpinVector::new(26.0, -4.0, -6.0));
        let zero = FnPotential {
            value: |_| Complex64::new(0.0, 0.0),
            gradient: |_| [Complex64::new(0.0, 0.0); 3],
        };
        assert_eq!(dissipative_field(l, &zero), SpinVector::default());
        assert_eq!(
            dissipative_field(SpinVector::new(1.0, 0.0, 0.0), &SyncDissipator),
            SpinVector::default()
        );
    }

    #[test]
    fn quasithermo_examples() {
        assert_eq!(
            quasithermo_field(SpinVector::new(1.0, 2.0, 3.0), &SyncQuasiThermo),
            SpinVector::new(26.0, -4.0, -6.0)
        );
        assert_eq!(
            quasithermo_field(SpinVector::new(0.0, 0.0, 1.0), &SyncQuasiThermo),
            SpinVector::new(2.0, 0.0, 0.0)
        );
        // grad S parallel to grad H gives no motion
        struct Parallel;
        impl QuasiThermoFunctions for Parallel {
            fn h(&self, l: SpinVector) -> f64 {
                l.norm_sqr() / 2.0
            }
            fn s(&self, l: SpinVector) -> f64 {
                3.0 * l.norm_sqr()
            }
            fn grad_h(&self, l: SpinVector) -> SpinVector {
                l
            }
            fn grad_s(&self, l: SpinVector) -> SpinVector {
                l * 6.0
            }
        }
        assert_eq!(quasithermo_field(SpinVector::new(0.4, -1.0, 2.0), &Parallel), SpinVector::default());
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let l = SpinVector::new(0.3, -1.1, 0.8);
        assert!(potential_gradient_error(&SyncDissipator, l, FD_STEP) < 1e-6);
        assert!(quasithermo_gradient_error(&SyncQuasiThermo, l, FD_STEP) < 1e-6);
        let wrong = FnPotential {
            value: |l: SpinVector| Complex64::new(l.lz * l.lz, 0.0),
            gradient: |_| [Complex64::new(0.0, 0.0); 3],
        };
        assert!(potential_gradient_error(&wrong, l, FD_STEP) > 1.0);
    }

    #[test]
    fn integrate_rejects_bad_arguments() {
        let l = SpinVector::new(0.0, 0.6, 0.8);
        assert!(matches!(integrate(l, 1.0, 0.0), Err(ClassicalError::InvalidArgument(_))));
        assert!(matches!(integrate(l, -1.0, 1e-3), Err(ClassicalError::InvalidArgument(_))));
        assert!(matches!(
            integrate(SpinVector::new(f64::NAN, 0.0, 0.0), 1.0, 1e-3),
            Err(ClassicalError::InvalidArgument(_))
        ));
    }

    #[test]
    fn divergence_guard_triggers_on_absurd_step() {
        let res = integrate(SpinVector::new(-1e5, 1e5, 1e5), 10.0, 1.0);
        assert!(matches!(res, Err(ClassicalError::StepTooLarge { .. })));
    }

    #[test]
    fn fixed_point_is_constant() {
        let traj = integrate(SpinVector::new(1.0, 0.0, 0.0), 1.0, 1e-3).unwrap();
        assert_eq!(traj.len(), 1001);
        assert!(traj.states.iter().all(|&s| s == SpinVector::new(1.0, 0.0, 0.0)));
        assert!(traj.k_values.iter().all(Option::is_none));
    }

    #[test]
    fn converges_to_synchronized_state() {
        let traj = integrate(SpinVector::new(0.0, 0.6, 0.8), 20.0, DEFAULT_DT).unwrap();
        assert!(traj.final_state().max_abs_diff(SpinVector::new(1.0, 0.0, 0.0)) <= 1e-6);
        assert!(traj.max_h_drift() <= 1e-8);
        for k in traj.k_values.iter().flatten() {
            assert_abs_diff_eq!(*k, 0.75, epsilon = 1e-7);
        }
        assert!(traj.max_s_decrease() <= 1e-12);
    }

    #[test]
    fn matches_closed_form_solution() {
        // l_x(t) = l tanh(2 l t + atanh(l_x0 / l))
        let l0 = SpinVector::new(-0.5, 1.0, -0.7);
        let l = l0.norm_sqr().sqrt();
        let traj = integrate(l0, 3.0, DEFAULT_DT).unwrap();
        let offset = (l0.lx / l).atanh();
        for (t, s) in traj.times.iter().zip(&traj.states).step_by(97) {
            assert_abs_diff_eq!(s.lx, l * (2.0 * l * t + offset).tanh(), epsilon = 1e-10);
        }
    }

    proptest! {
        #[test]
        fn field_representations_agree(x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0) {
            let l = SpinVector::new(x, y, z);
            let f = classical_field(l);
            prop_assert!(f.max_abs_diff(dissipative_field(l, &SyncDissipator)) <= 1e-12);
            prop_assert!(f.max_abs_diff(quasithermo_field(l, &SyncQuasiThermo)) <= 1e-12);
        }

        #[test]
        fn schwinger_phase_identity(r1 in 0.0f64..3.0, r2 in 0.0f64..3.0, p1 in -3.2f64..3.2, p2 in -3.2f64..3.2) {
            let l = schwinger_map(OscillatorPair::from_polar(r1, p1, r2, p2));
            prop_assert!((l.ly - r1 * r2 * (p2 - p1).sin()).abs() <= 1e-12);
            // |l| = (|z1|^2 + |z2|^2) / 2
            prop_assert!((l.norm_sqr().sqrt() - (r1 * r1 + r2 * r2) / 2.0).abs() <= 1e-12);
        }

        #[test]
        fn field_is_orthogonal_to_state(x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0) {
            // dH/dt = l . dl/dt = 0 and dS/dt = 2 dl_x/dt >= 0
            let l = SpinVector::new(x, y, z);
            let f = classical_field(l);
            prop_assert!(l.dot(f).abs() <= 1e-12);
            prop_assert!(f.lx >= 0.0);
        }
    }
}
