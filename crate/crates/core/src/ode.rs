//! Fixed-step classical Runge-Kutta.

use crate::classical::SpinVector;
use crate::linalg::ComplexMatrix;

/// States that RK4 can combine linearly.
pub trait OdeState: Clone {
    /// `self + k * other`
    fn add_scaled(&self, other: &Self, k: f64) -> Self;
}

impl OdeState for SpinVector {
    fn add_scaled(&self, other: &Self, k: f64) -> Self {
        *self + *other * k
    }
}

impl OdeState for ComplexMatrix {
    fn add_scaled(&self, other: &Self, k: f64) -> Self {
        self + &(other * k)
    }
}

/// One RK4 step of `y' = f(y)` with step `h`.
pub fn rk4_step<S: OdeState>(f: impl Fn(&S) -> S, y: &S, h: f64) -> S {
    let k1 = f(y);
    let k2 = f(&y.add_scaled(&k1, h / 2.0));
    let k3 = f(&y.add_scaled(&k2, h / 2.0));
    let k4 = f(&y.add_scaled(&k3, h));
    y.add_scaled(&k1, h / 6.0)
        .add_scaled(&k2, h / 3.0)
        .add_scaled(&k3, h / 3.0)
        .add_scaled(&k4, h / 6.0)
}

/// Step sizes covering `[0, t_final]`: full steps of `dt` and a shorter last
/// step if `t_final` is not a multiple of `dt`.
pub fn step_schedule(t_final: f64, dt: f64) -> impl Iterator<Item = (f64, f64)> {
    let n_full = (t_final / dt * (1.0 + 1e-12)).floor() as usize;
    let remainder = t_final - n_full as f64 * dt;
    let extra = (remainder > 1e-12 * dt).then_some(remainder);
    (0..n_full)
        .map(move |k| ((k + 1) as f64 * dt, dt))
        .chain(extra.map(move |h| (t_final, h)))
}
