//! Seeded random inputs shared by the verification checklist and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::SpinVector;
use crate::linalg::{c, ComplexMatrix};
use crate::quantum::{DensityMatrix, StationaryParams};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G G^dag / tr(G G^dag)` for a matrix `G` with uniform complex entries.
pub fn random_density_matrix<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(&p * (1.0 / tr)).expect("G G^dag is a valid state")
}

/// Random Hermitian matrix with entries in the unit box.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    g.hermitian_part()
}

/// `a ~ U(0,1)` and real `c` uniform in `[-sqrt(ab), sqrt(ab)]`.
pub fn random_real_params<R: Rng>(rng: &mut R) -> StationaryParams {
    let a: f64 = rng.gen_range(0.0..1.0);
    let bound = (a * (1.0 - a)).sqrt();
    let cr = rng.gen_range(-1.0..=1.0) * bound;
    StationaryParams::new(a, c(cr, 0.0)).expect("sampled inside the valid region")
}

/// `a ~ U(0,1)` and complex `c` with `|c| <= sqrt(ab)` and uniform phase.
pub fn random_complex_params<R: Rng>(rng: &mut R) -> StationaryParams {
    let a: f64 = rng.gen_range(0.0..1.0);
    let bound = (a * (1.0 - a)).sqrt();
    let modulus = rng.gen_range(0.0..=1.0) * bound;
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    StationaryParams::new(a, num_complex::Complex64::from_polar(modulus, phase))
        .expect("sampled inside the valid region")
}

/// Uniform direction with `l^2` uniform in `[l2_min, l2_max]`.
pub fn random_spin<R: Rng>(rng: &mut R, l2_min: f64, l2_max: f64) -> SpinVector {
    let l2: f64 = rng.gen_range(l2_min..=l2_max);
    let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
    SpinVector::new(cos_theta, sin_theta * phi.cos(), sin_theta * phi.sin()) * l2.sqrt()
}
