//! Seeded random inputs for property checks, shared by the CLI and tests.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::nc_torus::{Monomial, ThetaMatrix, TorusElement};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform complex number in the unit square centred at zero, times two.
pub fn complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Skew matrix with lower-triangle entries uniform in `[-1, 1)`.
pub fn theta<R: Rng>(rng: &mut R, n: usize) -> ThetaMatrix {
    let lower: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    ThetaMatrix::from_lower(n, |k, l| lower[k * n + l])
}

pub fn monomial<R: Rng>(rng: &mut R, n: usize, max_exp: i64) -> Monomial {
    Monomial((0..n).map(|_| rng.gen_range(-max_exp..=max_exp)).collect())
}

/// Element with up to `support` terms and exponents in `[-max_exp, max_exp]`.
pub fn element<R: Rng>(
    rng: &mut R,
    theta: &ThetaMatrix,
    support: usize,
    max_exp: i64,
) -> TorusElement {
    let n = theta.dim();
    let count = rng.gen_range(1..=support.max(1));
    let terms: Vec<_> = (0..count)
        .map(|_| (monomial(rng, n, max_exp), complex(rng)))
        .collect();
    TorusElement::from_terms(theta.clone(), terms).expect("sampled monomials have dimension n")
}
