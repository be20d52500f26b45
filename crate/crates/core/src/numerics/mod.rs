//! Complex linear algebra, seeded sampling and special functions.

mod matrix;
mod qr;
mod rng;
mod special;

pub use matrix::{ComplexMatrix, ComplexVector};
pub use num_complex::Complex64;
pub use qr::{qr_positive_diag, QrFactors, RANK_TOLERANCE};
pub use rng::{derive_seed, sample_complex_gaussian, SeededRng};
pub use special::{chi2_cdf, chi2_sf, q_function, regularized_gamma_p, regularized_gamma_q};

/// Squared Euclidean norm of a complex slice.
pub fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
