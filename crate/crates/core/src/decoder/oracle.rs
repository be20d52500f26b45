//! Exhaustive reference counts for the sphere decoder.

use num_complex::Complex64;

use super::{Best, DecodeProblem, DecodeTrace, Prepared};
use crate::error::{invalid, Result};
use crate::lattice::{Codebook, GaussInt};
use crate::numerics::{norm_sq, ComplexMatrix, ComplexVector};

/// Enumerates every depth-`k` suffix for every `k` independently, using the
/// same QR factors and partial-metric arithmetic as [`super::sphere_decode`].
pub fn brute_force_oracle(p: &DecodeProblem) -> Result<DecodeTrace> {
    p.codebook.check_cap(p.codebook.size())?;
    let prep = Prepared::new(p)?;
    let m = prep.m;
    let q = prep.symbols.len();
    let rho_sq = p.constraint.rho_sq();

    let mut counts = vec![0u64; m];
    let mut best: Option<Best> = None;
    let mut digits = vec![0usize; m];
    let mut x = vec![Complex64::new(0.0, 0.0); m];

    for depth in 1..=m {
        let start = m - depth;
        digits.iter_mut().for_each(|d| *d = 0);
        x.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        loop {
            for i in start..m {
                x[i] = prep.symbols_c[digits[i]];
            }
            let mut metric = prep.offset;
            for i in (start..m).rev() {
                let b = prep.interference(i, &x);
                metric += prep.increment(i, b, x[i]);
            }
            if metric <= rho_sq {
                counts[depth - 1] += 1;
                if depth == m {
                    let index = digits.iter().fold(0u128, |acc, &d| acc * q as u128 + d as u128);
                    if Best::improves(&best, metric, index) {
                        let xs = digits.iter().map(|&d| prep.symbols[d]).collect();
                        best = Some(Best { x: xs, metric, index });
                    }
                }
            }
            if !advance(&mut digits[start..], q) {
                break;
            }
        }
    }
    Ok(DecodeTrace::from_parts(counts, best))
}

/// Odometer step, last position fastest; `false` once it wraps to all zeros.
fn advance(digits: &mut [usize], q: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

fn to_complex(x: &[GaussInt]) -> Vec<Complex64> {
    x.iter().map(|s| s.to_complex()).collect()
}

/// Number of codewords `x` with `||G x_hat + w - G x||^2 <= rho^2`.
pub fn count_nsc(
    g: &ComplexMatrix,
    x_hat: &[GaussInt],
    w: &ComplexVector,
    codebook: &Codebook,
    rho_sq: f64,
) -> Result<u64> {
    if codebook.m() != g.cols() || x_hat.len() != g.cols() || w.dim() != g.rows() {
        return Err(invalid("count_nsc: dimensions do not conform"));
    }
    if rho_sq.is_nan() || rho_sq < 0.0 {
        return Err(invalid(format!("rho^2 must be non-negative, got {rho_sq}")));
    }
    let mut y = g.mul_vec(&to_complex(x_hat))?;
    for (yi, wi) in y.iter_mut().zip(w.as_slice()) {
        *yi += wi;
    }
    let mut count = 0;
    for x in codebook.enumerate()? {
        let gx = g.mul_vec(&to_complex(&x))?;
        let diff: Vec<Complex64> = y.iter().zip(&gx).map(|(a, b)| a - b).collect();
        if norm_sq(&diff) <= rho_sq {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of codewords `x` with `||x_hat - x||^2 + n N0 <= rho^2 / theta`.
pub fn count_nprime(
    x_hat: &[GaussInt],
    codebook: &Codebook,
    n: usize,
    n0: f64,
    rho_sq: f64,
    theta: f64,
) -> Result<u64> {
    if x_hat.len() != codebook.m() {
        return Err(invalid("count_nprime: x_hat dimension does not match codebook"));
    }
    if !(theta > 0.0) || !(n0 >= 0.0) || rho_sq.is_nan() {
        return Err(invalid("count_nprime: need theta > 0, N0 >= 0 and finite rho^2"));
    }
    let budget = rho_sq / theta;
    let floor = n as f64 * n0;
    let mut count = 0;
    for x in codebook.enumerate()? {
        if GaussInt::distance_sq(x_hat, &x) as f64 + floor <= budget {
            count += 1;
        }
    }
    Ok(count)
}
