//! The random-lattice model: generator sampling, finite Gaussian-integer
//! codebooks, noise, distances and the normalized distance ratio.

mod codebook;

pub use codebook::{Codebook, CodewordIter, GaussInt, DEFAULT_ENUMERATION_CAP};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::{norm_sq, ComplexMatrix, ComplexVector, SeededRng};

/// Ambient dimension `n` and lattice rank `m`, with `n >= m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeParams {
    n: usize,
    m: usize,
}

impl LatticeParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || n < m {
            return Err(invalid(format!("lattice needs n >= m >= 1, got n={n}, m={m}")));
        }
        Ok(LatticeParams { n, m })
    }

    /// Rank chosen as `max(1, floor(n / kappa))` for a target aspect ratio.
    pub fn with_kappa(n: usize, kappa: f64) -> Result<Self> {
        if !(kappa >= 1.0) || !kappa.is_finite() {
            return Err(invalid(format!("kappa must be finite and >= 1, got {kappa}")));
        }
        let m = ((n as f64 / kappa).floor() as usize).max(1);
        Self::new(n, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kappa(&self) -> f64 {
        self.n as f64 / self.m as f64
    }
}

/// Per-entry complex noise variance `N0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    n0: f64,
}

impl NoiseModel {
    pub fn new(n0: f64) -> Result<Self> {
        if !(n0 >= 0.0) || !n0.is_finite() {
            return Err(invalid(format!("N0 must be finite and >= 0, got {n0}")));
        }
        Ok(NoiseModel { n0 })
    }

    pub fn noiseless() -> Self {
        NoiseModel { n0: 0.0 }
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    /// Draws `w` with i.i.d. CN(0, N0) entries; all zeros when `N0 = 0`.
    pub fn sample(&self, rng: &mut SeededRng, n: usize) -> ComplexVector {
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        if self.n0 > 0.0 {
            rng.fill_complex_gaussian(&mut w, self.n0);
        }
        ComplexVector::new(w)
    }
}

/// Draws an `n x m` generator with i.i.d. CN(0, 1/n) entries.
pub fn sample_generator(rng: &mut SeededRng, params: LatticeParams) -> ComplexMatrix {
    let (n, m) = (params.n, params.m);
    let mut data = vec![Complex64::new(0.0, 0.0); n * m];
    rng.fill_complex_gaussian(&mut data, 1.0 / n as f64);
    ComplexMatrix::from_raw(n, m, data)
}

pub(crate) fn difference(x_hat: &[GaussInt], x: &[GaussInt]) -> Vec<Complex64> {
    x_hat.iter().zip(x).map(|(a, b)| (*a - *b).to_complex()).collect()
}

/// `||G (x_hat - x) + w||^2`.
pub fn distance_sq(g: &ComplexMatrix, x_hat: &[GaussInt], x: &[GaussInt], w: &ComplexVector) -> Result<f64> {
    if x_hat.len() != g.cols() || x.len() != g.cols() {
        return Err(invalid(format!(
            "codewords of dim {} and {} do not match generator with {} columns",
            x_hat.len(),
            x.len(),
            g.cols()
        )));
    }
    if w.dim() != g.rows() {
        return Err(invalid(format!("noise of dim {} does not match n = {}", w.dim(), g.rows())));
    }
    let mut v = g.mul_vec(&difference(x_hat, x))?;
    for (vi, wi) in v.iter_mut().zip(w.as_slice()) {
        *vi += wi;
    }
    Ok(norm_sq(&v))
}

/// One realization of the transmitted/hypothesis pair together with the
/// generator and noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: LatticeParams,
    pub g: ComplexMatrix,
    pub x_hat: Vec<GaussInt>,
    pub x: Vec<GaussInt>,
    pub w: ComplexVector,
    pub noise: NoiseModel,
}

impl Scenario {
    pub fn new(
        params: LatticeParams,
        g: ComplexMatrix,
        x_hat: Vec<GaussInt>,
        x: Vec<GaussInt>,
        w: ComplexVector,
        noise: NoiseModel,
    ) -> Result<Self> {
        if g.shape() != (params.n, params.m) {
            return Err(invalid("generator shape does not match lattice params"));
        }
        if x_hat.len() != params.m || x.len() != params.m || w.dim() != params.n {
            return Err(invalid("codeword or noise dimension does not match lattice params"));
        }
        Ok(Scenario { params, g, x_hat, x, w, noise })
    }

    /// Fresh generator and noise for the given codeword pair.
    pub fn sample(
        rng: &mut SeededRng,
        params: LatticeParams,
        noise: NoiseModel,
        x_hat: Vec<GaussInt>,
        x: Vec<GaussInt>,
    ) -> Result<Self> {
        let g = sample_generator(rng, params);
        let w = noise.sample(rng, params.n);
        Self::new(params, g, x_hat, x, w, noise)
    }

    /// Received point `G x_hat + w`.
    pub fn received(&self) -> ComplexVector {
        let xh: Vec<Complex64> = self.x_hat.iter().map(|s| s.to_complex()).collect();
        let mut y = self.g.mul_vec(&xh).expect("shapes validated at construction");
        for (yi, wi) in y.iter_mut().zip(self.w.as_slice()) {
            *yi += wi;
        }
        ComplexVector::new(y)
    }

    /// `||x_hat - x||^2`, exact.
    pub fn delta_norm_sq(&self) -> i64 {
        GaussInt::distance_sq(&self.x_hat, &self.x)
    }
}

/// `||G x_hat + w - G x||^2 / (||x_hat - x||^2 + n N0)`.
pub fn ratio_statistic(s: &Scenario) -> Result<f64> {
    let denom = s.delta_norm_sq() as f64 + s.params.n as f64 * s.noise.n0();
    if !(denom > 0.0) {
        return Err(invalid("ratio statistic undefined: x_hat = x and N0 = 0"));
    }
    Ok(distance_sq(&s.g, &s.x_hat, &s.x, &s.w)? / denom)
}
