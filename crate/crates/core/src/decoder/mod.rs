//! Fixed-radius sphere decoding over the rectangular codebook with exact
//! complexity accounting.
//!
//! With `G = Q R` (thin QR, positive real diagonal) and `y' = Q^H y`, the
//! metric splits as
//!
//! ```text
//! ||y - G x||^2 = ||(I - Q Q^H) y||^2 + sum_{i} |y'_i - sum_{j >= i} r_ij x_j|^2
//! ```
//!
//! The depth-`k` partial metric is the constant residual term plus the last
//! `k` row terms, so it is non-decreasing in depth and equals the full metric
//! at depth `m`. A partial vector `x_k = (x_{m-k+1}, ..., x_m)` survives when its
//! partial metric is at most `rho^2`; `N_k` counts survivors at depth `k`.
//! The radius never shrinks and the search never terminates early.

mod oracle;

pub use oracle::{brute_force_oracle, count_nprime, count_nsc};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lattice::{sample_generator, Codebook, GaussInt, LatticeParams, NoiseModel};
use crate::numerics::{norm_sq, qr_positive_diag, ComplexMatrix, ComplexVector, SeededRng};

/// Metrics within this distance are ties, broken toward the smaller codeword index.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Squared search radius, optionally derived as `rho^2 = alpha n N0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereConstraint {
    rho_sq: f64,
    alpha: Option<f64>,
}

impl SphereConstraint {
    pub fn new(rho_sq: f64) -> Result<Self> {
        if !(rho_sq > 0.0) || rho_sq.is_nan() {
            return Err(invalid(format!("rho^2 must be positive, got {rho_sq}")));
        }
        Ok(SphereConstraint { rho_sq, alpha: None })
    }

    /// Effectively unbounded radius: every codeword lies inside.
    pub fn unbounded() -> Self {
        SphereConstraint { rho_sq: f64::INFINITY, alpha: None }
    }

    pub fn from_alpha(alpha: f64, n: usize, n0: f64) -> Result<Self> {
        let rho_sq = alpha * n as f64 * n0;
        let mut c = Self::new(rho_sq)?;
        c.alpha = Some(alpha);
        Ok(c)
    }

    pub fn rho_sq(&self) -> f64 {
        self.rho_sq
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }
}

/// A closest-point instance: minimize `||y - G x||^2` over the codebook.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeProblem {
    pub g: ComplexMatrix,
    pub y: ComplexVector,
    pub codebook: Codebook,
    pub constraint: SphereConstraint,
}

impl DecodeProblem {
    pub fn new(g: ComplexMatrix, y: ComplexVector, codebook: Codebook, constraint: SphereConstraint) -> Result<Self> {
        if y.dim() != g.rows() {
            return Err(invalid(format!("y has dim {}, G has {} rows", y.dim(), g.rows())));
        }
        if codebook.m() != g.cols() {
            return Err(invalid(format!("codebook dim {} != G columns {}", codebook.m(), g.cols())));
        }
        Ok(DecodeProblem { g, y, codebook, constraint })
    }
}

/// Draws `G`, a uniform codeword `x_hat` and noise `w` (in that order) and
/// returns the problem for `y = G x_hat + w` together with `x_hat`.
pub fn sample_problem(
    rng: &mut SeededRng,
    params: LatticeParams,
    codebook: &Codebook,
    noise: NoiseModel,
    constraint: SphereConstraint,
) -> Result<(DecodeProblem, Vec<GaussInt>)> {
    let codebook = codebook.with_dim(params.m())?;
    let g = sample_generator(rng, params);
    let x_hat = codebook.sample_codeword(rng);
    let w = noise.sample(rng, params.n());
    let xc: Vec<Complex64> = x_hat.iter().map(|s| s.to_complex()).collect();
    let mut y = g.mul_vec(&xc)?;
    for (yi, wi) in y.iter_mut().zip(w.as_slice()) {
        *yi += wi;
    }
    let problem = DecodeProblem::new(g, ComplexVector::new(y), codebook, constraint)?;
    Ok((problem, x_hat))
}

/// Result of a decode with its complexity counts.
///
/// `level_counts[k - 1]` is `N_k`; `total_visits` is `C_SD = sum N_k`;
/// `leaf_count` is `N_SC = N_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeTrace {
    pub argmin: Option<Vec<GaussInt>>,
    pub min_metric: Option<f64>,
    pub level_counts: Vec<u64>,
    pub total_visits: u64,
    pub leaf_count: u64,
    pub found_in_sphere: bool,
}

impl DecodeTrace {
    pub(crate) fn from_parts(level_counts: Vec<u64>, best: Option<Best>) -> Self {
        let total_visits = level_counts.iter().sum();
        let leaf_count = *level_counts.last().unwrap_or(&0);
        DecodeTrace {
            argmin: best.as_ref().map(|b| b.x.clone()),
            min_metric: best.map(|b| b.metric),
            level_counts,
            total_visits,
            leaf_count,
            found_in_sphere: leaf_count > 0,
        }
    }
}

/// QR-domain form of a problem shared by the decoder and the oracle so both
/// evaluate partial metrics with identical floating-point operations.
pub(crate) struct Prepared {
    pub r: ComplexMatrix,
    pub yq: Vec<Complex64>,
    pub offset: f64,
    pub symbols: Vec<GaussInt>,
    pub symbols_c: Vec<Complex64>,
    pub m: usize,
}

impl Prepared {
    pub fn new(p: &DecodeProblem) -> Result<Self> {
        let qr = qr_positive_diag(&p.g)?;
        let y = p.y.as_slice();
        let yq = qr.q.conj_transpose_mul_vec(y)?;
        let proj = qr.q.mul_vec(&yq)?;
        let residual: Vec<Complex64> = y.iter().zip(&proj).map(|(a, b)| a - b).collect();
        let symbols = p.codebook.symbols();
        let symbols_c = symbols.iter().map(|s| s.to_complex()).collect();
        Ok(Prepared { m: p.codebook.m(), r: qr.r, yq, offset: norm_sq(&residual), symbols, symbols_c })
    }

    /// `y'_i - sum_{j > i} r_ij x_j`, summed in increasing `j`.
    #[inline]
    pub fn interference(&self, i: usize, x: &[Complex64]) -> Complex64 {
        let mut b = self.yq[i];
        for (j, xj) in x.iter().enumerate().take(self.m).skip(i + 1) {
            b -= self.r.get(i, j) * xj;
        }
        b
    }

    #[inline]
    pub fn increment(&self, i: usize, b: Complex64, s: Complex64) -> f64 {
        (b - self.r.get(i, i) * s).norm_sqr()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Best {
    pub x: Vec<GaussInt>,
    pub metric: f64,
    pub index: u128,
}

impl Best {
    /// Strictly smaller metric beyond the tie tolerance, or a tie with a
    /// lexicographically smaller codeword.
    pub fn improves(best: &Option<Best>, metric: f64, index: u128) -> bool {
        match best {
            None => true,
            Some(b) => {
                metric < b.metric - TIE_TOLERANCE || ((metric - b.metric).abs() <= TIE_TOLERANCE && index < b.index)
            }
        }
    }
}

struct Search<'a> {
    prep: &'a Prepared,
    rho_sq: f64,
    digits: Vec<usize>,
    x: Vec<Complex64>,
    counts: Vec<u64>,
    best: Option<Best>,
}

impl Search<'_> {
    /// Expands row `i` (0-based) under a parent with partial metric `parent`.
    fn descend(&mut self, i: usize, parent: f64) {
        let b = self.prep.interference(i, &self.x);
        let mut children: Vec<(f64, usize)> = self
            .prep
            .symbols_c
            .iter()
            .enumerate()
            .map(|(d, s)| (parent + self.prep.increment(i, b, *s), d))
            .filter(|(metric, _)| *metric <= self.rho_sq)
            .collect();
        let depth = self.prep.m - i;
        self.counts[depth - 1] += children.len() as u64;
        children.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        for (metric, d) in children {
            self.digits[i] = d;
            self.x[i] = self.prep.symbols_c[d];
            if i == 0 {
                self.leaf(metric);
            } else {
                self.descend(i - 1, metric);
            }
        }
        self.x[i] = Complex64::new(0.0, 0.0);
    }

    fn leaf(&mut self, metric: f64) {
        let q = self.prep.symbols.len() as u128;
        let index = self.digits.iter().fold(0u128, |acc, &d| acc * q + d as u128);
        if Best::improves(&self.best, metric, index) {
            let x = self.digits.iter().map(|&d| self.prep.symbols[d]).collect();
            self.best = Some(Best { x, metric, index });
        }
    }
}

/// Depth-first sphere decoding with children visited in ascending partial
/// metric. Every partial vector satisfying the recursive constraint is
/// visited and counted.
pub fn sphere_decode(p: &DecodeProblem) -> Result<DecodeTrace> {
    let prep = Prepared::new(p)?;
    let m = prep.m;
    let mut search = Search {
        prep: &prep,
        rho_sq: p.constraint.rho_sq(),
        digits: vec![0; m],
        x: vec![Complex64::new(0.0, 0.0); m],
        counts: vec![0; m],
        best: None,
    };
    if prep.offset <= search.rho_sq {
        search.descend(m - 1, prep.offset);
    }
    Ok(DecodeTrace::from_parts(search.counts, search.best))
}
