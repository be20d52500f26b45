//! Seeded Monte Carlo experiments and their result records.
//!
//! Every stochastic grid point owns a seed derived from the master seed and
//! the grid coordinates; trial `t` at that point draws from stream `t`. Trials
//! run in parallel, per-trial values are collected in trial order and reduced
//! sequentially, so results do not depend on the number of worker threads.

mod complexity;
mod inflation;
mod pep;
mod tail;

pub use complexity::{run_sd_complexity, SdComplexityPoint};
pub use inflation::{inflation_link, run_codebook_inflation, InflationReport, InflationRow};
pub use pep::{run_pep, PepPoint, PepReport, PepTailPoint};
pub use tail::{
    ks_two_sample, normalized_chi2_draws, ratio_draws, run_bound_curves, run_concentration, run_tail_probability,
    theta_grid, ConcentrationPoint, KsOutcome,
};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{tail_bound_holds, ChernoffQuery};
use crate::error::{invalid, Result};
use crate::lattice::{Codebook, GaussInt, LatticeParams, NoiseModel};
use crate::numerics::{derive_seed, SeededRng};

/// How the difference `x_hat - x` is chosen in ratio experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaXSpec {
    /// Leading entries of `x_hat - x`, zero-padded to dimension `m`.
    Fixed { head: Vec<GaussInt> },
    /// A fresh pair of distinct codewords drawn uniformly per trial.
    RandomPair,
}

impl DeltaXSpec {
    /// `x_hat - x = (1 + i, 0, ..., 0)`, so `||x_hat - x||^2 = 2`.
    pub fn diagonal_neighbor() -> Self {
        DeltaXSpec::Fixed { head: vec![GaussInt::new(1, 1)] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub trials: u64,
    pub n_list: Vec<usize>,
    pub theta_list: Vec<f64>,
    pub n0: f64,
    /// `n / m`; each grid point uses `m = max(1, floor(n / kappa))`.
    pub kappa: f64,
    /// Symbol alphabet; its dimension is reset to `m` at each grid point.
    pub codebook: Codebook,
    pub alpha: f64,
    pub delta_x: DeltaXSpec,
}

impl ExperimentConfig {
    /// Defaults: `kappa = 2`, `N0 = 1`, `alpha = 2`, binary alphabet at
    /// `tau = 0`, and a diagonal-neighbor difference.
    pub fn new(master_seed: u64, trials: u64, n_list: Vec<usize>, theta_list: Vec<f64>) -> Self {
        ExperimentConfig {
            master_seed,
            trials,
            n_list,
            theta_list,
            n0: 1.0,
            kappa: 2.0,
            codebook: Codebook::new(0, 2, 1).expect("binary alphabet is valid"),
            alpha: 2.0,
            delta_x: DeltaXSpec::diagonal_neighbor(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(invalid("n list must be non-empty with every n >= 1"));
        }
        if let Some(t) = self.theta_list.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
            return Err(invalid(format!("theta must be positive and finite, got {t}")));
        }
        NoiseModel::new(self.n0)?;
        if !(self.kappa >= 1.0) || !self.kappa.is_finite() {
            return Err(invalid(format!("kappa must be finite and >= 1, got {}", self.kappa)));
        }
        match &self.delta_x {
            DeltaXSpec::Fixed { head } => {
                if head.iter().all(|d| d.norm_sq() == 0) {
                    return Err(invalid("fixed x_hat - x must be nonzero"));
                }
                let ms = self.n_list.iter().map(|&n| self.params(n).map(|p| p.m())).collect::<Result<Vec<_>>>()?;
                if ms.iter().any(|&m| head.len() > m) {
                    return Err(invalid(format!("fixed x_hat - x has {} entries, more than m", head.len())));
                }
            }
            DeltaXSpec::RandomPair => {
                if self.codebook.l() < 2 {
                    return Err(invalid("random codeword pairs need at least two symbols"));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn params(&self, n: usize) -> Result<LatticeParams> {
        LatticeParams::with_kappa(n, self.kappa)
    }
}

/// One grid point of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub n: usize,
    /// The swept parameter at this point (`theta`, `epsilon`, `alpha`, ...).
    pub param: f64,
    pub estimate: f64,
    pub std_err: f64,
    pub bound_value: f64,
    pub trials: u64,
    pub seed: u64,
    /// Seconds spent on this grid point; omitted from serialized output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl ExperimentResult {
    /// Whether a tail-probability estimate respects its Chernoff bound with
    /// three standard errors of slack. Meaningful for tail results only.
    pub fn tail_bound_holds(&self) -> bool {
        ChernoffQuery::new(self.param, self.n as u32)
            .map(|q| tail_bound_holds(self.estimate, q, self.std_err))
            .unwrap_or(false)
    }
}

/// Tags separating the seed domains of different experiments.
pub(crate) mod tag {
    pub const RATIO: u64 = 1;
    pub const CONCENTRATION: u64 = 2;
    pub const SD_COMPLEXITY: u64 = 3;
    pub const CHI2_DIRECT: u64 = 4;
}

pub(crate) fn point_seed(master: u64, experiment: u64, n: usize) -> u64 {
    derive_seed(master, &[experiment, n as u64])
}

/// Runs `f(rng)` for every trial in parallel, returning values in trial order.
pub(crate) fn per_trial<T, F>(seed: u64, trials: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut SeededRng) -> Result<T> + Sync,
{
    (0..trials).into_par_iter().map(|t| f(&mut SeededRng::new(seed, t))).collect()
}

/// Binomial proportion and its standard error `sqrt(p (1 - p) / T)`.
pub(crate) fn proportion(hits: u64, trials: u64) -> (f64, f64) {
    let p = hits as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

/// Sample mean, standard error of the mean, unbiased variance and the
/// standard error of that variance estimate.
pub(crate) struct Moments {
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
}

pub(crate) fn moments(values: &[f64]) -> Moments {
    let t = values.len() as f64;
    let mean = values.iter().sum::<f64>() / t;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in values {
        let d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    let variance = if t > 1.0 { m2 / (t - 1.0) } else { 0.0 };
    let (mu2, mu4) = (m2 / t, m4 / t);
    let variance_se = if t > 3.0 { ((mu4 - mu2 * mu2 * (t - 3.0) / (t - 1.0)) / t).max(0.0).sqrt() } else { 0.0 };
    Moments { mean, mean_se: (variance / t).sqrt(), variance, variance_se }
}

/// Draws `G (x_hat - x)` for a generator with i.i.d. CN(0, 1/n) entries,
/// sampling only the columns where the difference is nonzero, row by row.
pub(crate) fn sample_projection(rng: &mut SeededRng, n: usize, delta: &[Complex64]) -> Vec<Complex64> {
    let support: Vec<Complex64> = delta.iter().copied().filter(|d| d.norm_sqr() != 0.0).collect();
    let variance = 1.0 / n as f64;
    (0..n)
        .map(|_| support.iter().fold(Complex64::new(0.0, 0.0), |acc, d| acc + rng.complex_gaussian(variance) * d))
        .collect()
}

/// Resolves the difference vector for one trial.
pub(crate) fn delta_for_trial(spec: &DeltaXSpec, codebook: &Codebook, rng: &mut SeededRng) -> Vec<GaussInt> {
    match spec {
        DeltaXSpec::Fixed { head } => {
            let mut d = head.clone();
            d.resize(codebook.m().max(head.len()), GaussInt::new(0, 0));
            d
        }
        DeltaXSpec::RandomPair => loop {
            let a = codebook.sample_codeword(rng);
            let b = codebook.sample_codeword(rng);
            if a != b {
                return a.iter().zip(&b).map(|(x, y)| *x - *y).collect();
            }
        },
    }
}

#[cfg(test)]
mod tests;
