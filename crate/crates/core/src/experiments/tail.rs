//! Chernoff curves, tail probabilities of the distance ratio, concentration
//! and a two-sample goodness-of-fit test.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    delta_for_trial, moments, per_trial, point_seed, proportion, sample_projection, tag, ExperimentConfig,
    ExperimentResult,
};
use crate::bounds::{chernoff_bound, ChernoffQuery};
use crate::error::{invalid, Result};
use crate::lattice::{GaussInt, NoiseModel};
use crate::numerics::{norm_sq, SeededRng};

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn theta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min > 0.0) || !(max >= min) || !max.is_finite() {
        return Err(invalid(format!("need 0 < theta_min <= theta_max, got [{min}, {max}]")));
    }
    match steps {
        0 => Err(invalid("steps must be at least 1")),
        1 => Ok(vec![min]),
        _ => Ok((0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect()),
    }
}

/// Evaluates `(theta e^{1 - theta})^n` over the grid, ordered by `theta` then `n`.
pub fn run_bound_curves(n_list: &[usize], thetas: &[f64]) -> Result<Vec<ExperimentResult>> {
    let mut out = Vec::with_capacity(n_list.len() * thetas.len());
    for &theta in thetas {
        for &n in n_list {
            let n32 = u32::try_from(n).map_err(|_| invalid(format!("n = {n} is too large")))?;
            let bound = chernoff_bound(ChernoffQuery::new(theta, n32)?);
            out.push(ExperimentResult {
                name: "bound_curve".into(),
                n,
                param: theta,
                estimate: bound,
                std_err: 0.0,
                bound_value: bound,
                trials: 0,
                seed: 0,
                wall_time: None,
            });
        }
    }
    Ok(out)
}

/// Per-trial draws of `||G (x_hat - x) + w||^2 / (||x_hat - x||^2 + n N0)` at
/// dimension `n`, with `m = max(1, floor(n / kappa))`.
pub fn ratio_draws(cfg: &ExperimentConfig, n: usize) -> Result<Vec<f64>> {
    tagged_ratio_draws(cfg, n, tag::RATIO)
}

pub(crate) fn tagged_ratio_draws(cfg: &ExperimentConfig, n: usize, experiment: u64) -> Result<Vec<f64>> {
    cfg.validate()?;
    let codebook = cfg.codebook.with_dim(cfg.params(n)?.m())?;
    let noise = NoiseModel::new(cfg.n0)?;
    let floor = n as f64 * cfg.n0;
    per_trial(point_seed(cfg.master_seed, experiment, n), cfg.trials, |rng| {
        let delta = delta_for_trial(&cfg.delta_x, &codebook, rng);
        Ok(ratio_sample(rng, n, &delta, noise, floor))
    })
}

pub(crate) fn ratio_sample(rng: &mut SeededRng, n: usize, delta: &[GaussInt], noise: NoiseModel, floor: f64) -> f64 {
    let dc: Vec<_> = delta.iter().map(|d| d.to_complex()).collect();
    let mut h = sample_projection(rng, n, &dc);
    let w = noise.sample(rng, n);
    for (hi, wi) in h.iter_mut().zip(w.as_slice()) {
        *hi += wi;
    }
    norm_sq(&h) / (delta.iter().map(|d| d.norm_sq()).sum::<i64>() as f64 + floor)
}

/// Tail event of the ratio for threshold `theta`: `r >= theta` above 1,
/// `r <= theta` below.
pub(crate) fn tail_event(r: f64, theta: f64) -> bool {
    if theta >= 1.0 {
        r >= theta
    } else {
        r <= theta
    }
}

/// Empirical tail probabilities of the distance ratio against the Chernoff
/// bound, one result per `(n, theta)`. All thresholds at a given `n` share the
/// same draws.
pub fn run_tail_probability(cfg: &ExperimentConfig) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &n in &cfg.n_list {
        let start = Instant::now();
        let ratios = ratio_draws(cfg, n)?;
        let elapsed = start.elapsed().as_secs_f64();
        for &theta in &cfg.theta_list {
            let hits = ratios.iter().filter(|r| tail_event(**r, theta)).count() as u64;
            let (p, se) = proportion(hits, cfg.trials);
            out.push(ExperimentResult {
                name: "tail".into(),
                n,
                param: theta,
                estimate: p,
                std_err: se,
                bound_value: chernoff_bound(ChernoffQuery::new(theta, n as u32)?),
                trials: cfg.trials,
                seed: cfg.master_seed,
                wall_time: Some(elapsed),
            });
        }
    }
    Ok(out)
}

/// Concentration of the distance ratio around 1 at one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationPoint {
    pub n: usize,
    pub epsilon: f64,
    /// `P(|r - 1| > epsilon)`.
    pub exceed_prob: f64,
    pub exceed_std_err: f64,
    /// `((1 + eps) e^{-eps})^n + ((1 - eps) e^{eps})^n`, the second term
    /// dropped when `eps >= 1`.
    pub chernoff_sum: f64,
    pub mean: f64,
    pub mean_std_err: f64,
    pub variance: f64,
    pub variance_std_err: f64,
    /// Exact variance of a normalized chi-squared with `2n` degrees of freedom, `1/n`.
    pub variance_target: f64,
    pub trials: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl ConcentrationPoint {
    pub fn to_results(&self) -> Vec<ExperimentResult> {
        let row = |name: &str, estimate, std_err, bound_value| ExperimentResult {
            name: name.into(),
            n: self.n,
            param: self.epsilon,
            estimate,
            std_err,
            bound_value,
            trials: self.trials,
            seed: self.seed,
            wall_time: self.wall_time,
        };
        vec![
            row("concentration_exceed", self.exceed_prob, self.exceed_std_err, self.chernoff_sum),
            row("concentration_mean", self.mean, self.mean_std_err, 1.0),
            row("concentration_variance", self.variance, self.variance_std_err, self.variance_target),
        ]
    }
}

pub fn run_concentration(cfg: &ExperimentConfig, epsilon: f64) -> Result<Vec<ConcentrationPoint>> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(invalid(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    cfg.validate()?;
    let mut out = Vec::new();
    for &n in &cfg.n_list {
        let start = Instant::now();
        let ratios = tagged_ratio_draws(cfg, n, tag::CONCENTRATION)?;
        let hits = ratios.iter().filter(|r| (**r - 1.0).abs() > epsilon).count() as u64;
        let (p, se) = proportion(hits, cfg.trials);
        let mo = moments(&ratios);
        let upper = chernoff_bound(ChernoffQuery::new(1.0 + epsilon, n as u32)?);
        let lower = if epsilon < 1.0 { chernoff_bound(ChernoffQuery::new(1.0 - epsilon, n as u32)?) } else { 0.0 };
        out.push(ConcentrationPoint {
            n,
            epsilon,
            exceed_prob: p,
            exceed_std_err: se,
            chernoff_sum: upper + lower,
            mean: mo.mean,
            mean_std_err: mo.mean_se,
            variance: mo.variance,
            variance_std_err: mo.variance_se,
            variance_target: 1.0 / n as f64,
            trials: cfg.trials,
            seed: cfg.master_seed,
            wall_time: Some(start.elapsed().as_secs_f64()),
        });
    }
    Ok(out)
}

/// Direct draws of `chi^2_{2n} / (2n)` as the mean of `n` squared unit-variance
/// complex Gaussians, trial `t` on stream `t`.
pub fn normalized_chi2_draws(master_seed: u64, n: usize, count: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    per_trial(point_seed(master_seed, tag::CHI2_DIRECT, n), count, |rng| {
        Ok((0..n).map(|_| rng.complex_gaussian(1.0).norm_sqr()).sum::<f64>() / n as f64)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    /// `sup_x |F_a(x) - F_b(x)|`.
    pub statistic: f64,
    /// Asymptotic critical value `sqrt(-ln(level/2) / 2) * sqrt((n_a + n_b) / (n_a n_b))`.
    pub critical_value: f64,
    /// The samples are consistent with one law at the given level.
    pub passes: bool,
}

/// Two-sample Kolmogorov-Smirnov test at significance `level`.
pub fn ks_two_sample(a: &[f64], b: &[f64], level: f64) -> Result<KsOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("both samples must be non-empty"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(invalid(format!("significance level must lie in (0, 1), got {level}")));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(invalid("samples contain NaN"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let critical_value = (-(level / 2.0).ln() / 2.0).sqrt() * ((na + nb) / (na * nb)).sqrt();
    Ok(KsOutcome { statistic: d, critical_value, passes: d <= critical_value })
}
