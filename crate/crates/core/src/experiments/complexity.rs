//! Monte Carlo sphere-decoding complexity against its closed-form lower bounds.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{moments, per_trial, point_seed, proportion, tag, ExperimentConfig, ExperimentResult};
use crate::bounds::{csd_exponent_lower_bound, jalden_log_lower_bound, ComplexityBoundInputs};
use crate::decoder::{sample_problem, sphere_decode, SphereConstraint};
use crate::error::Result;
use crate::lattice::NoiseModel;

/// Mean decoding effort at one `(n, m)` with `rho^2 = alpha n N0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdComplexityPoint {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub mean_csd: f64,
    pub csd_std_err: f64,
    pub mean_nsc: f64,
    pub nsc_std_err: f64,
    /// Fraction of trials whose sphere contained at least one codeword.
    pub found_rate: f64,
    pub found_std_err: f64,
    /// Mean number of partial vectors per depth, `E[N_k]` for `k = 1..m`.
    pub mean_level_counts: Vec<f64>,
    /// `(L^2)^m`, the largest possible `N_SC`.
    pub codebook_size: f64,
    /// Natural log of the exponent bound, real-symbol convention `L^{exponent}`.
    pub log_bound: f64,
    /// Same bound with `L^2` complex symbols per coordinate.
    pub log_bound_complex: f64,
    /// Natural log of the fixed-radius lower bound with `c^2 = 1`.
    pub log_bound_jalden: f64,
    /// `C_SD >= N_SC` held on every trial.
    pub pathwise_csd_ge_nsc: bool,
    pub trials: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl SdComplexityPoint {
    pub fn to_results(&self) -> Vec<ExperimentResult> {
        let row = |name: &str, estimate, std_err, bound_value| ExperimentResult {
            name: name.into(),
            n: self.n,
            param: self.alpha,
            estimate,
            std_err,
            bound_value,
            trials: self.trials,
            seed: self.seed,
            wall_time: self.wall_time,
        };
        vec![
            row("sd_csd", self.mean_csd, self.csd_std_err, self.log_bound.exp()),
            row("sd_csd_jalden", self.mean_csd, self.csd_std_err, self.log_bound_jalden.exp()),
            row("sd_csd_complex", self.mean_csd, self.csd_std_err, self.log_bound_complex.exp()),
            row("sd_nsc", self.mean_nsc, self.nsc_std_err, self.codebook_size),
            row("sd_found", self.found_rate, self.found_std_err, 1.0),
        ]
    }
}

/// Decodes `trials` seeded problems per `n` with `x_hat` uniform over the
/// codebook and `m = max(1, floor(n / kappa))`.
pub fn run_sd_complexity(cfg: &ExperimentConfig) -> Result<Vec<SdComplexityPoint>> {
    cfg.validate()?;
    let noise = NoiseModel::new(cfg.n0)?;
    let mut out = Vec::new();
    for &n in &cfg.n_list {
        let start = Instant::now();
        let params = cfg.params(n)?;
        let m = params.m();
        let codebook = cfg.codebook.with_dim(m)?;
        codebook.check_cap(codebook.size())?;
        let constraint = SphereConstraint::from_alpha(cfg.alpha, n, cfg.n0)?;
        let bounds =
            ComplexityBoundInputs::new(n as u32, cfg.kappa, cfg.alpha, cfg.n0, codebook.l(), codebook.dmax_sq() as f64)
                .and_then(|b| csd_exponent_lower_bound(&b))?;
        let jalden = jalden_log_lower_bound(m as u32, codebook.l(), 1.0, cfg.n0)?;

        let traces = per_trial(point_seed(cfg.master_seed, tag::SD_COMPLEXITY, n), cfg.trials, |rng| {
            let (problem, _) = sample_problem(rng, params, &codebook, noise, constraint)?;
            sphere_decode(&problem)
        })?;

        let csd: Vec<f64> = traces.iter().map(|t| t.total_visits as f64).collect();
        let nsc: Vec<f64> = traces.iter().map(|t| t.leaf_count as f64).collect();
        let found = traces.iter().filter(|t| t.found_in_sphere).count() as u64;
        let mut level_sums = vec![0.0; m];
        for t in &traces {
            for (s, c) in level_sums.iter_mut().zip(&t.level_counts) {
                *s += *c as f64;
            }
        }
        let (csd_m, nsc_m) = (moments(&csd), moments(&nsc));
        let (found_rate, found_std_err) = proportion(found, cfg.trials);
        out.push(SdComplexityPoint {
            n,
            m,
            alpha: cfg.alpha,
            mean_csd: csd_m.mean,
            csd_std_err: csd_m.mean_se,
            mean_nsc: nsc_m.mean,
            nsc_std_err: nsc_m.mean_se,
            found_rate,
            found_std_err,
            mean_level_counts: level_sums.iter().map(|s| s / cfg.trials as f64).collect(),
            codebook_size: codebook.size() as f64,
            log_bound: bounds.log_bound,
            log_bound_complex: bounds.log_bound_complex,
            log_bound_jalden: jalden,
            pathwise_csd_ge_nsc: traces.iter().all(|t| t.total_visits >= t.leaf_count),
            trials: cfg.trials,
            seed: cfg.master_seed,
            wall_time: Some(start.elapsed().as_secs_f64()),
        });
    }
    Ok(out)
}
