//! Pairwise error probability over random generators and its convergence to
//! the deterministic limit.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::tail::{ratio_sample, tail_event};
use super::{moments, per_trial, point_seed, proportion, tag, ExperimentConfig, ExperimentResult};
use crate::bounds::{chernoff_bound, tail_bound_holds, ChernoffQuery};
use crate::error::{invalid, Result};
use crate::lattice::{GaussInt, NoiseModel};
use crate::numerics::q_function;

/// Monte Carlo estimate of `E_H[Q(||H dx|| / sqrt(2 N0))]` at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepPoint {
    pub n: usize,
    pub m: usize,
    pub pep: f64,
    pub std_err: f64,
    /// `Q(||dx|| / sqrt(2 N0))`.
    pub asymptotic: f64,
    pub abs_gap: f64,
    pub trials: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

/// Frequency of `Q(||H dx|| / sqrt(2 N0)) <= Q(sqrt(theta) ||dx|| / sqrt(2 N0))`
/// for `theta > 1` (reversed for `theta < 1`), evaluated on the Q argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepTailPoint {
    pub n: usize,
    pub theta: f64,
    pub frequency: f64,
    pub std_err: f64,
    pub bound: f64,
    pub holds: bool,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepReport {
    pub points: Vec<PepPoint>,
    pub tails: Vec<PepTailPoint>,
}

impl PepReport {
    pub fn to_results(&self) -> Vec<ExperimentResult> {
        let pep = self.points.iter().map(|p| ExperimentResult {
            name: "pep".into(),
            n: p.n,
            param: 0.0,
            estimate: p.pep,
            std_err: p.std_err,
            bound_value: p.asymptotic,
            trials: p.trials,
            seed: p.seed,
            wall_time: p.wall_time,
        });
        let tails = self.tails.iter().map(|t| ExperimentResult {
            name: "pep_tail".into(),
            n: t.n,
            param: t.theta,
            estimate: t.frequency,
            std_err: t.std_err,
            bound_value: t.bound,
            trials: t.trials,
            seed: t.seed,
            wall_time: None,
        });
        pep.chain(tails).collect()
    }
}

/// Estimates the pairwise error probability for the difference `delta_x`
/// (zero-padded to `m`) at every `n`, plus tail-event frequencies for every
/// threshold in the config. The generator draws coincide with those of the
/// noiseless tail experiment under the same master seed.
pub fn run_pep(cfg: &ExperimentConfig, delta_x: &[GaussInt]) -> Result<PepReport> {
    cfg.validate()?;
    if delta_x.iter().all(|d| d.norm_sq() == 0) {
        return Err(invalid("x_hat - x must be nonzero"));
    }
    if !(cfg.n0 > 0.0) {
        return Err(invalid("pairwise error probability needs N0 > 0"));
    }
    let dist_sq = delta_x.iter().map(|d| d.norm_sq()).sum::<i64>() as f64;
    let scale = (2.0 * cfg.n0).sqrt();
    let asymptotic = q_function(dist_sq.sqrt() / scale);

    let mut report = PepReport { points: Vec::new(), tails: Vec::new() };
    for &n in &cfg.n_list {
        let start = Instant::now();
        let m = cfg.params(n)?.m();
        if delta_x.len() > m {
            return Err(invalid(format!("x_hat - x has {} entries but m = {m} at n = {n}", delta_x.len())));
        }
        let mut delta = delta_x.to_vec();
        delta.resize(m, GaussInt::new(0, 0));

        let ratios = per_trial(point_seed(cfg.master_seed, tag::RATIO, n), cfg.trials, |rng| {
            Ok(ratio_sample(rng, n, &delta, NoiseModel::noiseless(), 0.0))
        })?;
        let q_values: Vec<f64> = ratios.iter().map(|r| q_function((r * dist_sq).sqrt() / scale)).collect();
        let mo = moments(&q_values);
        report.points.push(PepPoint {
            n,
            m,
            pep: mo.mean,
            std_err: mo.mean_se,
            asymptotic,
            abs_gap: (mo.mean - asymptotic).abs(),
            trials: cfg.trials,
            seed: cfg.master_seed,
            wall_time: Some(start.elapsed().as_secs_f64()),
        });

        for &theta in &cfg.theta_list {
            let hits = ratios.iter().filter(|r| tail_event(**r, theta)).count() as u64;
            let (p, se) = proportion(hits, cfg.trials);
            let q = ChernoffQuery::new(theta, n as u32)?;
            report.tails.push(PepTailPoint {
                n,
                theta,
                frequency: p,
                std_err: se,
                bound: chernoff_bound(q),
                holds: tail_bound_holds(p, q, se),
                trials: cfg.trials,
                seed: cfg.master_seed,
            });
        }
    }
    Ok(report)
}
