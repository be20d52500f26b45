//! Minimal-distance growth of a fixed alphabet versus the sphere-packing
//! existence bound, both measured against the search radius.

use serde::{Deserialize, Serialize};

use super::ExperimentResult;
use crate::bounds::{inflation_onset, sphere_packing_dmin_bound, MonotoneFn, SpherePackingInputs};
use crate::error::{invalid, Result};
use crate::lattice::Codebook;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InflationRow {
    pub m: u32,
    /// `gamma(m) = rho(m) = sqrt(alpha kappa m N0)`.
    pub radius: f64,
    /// `g(gamma(m))`.
    pub threshold: f64,
    pub codebook_dmin: f64,
    pub codebook_ok: bool,
    pub sphere_packing_dmin: f64,
    pub sphere_packing_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflationReport {
    pub gamma: MonotoneFn,
    pub g: MonotoneFn,
    pub rows: Vec<InflationRow>,
    pub codebook_inflatable: bool,
    pub sphere_packing_inflatable: bool,
    /// Set when fewer than two dimensions were sampled, so no trend is visible.
    pub undetermined: bool,
}

impl InflationReport {
    pub fn to_results(&self) -> Vec<ExperimentResult> {
        let row = |name: &str, r: &InflationRow, estimate| ExperimentResult {
            name: name.into(),
            n: r.m as usize,
            param: r.radius,
            estimate,
            std_err: 0.0,
            bound_value: r.threshold,
            trials: 0,
            seed: 0,
            wall_time: None,
        };
        self.rows
            .iter()
            .flat_map(|r| {
                [
                    row("inflation_codebook", r, r.codebook_dmin),
                    row("inflation_sphere_packing", r, r.sphere_packing_dmin),
                ]
            })
            .collect()
    }
}

/// The linear link `g(rho) = sqrt(E_x / N0) / (alpha' sqrt(alpha kappa)) * 2^{-R} * rho`.
///
/// Since `m R / (2m - 1) <= R` for `m >= 1`, the sphere-packing bound satisfies
/// `d_min(m) >= g(rho(m))` at every dimension.
pub fn inflation_link(sp: &SpherePackingInputs) -> MonotoneFn {
    let slope = (sp.ex / sp.n0).sqrt() / (sp.alpha_prime * (sp.alpha * sp.kappa).sqrt()) * 0.5f64.powf(sp.rate);
    MonotoneFn::Linear { slope }
}

/// Tabulates the fixed alphabet's minimal distance and the sphere-packing
/// bound over `m_list` and decides inflatability of each against the search
/// radius under [`inflation_link`].
pub fn run_codebook_inflation(
    m_list: &[u32],
    sp: &SpherePackingInputs,
    codebook: &Codebook,
) -> Result<InflationReport> {
    if m_list.is_empty() {
        return Err(invalid("m list must be non-empty"));
    }
    if m_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("m list must be strictly increasing"));
    }
    let gamma = MonotoneFn::SphereRadius { alpha: sp.alpha, kappa: sp.kappa, n0: sp.n0 };
    let g = inflation_link(sp);
    let codebook_dmin = codebook.dmin_sq().map_or(0.0, |d| (d as f64).sqrt());

    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let bound = sphere_packing_dmin_bound(&sp.with_m(m)?);
        let threshold = g.eval(gamma.eval(m as f64));
        rows.push(InflationRow {
            m,
            radius: bound.radius,
            threshold,
            codebook_dmin,
            codebook_ok: codebook_dmin >= threshold,
            sphere_packing_dmin: bound.dmin_bound,
            sphere_packing_ok: bound.dmin_bound >= threshold,
        });
    }
    let fixed: Vec<(u32, f64)> = rows.iter().map(|r| (r.m, r.codebook_dmin)).collect();
    let packed: Vec<(u32, f64)> = rows.iter().map(|r| (r.m, r.sphere_packing_dmin)).collect();
    Ok(InflationReport {
        codebook_inflatable: inflation_onset(&fixed, &gamma, &g)?.is_some(),
        sphere_packing_inflatable: inflation_onset(&packed, &gamma, &g)?.is_some(),
        gamma,
        g,
        rows,
        undetermined: m_list.len() < 2,
    })
}
