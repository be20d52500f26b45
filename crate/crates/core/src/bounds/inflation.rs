//! Sphere-packing minimal-distance bound and the codebook inflation predicate.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Parameters of the sphere-packing existence bound on a codebook of
/// `2^{m R}` points on the sphere of radius `sqrt(m E_x)` in `C^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePackingInputs {
    pub m: u32,
    pub ex: f64,
    /// Chordal-to-geodesic constant; defaults to 1 when unknown.
    pub alpha_prime: f64,
    /// Rate in bits per complex dimension.
    pub rate: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub n0: f64,
}

impl SpherePackingInputs {
    pub fn new(m: u32, ex: f64, alpha_prime: f64, rate: f64, alpha: f64, kappa: f64, n0: f64) -> Result<Self> {
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        for (name, v) in [("E_x", ex), ("alpha'", alpha_prime), ("kappa", kappa), ("N0", n0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(invalid(format!("rate must be finite and >= 0, got {rate}")));
        }
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(invalid(format!("alpha must exceed 1, got {alpha}")));
        }
        Ok(SpherePackingInputs { m, ex, alpha_prime, rate, alpha, kappa, n0 })
    }

    pub fn with_m(mut self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        self.m = m;
        Ok(self)
    }

    /// `D_{m,1} = 2m - 1`, the real dimension of the complex unit sphere.
    pub fn manifold_dim(&self) -> f64 {
        2.0 * self.m as f64 - 1.0
    }

    /// Search radius `rho(m) = sqrt(alpha kappa m N0)`.
    pub fn radius(&self) -> f64 {
        (self.alpha * self.kappa * self.m as f64 * self.n0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePackingBound {
    /// `sqrt(m E_x) / alpha' * (1/2)^{m R / (2m - 1)}`.
    pub dmin_bound: f64,
    /// `rho(m)`.
    pub radius: f64,
    /// `sqrt(E_x / N0) / (alpha' sqrt(alpha kappa)) * (1/2)^{m R / (2m - 1)}`,
    /// so that `dmin_bound = radius_coefficient * radius`.
    pub radius_coefficient: f64,
}

pub fn sphere_packing_dmin_bound(sp: &SpherePackingInputs) -> SpherePackingBound {
    let m = sp.m as f64;
    let rate_penalty = 0.5f64.powf(m * sp.rate / sp.manifold_dim());
    let dmin_bound = (m * sp.ex).sqrt() / sp.alpha_prime * rate_penalty;
    let radius_coefficient = (sp.ex / sp.n0).sqrt() / (sp.alpha_prime * (sp.alpha * sp.kappa).sqrt()) * rate_penalty;
    SpherePackingBound { dmin_bound, radius: sp.radius(), radius_coefficient }
}

/// Monotone non-decreasing maps used for `gamma(m)` and `g(.)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneFn {
    Identity,
    Linear {
        slope: f64,
    },
    Sqrt {
        scale: f64,
    },
    /// `sqrt(alpha kappa x N0)`: the search radius as a function of `m`.
    SphereRadius {
        alpha: f64,
        kappa: f64,
        n0: f64,
    },
}

impl MonotoneFn {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            MonotoneFn::Identity => true,
            MonotoneFn::Linear { slope } => slope > 0.0 && slope.is_finite(),
            MonotoneFn::Sqrt { scale } => scale > 0.0 && scale.is_finite(),
            MonotoneFn::SphereRadius { alpha, kappa, n0 } => {
                [alpha, kappa, n0].iter().all(|v| *v > 0.0 && v.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("not a positive monotone map: {self:?}")))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            MonotoneFn::Identity => x,
            MonotoneFn::Linear { slope } => slope * x,
            MonotoneFn::Sqrt { scale } => scale * x.sqrt(),
            MonotoneFn::SphereRadius { alpha, kappa, n0 } => (alpha * kappa * x * n0).sqrt(),
        }
    }
}

/// Index of the earliest sample from which `d_min(m) >= g(gamma(m))` holds for
/// every later sample, or `None` if the last sample already violates it.
///
/// `samples` are `(m, d_min(m))` pairs with strictly increasing `m`.
pub fn inflation_onset(samples: &[(u32, f64)], gamma: &MonotoneFn, g: &MonotoneFn) -> Result<Option<usize>> {
    if samples.is_empty() {
        return Err(invalid("need at least one (m, d_min) sample"));
    }
    gamma.validate()?;
    g.validate()?;
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(invalid("m values must be strictly increasing"));
    }
    let mut onset = None;
    for (i, &(m, d)) in samples.iter().enumerate().rev() {
        if d >= g.eval(gamma.eval(m as f64)) {
            onset = Some(i);
        } else {
            break;
        }
    }
    Ok(onset)
}

/// Whether the sampled minimal distances inflate with `gamma` under `g`:
/// `d_min(m) >= g(gamma(m))` for every sampled `m` from some index onward.
pub fn is_inflatable(samples: &[(u32, f64)], gamma: &MonotoneFn, g: &MonotoneFn) -> Result<bool> {
    Ok(inflation_onset(samples, gamma, g)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(m: u32, rate: f64) -> SpherePackingInputs {
        SpherePackingInputs::new(m, 1.0, 1.0, rate, 2.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn reference_value() {
        let b = sphere_packing_dmin_bound(&sp(8, 1.0));
        let expected = 8f64.sqrt() * 2f64.powf(-8.0 / 15.0);
        assert!((b.dmin_bound - expected).abs() < 1e-12);
        assert!((b.dmin_bound - 1.954_32).abs() < 1e-5);
        assert!((b.radius_coefficient * b.radius - b.dmin_bound).abs() < 1e-12);
    }

    #[test]
    fn zero_rate_has_no_penalty() {
        for m in [1, 5, 40] {
            let b = sphere_packing_dmin_bound(&sp(m, 0.0));
            assert!((b.dmin_bound - (m as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn large_m_penalty_tends_to_half_rate() {
        let rate = 1.7;
        let m = 1_000_000;
        let b = sphere_packing_dmin_bound(&sp(m, rate));
        let limit = (m as f64).sqrt() * 2f64.powf(-rate / 2.0);
        assert!((b.dmin_bound / limit - 1.0).abs() < 1e-5);
    }

    #[test]
    fn constant_distance_is_not_inflatable() {
        let samples: Vec<_> = (1..=64).map(|m| (m, 1.0)).collect();
        let gamma = MonotoneFn::Sqrt { scale: 1.0 };
        assert!(!is_inflatable(&samples, &gamma, &MonotoneFn::Identity).unwrap());
    }

    #[test]
    fn equality_counts_as_inflation() {
        let gamma = MonotoneFn::Sqrt { scale: 1.0 };
        let samples: Vec<_> = (1..=64).map(|m| (m, gamma.eval(m as f64))).collect();
        assert_eq!(inflation_onset(&samples, &gamma, &MonotoneFn::Identity).unwrap(), Some(0));
    }

    #[test]
    fn sphere_packing_trajectory_inflates_with_radius() {
        let rate = 2.0;
        let base = sp(1, rate);
        let samples: Vec<_> =
            (1..=256).map(|m| (m, sphere_packing_dmin_bound(&base.with_m(m).unwrap()).dmin_bound)).collect();
        let gamma = MonotoneFn::SphereRadius { alpha: 2.0, kappa: 2.0, n0: 1.0 };
        let slope = (1.0f64 / 1.0).sqrt() / (1.0 * 4f64.sqrt()) * 0.5f64.powf(rate);
        assert!(is_inflatable(&samples, &gamma, &MonotoneFn::Linear { slope }).unwrap());
    }

    #[test]
    fn rejects_bad_samples() {
        let g = MonotoneFn::Identity;
        assert!(inflation_onset(&[], &g, &g).is_err());
        assert!(inflation_onset(&[(2, 1.0), (2, 1.0)], &g, &g).is_err());
        assert!(inflation_onset(&[(1, 1.0)], &MonotoneFn::Linear { slope: -1.0 }, &g).is_err());
    }
}
