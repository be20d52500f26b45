//! Sphere-decoding complexity lower bounds and exponent arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lattice::{Codebook, GaussInt};

/// Threshold used when evaluating the `eta` construction "just above 1".
pub const DEFAULT_ETA_THETA: f64 = 1.0 + 1e-4;

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Inputs of the exponential lower bound on expected sphere-decoding
/// complexity with radius `rho^2 = alpha n N0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityBoundInputs {
    pub n: u32,
    pub kappa: f64,
    pub alpha: f64,
    pub n0: f64,
    pub l: u32,
    pub dmax_sq: f64,
}

impl ComplexityBoundInputs {
    pub fn new(n: u32, kappa: f64, alpha: f64, n0: f64, l: u32, dmax_sq: f64) -> Result<Self> {
        if !(kappa > 1.0) || !kappa.is_finite() {
            return Err(invalid(format!("kappa must exceed 1, got {kappa}")));
        }
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(invalid(format!("alpha must exceed 1, got {alpha}")));
        }
        positive("N0", n0)?;
        if l == 0 {
            return Err(invalid("L must be at least 1"));
        }
        if !(dmax_sq >= 0.0) || !dmax_sq.is_finite() {
            return Err(invalid(format!("d_max^2 must be finite and >= 0, got {dmax_sq}")));
        }
        Ok(ComplexityBoundInputs { n, kappa, alpha, n0, l, dmax_sq })
    }
}

/// `C_SD >~ L^{exponent}` in two symbol-counting conventions.
///
/// `exponent_base_l = n min{1/kappa, (alpha-1) N0 / d_max^2}` counts `L`
/// symbols per coordinate. Each complex coordinate of the rectangular codebook
/// actually carries `L^2` symbols, which doubles the exponent in base `L`;
/// that reading is reported as `exponent_base_l_complex`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsdLowerBound {
    pub exponent_base_l: f64,
    pub log_bound: f64,
    pub exponent_base_l_complex: f64,
    pub log_bound_complex: f64,
}

pub fn csd_exponent_lower_bound(b: &ComplexityBoundInputs) -> Result<CsdLowerBound> {
    if b.dmax_sq == 0.0 {
        return Err(Error::DegenerateCodebook);
    }
    let rate = (1.0 / b.kappa).min((b.alpha - 1.0) * b.n0 / b.dmax_sq);
    let exponent = b.n as f64 * rate;
    let ln_l = (b.l as f64).ln();
    Ok(CsdLowerBound {
        exponent_base_l: exponent,
        log_bound: exponent * ln_l,
        exponent_base_l_complex: 2.0 * exponent,
        log_bound_complex: 2.0 * exponent * ln_l,
    })
}

/// Natural log of the PAM-based lower bound `(L^{eta m} - 1) / (L - 1)` with
/// `eta = (1/2) (c^2 (L^2 - 1) / (3 N0) + 1)^{-1}`.
///
/// Returns `-inf` for `m = 0`, where the bound is 0.
pub fn jalden_log_lower_bound(m: u32, l: u32, c_sq: f64, n0: f64) -> Result<f64> {
    if l < 2 {
        return Err(invalid("L must be at least 2 (the bound divides by L - 1)"));
    }
    positive("c^2", c_sq)?;
    positive("N0", n0)?;
    let lf = l as f64;
    let eta = 0.5 / (c_sq * (lf * lf - 1.0) / (3.0 * n0) + 1.0);
    let t = eta * m as f64 * lf.ln();
    if t == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    // ln(e^t - 1), stable for both small and large t.
    let log_numerator = if t < 30.0 { t.exp_m1().ln() } else { t + (-(-t).exp()).ln_1p() };
    Ok(log_numerator - (lf - 1.0).ln())
}

/// Exponent comparison inputs for the upper-bound branch of the counting
/// argument; `psi` is a caller-chosen rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentComparison {
    pub psi: f64,
    pub theta: f64,
    pub l: u32,
    pub kappa: f64,
}

impl ExponentComparison {
    pub fn new(psi: f64, theta: f64, l: u32, kappa: f64) -> Result<Self> {
        positive("psi", psi)?;
        positive("theta", theta)?;
        positive("kappa", kappa)?;
        if l == 0 {
            return Err(invalid("L must be at least 1"));
        }
        Ok(ExponentComparison { psi, theta, l, kappa })
    }
}

/// `max{psi, ln theta + 1 - theta + ln L / kappa}`.
pub fn psi_max(e: &ExponentComparison) -> f64 {
    let chernoff_plus_worst_case = e.theta.ln() + 1.0 - e.theta + (e.l as f64).ln() / e.kappa;
    e.psi.max(chernoff_plus_worst_case)
}

/// `floor((alpha - 1) n N0 / (theta d_max^2))`, for `1 < theta < alpha`.
pub fn eta_count(n: u32, alpha: f64, n0: f64, theta: f64, dmax_sq: f64) -> Result<u64> {
    positive("N0", n0)?;
    positive("d_max^2", dmax_sq)?;
    if !(theta > 1.0 && theta < alpha) {
        return Err(invalid(format!("theta must lie in (1, alpha) = (1, {alpha}), got {theta}")));
    }
    Ok(((alpha - 1.0) * n as f64 * n0 / (theta * dmax_sq)).floor() as u64)
}

/// Whether every member of the `eta` set provably satisfies
/// `||x_hat - x||^2 + n N0 <= alpha n N0 / theta`, i.e. whether
/// `eta d_max^2 + n N0 <= alpha n N0 / theta`.
///
/// The floor in [`eta_count`] only guarantees `eta d_max^2 <= (alpha-1) n N0 / theta`,
/// which is weaker by `(theta - 1) n N0 / theta`; the inclusion can fail when
/// `theta` is not close to 1.
pub fn eta_inclusion_holds(n: u32, alpha: f64, n0: f64, theta: f64, dmax_sq: f64) -> Result<bool> {
    let eta = eta_count(n, alpha, n0, theta, dmax_sq)?;
    let nn0 = n as f64 * n0;
    Ok(eta as f64 * dmax_sq + nn0 <= alpha * nn0 / theta)
}

/// Natural log of the size of the `eta` set inside an `m`-dimensional
/// rectangular codebook: `(L^2)^{min(eta, m)}`.
pub fn eta_set_log_size(eta: u64, m: usize, l: u32) -> f64 {
    let free = eta.min(m as u64) as f64;
    free * 2.0 * (l as f64).ln()
}

/// Materializes the `eta` set around `x_hat`: the first `min(eta, m)`
/// coordinates range over every codebook symbol, the rest equal `x_hat`.
pub fn eta_set(x_hat: &[GaussInt], codebook: &Codebook, eta: u64) -> Result<Vec<Vec<GaussInt>>> {
    let m = codebook.m();
    if x_hat.len() != m {
        return Err(invalid("x_hat dimension does not match codebook"));
    }
    let free = eta.min(m as u64) as usize;
    let tail = &x_hat[free..];
    if free == 0 {
        return Ok(vec![x_hat.to_vec()]);
    }
    let sub = codebook.with_dim(free)?;
    Ok(sub
        .enumerate()?
        .map(|mut head| {
            head.extend_from_slice(tail);
            head
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exponent_eight_at_reference_point() {
        let b = ComplexityBoundInputs::new(16, 2.0, 2.0, 1.0, 2, 2.0).unwrap();
        let r = csd_exponent_lower_bound(&b).unwrap();
        assert!((r.exponent_base_l - 8.0).abs() < 1e-12);
        assert!((r.log_bound.exp() - 256.0).abs() < 1e-9);
        assert!((r.exponent_base_l_complex - 16.0).abs() < 1e-12);
        assert!((r.log_bound_complex - 16.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn vanishing_excess_radius() {
        let b = ComplexityBoundInputs::new(16, 2.0, 1.0 + 1e-12, 1.0, 2, 2.0).unwrap();
        let r = csd_exponent_lower_bound(&b).unwrap();
        assert!(r.exponent_base_l < 1e-10 && r.log_bound.exp() - 1.0 < 1e-10);
    }

    #[test]
    fn high_snr_exponent_is_noise_limited() {
        let b = ComplexityBoundInputs::new(64, 2.0, 2.0, 1e-3, 4, 18.0).unwrap();
        let r = csd_exponent_lower_bound(&b).unwrap();
        assert!((r.exponent_base_l - 64.0 * 1e-3 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let b = ComplexityBoundInputs::new(16, 2.0, 2.0, 1.0, 1, 0.0).unwrap();
        assert_eq!(csd_exponent_lower_bound(&b), Err(Error::DegenerateCodebook));
        assert!(ComplexityBoundInputs::new(16, 1.0, 2.0, 1.0, 2, 2.0).is_err());
        assert!(ComplexityBoundInputs::new(16, 2.0, 1.0, 1.0, 2, 2.0).is_err());
        assert!(ComplexityBoundInputs::new(16, 2.0, 2.0, 0.0, 2, 2.0).is_err());
    }

    #[test]
    fn jalden_reference_values() {
        let v = jalden_log_lower_bound(16, 2, 1.0, 1.0).unwrap();
        assert!((v - 15f64.ln()).abs() < 1e-12);
        assert_eq!(jalden_log_lower_bound(0, 2, 1.0, 1.0).unwrap(), f64::NEG_INFINITY);
        assert!(jalden_log_lower_bound(4, 1, 1.0, 1.0).is_err());
        // Large exponents stay finite in log space.
        let big = jalden_log_lower_bound(100_000, 2, 1.0, 1.0).unwrap();
        assert!((big - (0.25 * 100_000.0 * 2f64.ln())).abs() < 1e-6);
    }

    #[test]
    fn jalden_eta_asymptotics_in_l() {
        // eta -> 3 N0 / (2 c^2 L^2) and the exponent eta m ln L -> 0.
        let (c_sq, n0, m) = (1.0, 1.0, 10u32);
        let mut prev = f64::INFINITY;
        for l in [16u32, 64, 256, 1024] {
            let lf = l as f64;
            let eta = 0.5 / (c_sq * (lf * lf - 1.0) / (3.0 * n0) + 1.0);
            let approx = 3.0 * n0 / (2.0 * c_sq * lf * lf);
            assert!((eta / approx - 1.0).abs() < 3.0 / (lf * lf));
            let exponent = eta * m as f64 * lf.ln();
            assert!(exponent < prev);
            prev = exponent;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn psi_max_examples() {
        let e = ExponentComparison::new(1.0, 1.0, 1, 3.0).unwrap();
        assert_eq!(psi_max(&e), 1.0);
        let e = ExponentComparison::new(0.1, 0.5, 4, 2.0).unwrap();
        let expected = 0.5f64.ln() + 0.5 + 4f64.ln() / 2.0;
        assert!((psi_max(&e) - expected).abs() < 1e-15);
        assert!((expected - 0.5).abs() < 1e-12);
        let e = ExponentComparison::new(0.2, 1.0 + 1e-9, 4, 1e12).unwrap();
        assert_eq!(psi_max(&e), 0.2);
        assert!(ExponentComparison::new(0.0, 1.0, 2, 2.0).is_err());
    }

    #[test]
    fn eta_reference_value_and_membership() {
        let eta = eta_count(16, 2.0, 1.0, DEFAULT_ETA_THETA, 2.0).unwrap();
        assert_eq!(eta, 7);
        assert!(eta_count(16, 1.0 + 1e-9, 1.0, 1.0 + 1e-10, 2.0).unwrap() == 0);
        assert!(eta_count(16, 2.0, 1.0, 1.0, 2.0).is_err());
        assert!(eta_count(16, 2.0, 1.0, 2.5, 2.0).is_err());
        assert!(eta_inclusion_holds(16, 2.0, 1.0, DEFAULT_ETA_THETA, 2.0).unwrap());

        // Brute-force membership over the free coordinates (m = 8, kappa = 2).
        let cb = Codebook::new(0, 2, 8).unwrap();
        let x_hat = cb.codeword_at(12345);
        let set = eta_set(&x_hat, &cb, eta).unwrap();
        assert_eq!(set.len(), 4usize.pow(7));
        let budget = 2.0 * 16.0 * 1.0 / DEFAULT_ETA_THETA;
        for x in &set {
            assert!(cb.index_of(x).is_some());
            let d = GaussInt::distance_sq(&x_hat, x) as f64;
            assert!(d + 16.0 <= budget);
        }
        assert!((eta_set_log_size(eta, 8, 2) - (set.len() as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn eta_inclusion_fails_far_from_one() {
        // eta = floor(16 / 3.8) = 4, 4 * 2 + 16 = 24 > 32 / 1.9.
        assert_eq!(eta_count(16, 2.0, 1.0, 1.9, 2.0).unwrap(), 4);
        assert!(!eta_inclusion_holds(16, 2.0, 1.0, 1.9, 2.0).unwrap());
    }

    proptest! {
        #[test]
        fn thm2_exponent_monotonicity(
            n in 1u32..200, kappa in 1.01f64..8.0, alpha in 1.01f64..6.0,
            n0 in 0.001f64..5.0, dmax in 0.5f64..50.0, bump in 0.01f64..2.0,
        ) {
            let e = |k: f64, a: f64, z: f64, d: f64| {
                csd_exponent_lower_bound(&ComplexityBoundInputs::new(n, k, a, z, 4, d).unwrap())
                    .unwrap()
                    .exponent_base_l
            };
            let base = e(kappa, alpha, n0, dmax);
            prop_assert!(e(kappa, alpha + bump, n0, dmax) >= base);
            prop_assert!(e(kappa, alpha, n0 + bump, dmax) >= base);
            prop_assert!(e(kappa, alpha, n0, dmax + bump) <= base);
            prop_assert!(e(kappa + bump, alpha, n0, dmax) <= base);
        }

        #[test]
        fn eta_floor_brackets(
            n in 1u32..500, alpha in 1.05f64..5.0, n0 in 0.01f64..4.0,
            frac in 0.0001f64..0.999, dmax in 0.5f64..40.0,
        ) {
            let theta = 1.0 + frac * (alpha - 1.0);
            prop_assume!(theta > 1.0 && theta < alpha);
            let eta = eta_count(n, alpha, n0, theta, dmax).unwrap() as f64;
            let target = (alpha - 1.0) * n as f64 * n0;
            let tol = 1e-9 * target.max(1.0);
            prop_assert!(eta * dmax * theta <= target + tol);
            prop_assert!(target < (eta + 1.0) * dmax * theta + tol);
        }
    }
}
