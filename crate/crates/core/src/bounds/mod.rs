//! Closed-form bounds and exponents.
//!
//! Values that scale exponentially with dimension are carried as natural logs;
//! linear values are only materialized by callers that know they are in range.

mod complexity;
mod inflation;

pub use complexity::{
    csd_exponent_lower_bound, eta_count, eta_inclusion_holds, eta_set, eta_set_log_size, jalden_log_lower_bound,
    psi_max, ComplexityBoundInputs, CsdLowerBound, ExponentComparison, DEFAULT_ETA_THETA,
};
pub use inflation::{
    inflation_onset, is_inflatable, sphere_packing_dmin_bound, MonotoneFn, SpherePackingBound, SpherePackingInputs,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which tail of the distance ratio a threshold `theta` bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// `P(ratio >= theta)` for `theta > 1`.
    Upper,
    /// `P(ratio <= theta)` for `0 < theta < 1`.
    Lower,
}

/// A threshold `theta > 0` and dimension `n` for the bound `(theta e^{1-theta})^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChernoffQuery {
    theta: f64,
    n: u32,
}

impl ChernoffQuery {
    pub fn new(theta: f64, n: u32) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(invalid(format!("theta must be positive and finite, got {theta}")));
        }
        Ok(ChernoffQuery { theta, n })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `None` at `theta = 1`, where neither tail statement applies.
    pub fn tail(&self) -> Option<Tail> {
        if self.theta > 1.0 {
            Some(Tail::Upper)
        } else if self.theta < 1.0 {
            Some(Tail::Lower)
        } else {
            None
        }
    }

    /// `n (ln theta + 1 - theta)`.
    pub fn log_bound(&self) -> f64 {
        self.n as f64 * (self.theta.ln() + 1.0 - self.theta)
    }
}

/// `(theta e^{1-theta})^n`, evaluated as `exp(n (ln theta + 1 - theta))`.
/// Equals 1 at `theta = 1` and lies in `(0, 1)` otherwise for `n >= 1`.
pub fn chernoff_bound(q: ChernoffQuery) -> f64 {
    q.log_bound().exp()
}

/// True when a Monte Carlo tail estimate is consistent with the Chernoff
/// bound: `empirical_p <= bound + 3 std_err`.
pub fn tail_bound_holds(empirical_p: f64, q: ChernoffQuery, std_err: f64) -> bool {
    empirical_p <= chernoff_bound(q) + 3.0 * std_err
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{chi2_cdf, chi2_sf};

    fn q(theta: f64, n: u32) -> ChernoffQuery {
        ChernoffQuery::new(theta, n).unwrap()
    }

    #[test]
    fn fixed_values() {
        for n in [0, 1, 7, 256] {
            assert_eq!(chernoff_bound(q(1.0, n)), 1.0);
        }
        let b1 = chernoff_bound(q(1.5, 1));
        assert!((b1 - 1.5 * (-0.5f64).exp()).abs() < 1e-15);
        assert!((b1 - 0.9097959895).abs() < 1e-10);
        let b16 = chernoff_bound(q(1.5, 16));
        assert!((b16 - 0.2203).abs() < 5e-5, "{b16}");
        assert!((b16 - (1.5 * (-0.5f64).exp()).powi(16)).abs() / b16 < 1e-13);
        let b256 = chernoff_bound(q(1.5, 256));
        assert!((b256 / 3.1e-11 - 1.0).abs() < 0.02, "{b256}");
        assert!(ChernoffQuery::new(0.0, 1).is_err());
        assert!(ChernoffQuery::new(-2.0, 1).is_err());
    }

    #[test]
    fn tail_selection() {
        assert_eq!(q(1.5, 1).tail(), Some(Tail::Upper));
        assert_eq!(q(0.5, 1).tail(), Some(Tail::Lower));
        assert_eq!(q(1.0, 1).tail(), None);
    }

    #[test]
    fn holds_predicate() {
        assert!(tail_bound_holds(0.0, q(3.0, 100), 0.0));
        let qq = q(1.5, 8);
        let se = 1e-3;
        assert!(!tail_bound_holds(chernoff_bound(qq) + 10.0 * se, qq, se));
        assert!(tail_bound_holds(chernoff_bound(qq) + 2.0 * se, qq, se));
    }

    #[test]
    fn strictly_below_one_and_decreasing_in_n() {
        for theta in [0.05, 0.3, 0.9, 0.999, 1.001, 1.2, 2.0, 5.0] {
            let mut prev = 1.0;
            for n in 1..=300 {
                let b = chernoff_bound(q(theta, n));
                assert!(b < 1.0 && b < prev, "theta={theta} n={n}");
                prev = b;
            }
        }
    }

    #[test]
    fn maximized_at_theta_one() {
        // d/dtheta of n (ln theta + 1 - theta) is n (1/theta - 1): positive
        // below 1, negative above.
        for n in [1u32, 4, 16, 64] {
            for i in 1..200 {
                let theta = i as f64 * 0.02;
                let h = 1e-6;
                let deriv = (q(theta + h, n).log_bound() - q(theta - h, n).log_bound()) / (2.0 * h);
                if theta < 0.999 {
                    assert!(deriv > 0.0);
                } else if theta > 1.001 {
                    assert!(deriv < 0.0);
                }
                assert!(chernoff_bound(q(theta, n)) <= 1.0);
            }
        }
    }

    #[test]
    fn chi_squared_tails_obey_the_bound() {
        for theta in [0.25, 0.5, 0.75, 1.25, 1.5, 2.0, 3.0] {
            for n in 1..=64u32 {
                let x = 2.0 * n as f64 * theta;
                let tail = if theta > 1.0 { chi2_sf(x, 2 * n).unwrap() } else { chi2_cdf(x, 2 * n).unwrap() };
                assert!(tail <= chernoff_bound(q(theta, n)), "theta={theta} n={n}");
            }
        }
    }
}
