use super::*;
use crate::bounds::SpherePackingInputs;
use crate::numerics::chi2_cdf;

fn cfg(seed: u64, trials: u64, n_list: Vec<usize>, thetas: Vec<f64>) -> ExperimentConfig {
    ExperimentConfig::new(seed, trials, n_list, thetas)
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn bound_curve_values() {
    let r = run_bound_curves(&[1, 256], &[1.0, 1.5]).unwrap();
    assert_eq!(r.len(), 4);
    assert_eq!((r[0].n, r[0].param, r[0].estimate), (1, 1.0, 1.0));
    let expected = (256.0 * (1.5f64.ln() - 0.5)).exp();
    assert!((r[3].estimate - expected).abs() <= 1e-12 * expected);
    assert!(r.iter().all(|x| x.std_err == 0.0 && x.estimate == x.bound_value));
}

#[test]
fn bound_curves_decrease_in_n_away_from_one() {
    let thetas = theta_grid(0.1, 3.0, 59).unwrap();
    let ns = [1, 4, 16, 64, 256];
    let r = run_bound_curves(&ns, &thetas).unwrap();
    for chunk in r.chunks(ns.len()) {
        // theta e^{1 - theta} rounds to 1.0 within ~1e-8 of theta = 1.
        if (chunk[0].param - 1.0).abs() < 1e-6 {
            continue;
        }
        assert!(chunk.windows(2).all(|w| w[1].estimate < w[0].estimate), "theta={}", chunk[0].param);
    }
    assert!(run_bound_curves(&[1], &[0.0]).is_err());
}

#[test]
fn theta_grid_endpoints() {
    let g = theta_grid(0.1, 3.0, 300).unwrap();
    assert_eq!(g.len(), 300);
    assert_eq!(g[0], 0.1);
    assert_eq!(g[299], 3.0);
    assert_eq!(theta_grid(2.0, 2.0, 1).unwrap(), vec![2.0]);
    assert!(theta_grid(0.0, 1.0, 3).is_err());
    assert!(theta_grid(2.0, 1.0, 3).is_err());
    assert!(theta_grid(1.0, 2.0, 0).is_err());
}

#[test]
fn config_validation() {
    assert!(run_tail_probability(&cfg(1, 0, vec![4], vec![1.5])).is_err());
    assert!(run_tail_probability(&cfg(1, 10, vec![], vec![1.5])).is_err());
    assert!(run_tail_probability(&cfg(1, 10, vec![4], vec![-1.0])).is_err());
    let mut c = cfg(1, 10, vec![4], vec![1.5]);
    c.delta_x = DeltaXSpec::Fixed { head: vec![GaussInt::new(0, 0)] };
    assert!(c.validate().is_err());
    c.delta_x = DeltaXSpec::Fixed { head: vec![GaussInt::new(1, 0); 3] };
    assert!(c.validate().is_err());
    c.delta_x = DeltaXSpec::RandomPair;
    c.codebook = Codebook::new(0, 1, 1).unwrap();
    assert!(c.validate().is_err());
}

#[test]
fn lower_tail_at_n1_matches_exact_cdf() {
    let r = run_tail_probability(&cfg(42, 100_000, vec![1], vec![0.5])).unwrap();
    let exact = chi2_cdf(1.0, 2).unwrap();
    assert!((exact - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
    assert!((r[0].estimate - exact).abs() <= 3.0 * r[0].std_err, "{} vs {exact}", r[0].estimate);
    assert!((r[0].bound_value - 0.5 * 0.5f64.exp()).abs() < 1e-12);
    assert!(r[0].tail_bound_holds());
}

#[test]
fn tail_results_respect_bound_and_se_formula() {
    let r = run_tail_probability(&cfg(3, 20_000, vec![1, 2, 4, 8], vec![0.5, 1.5, 2.0])).unwrap();
    for x in &r {
        assert!((0.0..=1.0).contains(&x.estimate));
        let se = (x.estimate * (1.0 - x.estimate) / x.trials as f64).sqrt();
        assert_eq!(x.std_err, se);
        assert!(x.tail_bound_holds(), "{x:?}");
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let c = cfg(9, 5_000, vec![2, 8], vec![0.5, 1.5]);
    let strip = |mut v: Vec<ExperimentResult>| {
        v.iter_mut().for_each(|r| r.wall_time = None);
        v
    };
    let one = strip(in_pool(1, || run_tail_probability(&c).unwrap()));
    let four = strip(in_pool(4, || run_tail_probability(&c).unwrap()));
    assert_eq!(one, four);

    let mut sd = cfg(9, 200, vec![4, 6], vec![]);
    sd.n0 = 0.5;
    let a = in_pool(1, || run_sd_complexity(&sd).unwrap());
    let b = in_pool(3, || run_sd_complexity(&sd).unwrap());
    assert_eq!(a.iter().map(|p| p.mean_csd).collect::<Vec<_>>(), b.iter().map(|p| p.mean_csd).collect::<Vec<_>>());
}

#[test]
fn difference_choice_does_not_change_the_law() {
    let fixed = cfg(5, 40_000, vec![4], vec![1.5]);
    let mut random = fixed.clone();
    random.delta_x = DeltaXSpec::RandomPair;
    random.codebook = Codebook::new(-1, 3, 1).unwrap();
    random.master_seed = 6;
    let a = &run_tail_probability(&fixed).unwrap()[0];
    let b = &run_tail_probability(&random).unwrap()[0];
    let se = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
    assert!((a.estimate - b.estimate).abs() <= 4.0 * se, "{} vs {}", a.estimate, b.estimate);
}

#[test]
fn concentration_moments_and_decay() {
    let c = cfg(21, 100_000, vec![4, 16, 64, 256], vec![]);
    let pts = run_concentration(&c, 0.1).unwrap();
    for p in &pts {
        assert!((p.mean - 1.0).abs() <= 3.0 * p.mean_std_err, "n={} mean={}", p.n, p.mean);
        assert!(p.exceed_prob <= p.chernoff_sum.min(1.0) + 3.0 * p.exceed_std_err);
    }
    let v16 = &pts[1];
    assert!(v16.variance >= 0.9 / 16.0 && v16.variance <= 1.1 / 16.0, "var={}", v16.variance);
    assert!(pts.windows(2).all(|w| w[1].exceed_prob <= w[0].exceed_prob));
    assert_eq!(pts[0].to_results().len(), 3);
    assert!(run_concentration(&c, 0.0).is_err());
}

#[test]
fn chernoff_sum_drops_lower_term_for_wide_epsilon() {
    let pts = run_concentration(&cfg(1, 10, vec![4], vec![]), 1.5).unwrap();
    let upper = (2.5f64 * (-1.5f64).exp()).powi(4);
    assert!((pts[0].chernoff_sum - upper).abs() < 1e-15);
}

#[test]
fn ks_accepts_same_law_and_rejects_shift() {
    let a = normalized_chi2_draws(1, 8, 20_000).unwrap();
    let b = normalized_chi2_draws(2, 8, 20_000).unwrap();
    assert!(ks_two_sample(&a, &b, 0.01).unwrap().passes);
    let shifted: Vec<f64> = b.iter().map(|x| x + 0.05).collect();
    assert!(!ks_two_sample(&a, &shifted, 0.01).unwrap().passes);
    let k = ks_two_sample(&[1.0, 2.0], &[1.0, 2.0], 0.01).unwrap();
    assert_eq!(k.statistic, 0.0);
    assert!(ks_two_sample(&[], &[1.0], 0.01).is_err());
    assert!(ks_two_sample(&[1.0], &[1.0], 1.5).is_err());
}

#[test]
fn ks_statistic_matches_direct_ecdf_scan() {
    let a = normalized_chi2_draws(3, 2, 300).unwrap();
    let b = ratio_draws(&cfg(4, 200, vec![2], vec![]), 2).unwrap();
    let ecdf = |s: &[f64], x: f64| s.iter().filter(|v| **v <= x).count() as f64 / s.len() as f64;
    let direct = a.iter().chain(&b).map(|&x| (ecdf(&a, x) - ecdf(&b, x)).abs()).fold(0.0, f64::max);
    assert!((ks_two_sample(&a, &b, 0.01).unwrap().statistic - direct).abs() < 1e-15);
}

#[test]
fn sd_complexity_small_instance() {
    let mut c = cfg(8, 1000, vec![4], vec![]);
    c.n0 = 1.0;
    let p = &run_sd_complexity(&c).unwrap()[0];
    assert_eq!(p.m, 2);
    assert!(p.mean_csd >= p.mean_nsc && p.mean_nsc >= 1.0);
    assert!(p.pathwise_csd_ge_nsc);
    assert!(p.found_rate >= 1.0 - (2.0 * (-1.0f64).exp()).powi(4) - 3.0 * p.found_std_err);
    assert!((p.log_bound - 2.0 * 2f64.ln()).abs() < 1e-12);
    let total: f64 = p.mean_level_counts.iter().sum();
    assert!((total - p.mean_csd).abs() < 1e-9 * p.mean_csd);
}

#[test]
fn sd_complexity_huge_radius_counts_everything() {
    let mut c = cfg(8, 50, vec![4, 6], vec![]);
    c.alpha = 1e9;
    for p in run_sd_complexity(&c).unwrap() {
        assert_eq!(p.mean_nsc, 4f64.powi(p.m as i32));
        assert_eq!(p.nsc_std_err, 0.0);
    }
}

#[test]
fn sd_complexity_grows_with_dimension() {
    let c = cfg(10, 1000, vec![4, 6, 8], vec![]);
    let pts = run_sd_complexity(&c).unwrap();
    assert_eq!(pts.iter().map(|p| p.m).collect::<Vec<_>>(), vec![2, 3, 4]);
    assert!(pts.windows(2).all(|w| w[1].mean_nsc > w[0].mean_nsc));
}

#[test]
fn sd_complexity_enforces_cap() {
    let mut c = cfg(1, 1, vec![8], vec![]);
    c.codebook = Codebook::new(0, 2, 1).unwrap().with_enumeration_cap(10);
    assert!(matches!(run_sd_complexity(&c), Err(crate::Error::TooLarge { .. })));
}

#[test]
fn pep_limit_and_gap_decay() {
    let c = cfg(17, 100_000, vec![4, 16, 64], vec![1.5]);
    let report = run_pep(&c, &[GaussInt::new(1, 1)]).unwrap();
    let q1 = crate::numerics::q_function(1.0);
    assert!((q1 - 0.158_655_253_9).abs() < 1e-9);
    assert!(report.points.iter().all(|p| p.asymptotic == q1));
    assert!(report.points.windows(2).all(|w| w[1].abs_gap < w[0].abs_gap));
    let t16 = report.tails.iter().find(|t| t.n == 16).unwrap();
    assert!((t16.bound - (1.5f64 * (-0.5f64).exp()).powi(16)).abs() < 1e-12);
    assert!(t16.holds);
    assert_eq!(report.to_results().len(), 6);
}

#[test]
fn pep_tail_equals_noiseless_ratio_tail() {
    let mut c = cfg(33, 20_000, vec![4, 16], vec![0.5, 1.5]);
    c.n0 = 0.0;
    let tail = run_tail_probability(&c).unwrap();
    c.n0 = 1.0;
    let report = run_pep(&c, &[GaussInt::new(1, 1)]).unwrap();
    for (a, b) in tail.iter().zip(&report.tails) {
        assert_eq!((a.n, a.param), (b.n, b.theta));
        assert_eq!(a.estimate, b.frequency);
    }
}

#[test]
fn pep_rejects_degenerate_inputs() {
    let c = cfg(1, 10, vec![4], vec![]);
    assert!(run_pep(&c, &[GaussInt::new(0, 0)]).is_err());
    assert!(run_pep(&c, &[GaussInt::new(1, 0); 3]).is_err());
    let mut z = c.clone();
    z.n0 = 0.0;
    assert!(run_pep(&z, &[GaussInt::new(1, 0)]).is_err());
}

#[test]
fn inflation_report_separates_fixed_alphabet_from_packing_bound() {
    let cb = Codebook::new(0, 2, 1).unwrap();
    let sp = SpherePackingInputs::new(1, cb.power_ex(), 1.0, 2.0, 2.0, 2.0, 1.0).unwrap();
    let ms: Vec<u32> = (1..=64).collect();
    let r = run_codebook_inflation(&ms, &sp, &cb).unwrap();
    assert!(!r.codebook_inflatable);
    assert!(r.sphere_packing_inflatable);
    assert!(!r.undetermined);
    assert!(r.rows.iter().all(|row| row.sphere_packing_ok && row.codebook_dmin == 1.0));
    assert!(r.rows.first().unwrap().codebook_ok && !r.rows.last().unwrap().codebook_ok);

    let single = run_codebook_inflation(&[8], &sp, &cb).unwrap();
    assert!(single.undetermined);
    assert!(run_codebook_inflation(&[], &sp, &cb).is_err());
    assert!(run_codebook_inflation(&[4, 2], &sp, &cb).is_err());
}
