//! One function per subcommand.

use serde::Serialize;

use rlat::bounds::SpherePackingInputs;
use rlat::decoder::{brute_force_oracle, sample_problem, sphere_decode, DecodeTrace, SphereConstraint};
use rlat::experiments::{
    run_bound_curves, run_codebook_inflation, run_concentration, run_pep, run_sd_complexity, run_tail_probability,
    theta_grid, DeltaXSpec, ExperimentConfig, ExperimentResult,
};
use rlat::lattice::{Codebook, GaussInt, LatticeParams, NoiseModel};
use rlat::numerics::SeededRng;

use crate::args::{
    BoundCurvesArgs, Command, ConcentrationArgs, DecodeArgs, DeltaKind, Format, InflationArgs, OutputArgs, PepArgs,
    SdComplexityArgs, TailProbArgs,
};
use crate::emit::{csv_bytes, json_bytes, write_output, Cell};
use crate::CliError;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::BoundCurves(a) => bound_curves(a),
        Command::TailProb(a) => tail_prob(a),
        Command::Concentration(a) => concentration(a),
        Command::SdComplexity(a) => sd_complexity(a),
        Command::Pep(a) => pep(a),
        Command::Inflation(a) => inflation(a),
        Command::Decode(a) => decode(a),
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Writes either the CSV table or the JSON result array.
fn emit(
    out: &OutputArgs,
    header: &[&str],
    rows: Vec<Vec<Cell>>,
    mut results: Vec<ExperimentResult>,
) -> Result<(), CliError> {
    let bytes = match out.format {
        Format::Csv => csv_bytes(header, &rows)?,
        Format::Json => {
            if !out.timing {
                results.iter_mut().for_each(|r| r.wall_time = None);
            }
            json_bytes(&results)?
        }
    };
    write_output(out.out.as_deref(), &bytes)
}

fn violation_if(violations: Vec<String>) -> Result<(), CliError> {
    match violations.len() {
        0 => Ok(()),
        1 => Err(CliError::Violation(violations[0].clone())),
        k => Err(CliError::Violation(format!("{} (and {} more)", violations[0], k - 1))),
    }
}

fn bound_curves(a: BoundCurvesArgs) -> Result<(), CliError> {
    let thetas = match a.theta {
        Some(t) => t,
        None => theta_grid(a.theta_min, a.theta_max, a.steps)?,
    };
    let results = run_bound_curves(&a.n, &thetas)?;
    let rows =
        results.iter().map(|r| vec![Cell::Float(r.param), Cell::Int(r.n as u64), Cell::Float(r.estimate)]).collect();
    emit(&a.output, &["theta", "n", "bound"], rows, results)
}

fn base_config(seed: u64, trials: u64, n: Vec<usize>, theta: Vec<f64>, n0: f64, kappa: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(seed, trials, n, theta);
    cfg.n0 = n0;
    cfg.kappa = kappa;
    cfg
}

fn tail_prob(a: TailProbArgs) -> Result<(), CliError> {
    let mut cfg = base_config(a.run.seed, a.trials, a.n, a.theta, a.n0, a.kappa);
    cfg.codebook = Codebook::new(a.tau, a.l, 1)?;
    if a.delta_x == DeltaKind::Random {
        cfg.delta_x = DeltaXSpec::RandomPair;
    }
    let results = in_pool(a.run.threads, || run_tail_probability(&cfg))??;
    let mut violations = Vec::new();
    let rows = results
        .iter()
        .map(|r| {
            let holds = r.tail_bound_holds();
            if !holds {
                violations.push(format!(
                    "n={} theta={} empirical={} exceeds bound={} + 3*{}",
                    r.n, r.param, r.estimate, r.bound_value, r.std_err
                ));
            }
            vec![
                Cell::Int(r.n as u64),
                Cell::Float(r.param),
                Cell::Float(r.estimate),
                Cell::Float(r.std_err),
                Cell::Float(r.bound_value),
                Cell::Bool(holds),
            ]
        })
        .collect();
    emit(&a.output, &["n", "theta", "empirical", "std_err", "bound", "holds"], rows, results)?;
    violation_if(violations)
}

fn concentration(a: ConcentrationArgs) -> Result<(), CliError> {
    let cfg = base_config(a.run.seed, a.trials, a.n, Vec::new(), a.n0, a.kappa);
    let points = in_pool(a.run.threads, || run_concentration(&cfg, a.epsilon))??;
    let mut violations = Vec::new();
    let rows = points
        .iter()
        .map(|p| {
            if p.exceed_prob > p.chernoff_sum.min(1.0) + 3.0 * p.exceed_std_err {
                violations.push(format!(
                    "n={} P(|r-1|>{})={} exceeds {} + 3*{}",
                    p.n, p.epsilon, p.exceed_prob, p.chernoff_sum, p.exceed_std_err
                ));
            }
            vec![
                Cell::Int(p.n as u64),
                Cell::Float(p.epsilon),
                Cell::Float(p.exceed_prob),
                Cell::Float(p.exceed_std_err),
                Cell::Float(p.chernoff_sum),
                Cell::Float(p.mean),
                Cell::Float(p.mean_std_err),
                Cell::Float(p.variance),
                Cell::Float(p.variance_std_err),
                Cell::Float(p.variance_target),
            ]
        })
        .collect();
    let results = points.iter().flat_map(|p| p.to_results()).collect();
    let header = [
        "n",
        "epsilon",
        "exceed_prob",
        "exceed_std_err",
        "chernoff_sum",
        "mean",
        "mean_std_err",
        "variance",
        "variance_std_err",
        "variance_target",
    ];
    emit(&a.output, &header, rows, results)?;
    violation_if(violations)
}

fn sd_complexity(a: SdComplexityArgs) -> Result<(), CliError> {
    let mut cfg = base_config(a.run.seed, a.trials, a.n, Vec::new(), a.n0, a.kappa);
    cfg.alpha = a.alpha;
    cfg.codebook = Codebook::new(a.tau, a.l, 1)?.with_enumeration_cap(a.cap);
    let points = in_pool(a.run.threads, || run_sd_complexity(&cfg))??;
    let mut violations = Vec::new();
    let rows = points
        .iter()
        .map(|p| {
            if !p.pathwise_csd_ge_nsc {
                violations.push(format!("n={} a trial had C_SD < N_SC", p.n));
            }
            let levels = p.mean_level_counts.iter().map(|v| crate::emit::fmt_sig(*v)).collect::<Vec<_>>().join(" ");
            vec![
                Cell::Int(p.n as u64),
                Cell::Int(p.m as u64),
                Cell::Float(p.alpha),
                Cell::Float(p.mean_csd),
                Cell::Float(p.csd_std_err),
                Cell::Float(p.mean_nsc),
                Cell::Float(p.nsc_std_err),
                Cell::Float(p.found_rate),
                Cell::Float(p.found_std_err),
                Cell::Text(levels),
                Cell::Float(p.log_bound),
                Cell::Float(p.log_bound_complex),
                Cell::Float(p.log_bound_jalden),
                Cell::Bool(p.pathwise_csd_ge_nsc),
            ]
        })
        .collect();
    let results = points.iter().flat_map(|p| p.to_results()).collect();
    let header = [
        "n",
        "m",
        "alpha",
        "mean_csd",
        "csd_std_err",
        "mean_nsc",
        "nsc_std_err",
        "found_rate",
        "found_std_err",
        "mean_level_counts",
        "log_bound",
        "log_bound_complex",
        "log_bound_fixed_radius",
        "pathwise_csd_ge_nsc",
    ];
    emit(&a.output, &header, rows, results)?;
    violation_if(violations)
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` or `-i`.
pub fn parse_gauss(s: &str) -> Result<GaussInt, CliError> {
    let bad = || CliError::Usage(format!("'{s}' is not a Gaussian integer (expected e.g. 1+1i)"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().map(|re| GaussInt::new(re, 0)).map_err(|_| bad());
    };
    let split = body.rfind(['+', '-']).filter(|&p| p > 0);
    let (re, im) = match split {
        Some(p) => (body[..p].parse::<i64>().map_err(|_| bad())?, &body[p..]),
        None => (0, body),
    };
    let im = match im {
        "" | "+" => 1,
        "-" => -1,
        other => other.parse::<i64>().map_err(|_| bad())?,
    };
    Ok(GaussInt::new(re, im))
}

pub fn fmt_gauss(g: GaussInt) -> String {
    if g.im < 0 {
        format!("{}-{}i", g.re, -g.im)
    } else {
        format!("{}+{}i", g.re, g.im)
    }
}

fn pep(a: PepArgs) -> Result<(), CliError> {
    let delta = a.delta_x.iter().map(|s| parse_gauss(s)).collect::<Result<Vec<_>, _>>()?;
    let cfg = base_config(a.run.seed, a.trials, a.n, a.theta, a.n0, a.kappa);
    let report = in_pool(a.run.threads, || run_pep(&cfg, &delta))??;
    let mut rows: Vec<Vec<Cell>> = report
        .points
        .iter()
        .map(|p| {
            vec![
                Cell::Text("pep".into()),
                Cell::Int(p.n as u64),
                Cell::Empty,
                Cell::Float(p.pep),
                Cell::Float(p.std_err),
                Cell::Float(p.asymptotic),
                Cell::Float(p.abs_gap),
                Cell::Empty,
            ]
        })
        .collect();
    let mut violations = Vec::new();
    for t in &report.tails {
        if !t.holds {
            violations.push(format!(
                "n={} theta={} frequency={} exceeds bound={} + 3*{}",
                t.n, t.theta, t.frequency, t.bound, t.std_err
            ));
        }
        rows.push(vec![
            Cell::Text("tail".into()),
            Cell::Int(t.n as u64),
            Cell::Float(t.theta),
            Cell::Float(t.frequency),
            Cell::Float(t.std_err),
            Cell::Float(t.bound),
            Cell::Empty,
            Cell::Bool(t.holds),
        ]);
    }
    let header = ["kind", "n", "theta", "estimate", "std_err", "reference", "abs_gap", "holds"];
    emit(&a.output, &header, rows, report.to_results())?;
    violation_if(violations)
}

fn inflation(a: InflationArgs) -> Result<(), CliError> {
    let codebook = Codebook::new(a.tau, a.l, 1)?;
    let rate = a.rate.unwrap_or(2.0 * (a.l as f64).log2());
    let ex = a.ex.unwrap_or_else(|| codebook.power_ex());
    let first = *a.m.first().ok_or_else(|| CliError::Usage("m list must be non-empty".into()))?;
    let sp = SpherePackingInputs::new(first, ex, a.alpha_prime, rate, a.alpha, a.kappa, a.n0)?;
    let report = run_codebook_inflation(&a.m, &sp, &codebook)?;
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.m as u64),
                Cell::Float(r.radius),
                Cell::Float(r.threshold),
                Cell::Float(r.codebook_dmin),
                Cell::Bool(r.codebook_ok),
                Cell::Float(r.sphere_packing_dmin),
                Cell::Bool(r.sphere_packing_ok),
            ]
        })
        .collect();
    let header =
        ["m", "radius", "threshold", "codebook_dmin", "codebook_ok", "sphere_packing_dmin", "sphere_packing_ok"];
    emit(&a.output, &header, rows, report.to_results())?;
    eprintln!(
        "summary: codebook_inflatable={} sphere_packing_inflatable={} undetermined={}",
        report.codebook_inflatable, report.sphere_packing_inflatable, report.undetermined
    );
    Ok(())
}

#[derive(Serialize)]
struct DecodeOutput {
    n: usize,
    m: usize,
    rho_sq: f64,
    transmitted: Vec<GaussInt>,
    #[serde(flatten)]
    trace: DecodeTrace,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

fn decode(a: DecodeArgs) -> Result<(), CliError> {
    let m = a.m.unwrap_or((a.n / 2).max(1));
    let params = LatticeParams::new(a.n, m)?;
    let codebook = Codebook::new(a.tau, a.l, m)?;
    let noise = NoiseModel::new(a.n0)?;
    let constraint = match a.rho_sq {
        Some(r) => SphereConstraint::new(r)?,
        None => SphereConstraint::from_alpha(a.alpha, a.n, a.n0)?,
    };
    let mut rng = SeededRng::new(a.seed, 0);
    let (problem, transmitted) = sample_problem(&mut rng, params, &codebook, noise, constraint)?;
    let trace = sphere_decode(&problem)?;
    let oracle_agrees = if a.oracle { Some(brute_force_oracle(&problem)? == trace) } else { None };

    let bytes = match a.output.format {
        Format::Json => json_bytes(&DecodeOutput {
            n: a.n,
            m,
            rho_sq: constraint.rho_sq(),
            transmitted: transmitted.clone(),
            trace: trace.clone(),
            oracle_agrees,
        })?,
        Format::Csv => {
            let join = |xs: &[GaussInt]| xs.iter().map(|g| fmt_gauss(*g)).collect::<Vec<_>>().join(" ");
            let header = [
                "n",
                "m",
                "rho_sq",
                "found_in_sphere",
                "min_metric",
                "total_visits",
                "leaf_count",
                "level_counts",
                "argmin",
                "transmitted",
                "oracle_agrees",
            ];
            let row = vec![
                Cell::Int(a.n as u64),
                Cell::Int(m as u64),
                Cell::Float(constraint.rho_sq()),
                Cell::Bool(trace.found_in_sphere),
                trace.min_metric.map_or(Cell::Empty, Cell::Float),
                Cell::Int(trace.total_visits),
                Cell::Int(trace.leaf_count),
                Cell::Text(trace.level_counts.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
                Cell::Text(trace.argmin.as_deref().map(join).unwrap_or_default()),
                Cell::Text(join(&transmitted)),
                oracle_agrees.map_or(Cell::Empty, Cell::Bool),
            ];
            csv_bytes(&header, &[row])?
        }
    };
    write_output(a.output.out.as_deref(), &bytes)?;
    if oracle_agrees == Some(false) {
        return Err(CliError::Violation("sphere decoder and exhaustive oracle disagree".into()));
    }
    Ok(())
}
