use std::fs;
use std::path::{Path, PathBuf};

use tlqe::bayes::{
    credible_interval, posterior_alpha, s_statistic, small_sample_warning, PriorSpec,
};
use tlqe::sampling::{sample, sample_with_uniforms, GENERATOR_NAME};
use tlqe::simstudy::{run_simulation, SimConfig, SimReport};
use tlqe::{
    fit_tle, fit_tlqe, LifetimeDistribution, Model, ModelKind, QExponential, SampleRequest, Tle,
    Tlqe,
};

use crate::input::{read_dataset, read_uniforms};
use crate::output::{
    num, BaseSource, BayesResults, CompareResults, CurvesResults, RankedFit, Results,
    SampleResults, SimulateResults, BIC_NOTE, CURVE_COLUMNS,
};
use crate::{CliError, Command, Dist, Executed};

/// Largest number of rows `curves` will write.
const MAX_GRID_POINTS: usize = 10_000_000;

impl From<Dist> for ModelKind {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Tlqe => ModelKind::Tlqe,
            Dist::Tle => ModelKind::Tle,
        }
    }
}

pub fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: '{}' is not a number", t.trim())))
        })
        .collect()
}

fn expect_len(v: &[f64], n: usize, what: &str, shape: &str) -> Result<(), CliError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{what} expects {n} comma-separated values ({shape}), got {}",
            v.len()
        )))
    }
}

pub fn build_model(dist: Dist, params: &str) -> Result<Model<f64>, CliError> {
    let v = parse_list(params, "--params")?;
    Ok(match dist {
        Dist::Tlqe => {
            expect_len(&v, 3, "--params for tlqe", "alpha,lambda,q")?;
            Tlqe::new(v[0], v[1], v[2])?.into()
        }
        Dist::Tle => {
            expect_len(&v, 2, "--params for tle", "alpha,lambda")?;
            Tle::new(v[0], v[1])?.into()
        }
    })
}

fn exit_for(converged: bool) -> i32 {
    if converged {
        0
    } else {
        crate::EXIT_FIT_FAILURE
    }
}

pub fn execute(command: &Command) -> Result<Executed, CliError> {
    match command {
        Command::Fit { data, dist, init } => fit(data, *dist, init.as_deref()),
        Command::Compare { data, dists } => compare(data, dists),
        Command::Sample {
            dist,
            params,
            n,
            seed,
            uniforms,
        } => sample_cmd(*dist, params, *n, *seed, uniforms.as_deref()),
        Command::Bayes {
            data,
            prior,
            base,
            plugin_mle,
            level,
        } => bayes(data, prior, base.as_deref(), *plugin_mle, *level),
        Command::Simulate {
            params,
            sizes,
            reps,
            seed,
            out,
        } => simulate(params, sizes, *reps, *seed, out),
        Command::Curves {
            dist,
            params,
            grid,
            out,
        } => curves(*dist, params, grid, out),
    }
}

fn fit(data: &Path, dist: Dist, init: Option<&str>) -> Result<Executed, CliError> {
    let (d, digest) = read_dataset(data)?;
    let result = match dist {
        Dist::Tlqe => {
            let init = match init {
                Some(s) => {
                    let v = parse_list(s, "--init")?;
                    expect_len(&v, 3, "--init for tlqe", "alpha,lambda,q")?;
                    Some(Tlqe::new(v[0], v[1], v[2])?)
                }
                None => None,
            };
            fit_tlqe(&d, init)?
        }
        Dist::Tle => {
            let init = match init {
                Some(s) => {
                    let v = parse_list(s, "--init")?;
                    expect_len(&v, 2, "--init for tle", "alpha,lambda")?;
                    Some(Tle::new(v[0], v[1])?)
                }
                None => None,
            };
            fit_tle(&d, init)?
        }
    };
    let mut warnings = Vec::new();
    if !result.converged {
        warnings.push(format!(
            "{} fit did not converge (gradient sup-norm {})",
            result.model.label(),
            num(result.grad_sup_norm)
        ));
    }
    Ok(Executed {
        exit_code: exit_for(result.converged),
        digest: Some(digest),
        warnings,
        report_json: None,
        results: Results::Fit(result),
    })
}

fn compare(data: &Path, dists: &[Dist]) -> Result<Executed, CliError> {
    let mut warnings = Vec::new();
    let mut kinds: Vec<ModelKind> = Vec::new();
    for &d in dists {
        let kind = ModelKind::from(d);
        if kinds.contains(&kind) {
            let w = format!(
                "model '{}' listed more than once; duplicates ignored",
                kind.name()
            );
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        } else {
            kinds.push(kind);
        }
    }
    if kinds.len() < 2 {
        return Err(CliError::Usage(
            "compare needs at least two distinct models (valid choices: tlqe, tle)".into(),
        ));
    }
    let (d, digest) = read_dataset(data)?;
    let mut fits = kinds
        .iter()
        .map(|&k| tlqe::fit::fit(k, &d))
        .collect::<Result<Vec<_>, _>>()?;
    // Stable sort keeps the command-line order for equal AIC.
    fits.sort_by(|a, b| a.aic.total_cmp(&b.aic));
    let best = fits[0].aic;
    let converged = fits.iter().all(|f| f.converged);
    for f in fits.iter().filter(|f| !f.converged) {
        warnings.push(format!("{} fit did not converge", f.model.label()));
    }
    let ranking = fits
        .into_iter()
        .enumerate()
        .map(|(i, fit)| RankedFit {
            rank: i + 1,
            winner: i == 0,
            delta_aic: fit.aic - best,
            fit,
        })
        .collect();
    Ok(Executed {
        exit_code: exit_for(converged),
        digest: Some(digest),
        warnings,
        report_json: None,
        results: Results::Compare(CompareResults {
            ranking,
            bic_note: BIC_NOTE,
        }),
    })
}

fn sample_cmd(
    dist: Dist,
    params: &str,
    n: Option<u64>,
    seed: Option<u64>,
    uniforms: Option<&Path>,
) -> Result<Executed, CliError> {
    let model = build_model(dist, params)?;
    let (variates, source, digest, seed) = match uniforms {
        Some(path) => {
            let (us, digest) = read_uniforms(path)?;
            let xs = sample_with_uniforms(&model, &us)?;
            (xs, "uniforms-file".to_string(), Some(digest), None)
        }
        None => {
            let (Some(n), Some(seed)) = (n, seed) else {
                return Err(CliError::Usage(
                    "sample needs -n and --seed, or --uniforms".into(),
                ));
            };
            let n =
                usize::try_from(n).map_err(|_| CliError::Usage(format!("-n {n} is too large")))?;
            let req =
                SampleRequest::new(model, n, seed).map_err(|e| CliError::Usage(e.to_string()))?;
            (sample(&req)?, GENERATOR_NAME.to_string(), None, Some(seed))
        }
    };
    Ok(Executed {
        exit_code: 0,
        digest,
        warnings: Vec::new(),
        report_json: None,
        results: Results::Sample(SampleResults {
            model,
            source,
            seed,
            n: variates.len(),
            variates,
        }),
    })
}

pub fn parse_prior(spec: &str) -> Result<PriorSpec<f64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--prior '{spec}' not understood; expected uniform, jeffreys:m or gamma:a,p"
        ))
    };
    let prior = match spec.split_once(':') {
        None if spec == "uniform" => PriorSpec::Uniform,
        Some(("jeffreys", m)) => PriorSpec::ExtendedJeffreys {
            m: m.trim().parse().map_err(|_| bad())?,
        },
        Some(("gamma", rest)) => {
            let v = parse_list(rest, "--prior gamma")?;
            if v.len() != 2 {
                return Err(bad());
            }
            PriorSpec::Gamma { a: v[0], p: v[1] }
        }
        _ => return Err(bad()),
    };
    prior.validate()?;
    Ok(prior)
}

fn bayes(
    data: &Path,
    prior: &str,
    base: Option<&str>,
    plugin_mle: bool,
    level: f64,
) -> Result<Executed, CliError> {
    let prior = parse_prior(prior)?;
    if !(level > 0.0 && level < 1.0) {
        return Err(CliError::Usage(format!(
            "--level must lie in (0, 1), got {level}"
        )));
    }
    let (d, digest) = read_dataset(data)?;
    let mut warnings = Vec::new();
    let mut exit_code = 0;
    let (lambda, q, source, mle) = match (base, plugin_mle) {
        (Some(s), false) => {
            let v = parse_list(s, "--base")?;
            expect_len(&v, 2, "--base", "lambda,q")?;
            (v[0], v[1], BaseSource::Given, None)
        }
        (None, true) => {
            let f = fit_tlqe(&d, None)?;
            if !f.converged {
                warnings.push("TLqE fit for the plug-in base did not converge".into());
                exit_code = crate::EXIT_FIT_FAILURE;
            }
            let q = f.estimates.q.expect("TLqE fit has q");
            (f.estimates.lambda, q, BaseSource::PluginMle, Some(f))
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --base lambda,q or --plugin-mle".into(),
            ))
        }
    };
    let parent = QExponential::new(lambda, q)?;
    let s = s_statistic(&d, &parent)?;
    let posterior = posterior_alpha(s, d.len(), prior)?;
    let interval = credible_interval(&posterior, level)?;
    warnings.extend(small_sample_warning(d.len()));
    if interval.truncated {
        warnings.push("credible interval truncated at 0".into());
    }
    Ok(Executed {
        exit_code,
        digest: Some(digest),
        warnings,
        report_json: None,
        results: Results::Bayes(BayesResults {
            prior,
            lambda,
            q,
            base_source: source,
            posterior,
            interval,
            mle,
        }),
    })
}

/// `stem.csv` and `stem.json`; a trailing `.csv` or `.json` on `out` is dropped.
pub fn report_paths(out: &Path) -> (PathBuf, PathBuf) {
    let stem = match out.extension().and_then(|e| e.to_str()) {
        Some("csv" | "json") => out.with_extension(""),
        _ => out.to_path_buf(),
    };
    let with = |ext: &str| {
        let mut s = stem.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    (with(".csv"), with(".json"))
}

pub fn simulation_csv(report: &SimReport) -> String {
    let mut out =
        String::from("sample_size,parameter,truth,mean,bias,variance,mse,converged,failures\n");
    for c in &report.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            c.sample_size,
            c.parameter,
            num(c.truth),
            num(c.mean),
            num(c.bias),
            num(c.variance),
            num(c.mse),
            c.converged,
            c.failures
        ));
    }
    out
}

fn simulate(
    params: &str,
    sizes: &[usize],
    reps: usize,
    seed: u64,
    out: &Path,
) -> Result<Executed, CliError> {
    let v = parse_list(params, "--params")?;
    expect_len(&v, 3, "--params", "alpha,lambda,q")?;
    let cfg = SimConfig {
        true_params: Tlqe::new(v[0], v[1], v[2])?,
        sample_sizes: sizes.to_vec(),
        replications: reps,
        seed,
    };
    let report = run_simulation(&cfg)?;
    let (csv_path, json_path) = report_paths(out);
    write_file(&csv_path, &simulation_csv(&report))?;
    Ok(Executed {
        exit_code: 0,
        digest: None,
        warnings: Vec::new(),
        report_json: Some(json_path.clone()),
        results: Results::Simulate(SimulateResults {
            csv_path: csv_path.display().to_string(),
            json_path: json_path.display().to_string(),
            report,
        }),
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Grid `start, start + step, …` up to and including `stop`.
pub fn parse_grid(spec: &str) -> Result<(f64, f64, f64, Vec<f64>), CliError> {
    let bad = |why: &str| CliError::Usage(format!("--grid '{spec}': {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected START:STOP:STEP"));
    }
    let mut v = [0.0f64; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| bad(&format!("'{p}' is not a number")))?;
    }
    let [start, stop, step] = v;
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if start < 0.0 {
        return Err(bad("START must be ≥ 0"));
    }
    if step <= 0.0 {
        return Err(bad("STEP must be > 0"));
    }
    if stop < start {
        return Err(bad("STOP must be ≥ START"));
    }
    let last = ((stop - start) / step + 1e-9).floor();
    if last >= MAX_GRID_POINTS as f64 {
        return Err(bad(&format!("more than {MAX_GRID_POINTS} points")));
    }
    let xs = (0..=last as usize)
        .map(|i| start + step * i as f64)
        .collect();
    Ok((start, stop, step, xs))
}

fn curves(dist: Dist, params: &str, grid: &str, out: &Path) -> Result<Executed, CliError> {
    let model = build_model(dist, params)?;
    let (start, stop, step, xs) = parse_grid(grid)?;
    let x_max = model.support_upper();
    let top = *xs.last().expect("grid is non-empty");
    if top >= x_max {
        return Err(CliError::Usage(format!(
            "grid reaches {} but the support ends at x_max = {}; keep STOP below x_max",
            num(top),
            num(x_max)
        )));
    }
    let mut csv = CURVE_COLUMNS.join(",");
    csv.push('\n');
    for &x in &xs {
        let row = [
            x,
            model.pdf(x),
            model.cdf(x),
            model.sf(x),
            model.hazard(x),
            model.cum_hazard(x),
        ];
        csv.push_str(&row.iter().map(|&v| num(v)).collect::<Vec<_>>().join(","));
        csv.push('\n');
    }
    write_file(out, &csv)?;
    Ok(Executed {
        exit_code: 0,
        digest: None,
        warnings: Vec::new(),
        report_json: None,
        results: Results::Curves(CurvesResults {
            model,
            path: out.display().to_string(),
            columns: CURVE_COLUMNS,
            rows: xs.len(),
            start,
            stop,
            step,
        }),
    })
}
