//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::time::{Duration, Instant};

use tlqe::bayes::{posterior_alpha, s_statistic, PriorSpec};
use tlqe::likelihood::{alpha_given_base_tlqe, loglik_tlqe, score_tlqe};
use tlqe::sampling::{sample, sample_with_uniforms, uniforms};
use tlqe::simstudy::{run_simulation, SimConfig, PARAMETERS};
use tlqe::{
    fit_tle, fit_tlqe, Dataset, LifetimeDistribution, Model, QExponential, SampleRequest, Tle, Tlqe,
};
use tlqe_testkit::{central_diff, integrate_positive, interior_grid, ks_statistic};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fmt_secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Inverse cdf written out directly from the two quantile formulas.
fn naive_quantile(u: f64, a: f64, l: f64, q: f64) -> f64 {
    let t = 1.0 - (1.0 - u.powf(1.0 / a)).sqrt();
    (1.0 - (1.0 - t).powf((1.0 - q) / (2.0 - q))) / ((1.0 - q) * l)
}

fn variate_reproduction() -> Outcome {
    let us = [0.7235, 0.9690, 0.5374, 0.8221, 0.1961];
    let reference = [0.1777, 1.1137, 0.0567, 0.3201, 0.0017];
    let model: Model<f64> = Tlqe::new(0.3, 1.5, 1.2).unwrap().into();
    let xs = sample_with_uniforms(&model, &us).unwrap();
    let mut worst_ref = 0.0f64;
    let mut worst_exact = 0.0f64;
    for i in 0..5 {
        worst_ref = worst_ref.max((xs[i] - reference[i]).abs());
        let exact = naive_quantile(us[i], 0.3, 1.5, 1.2);
        worst_exact = worst_exact.max((xs[i] - exact).abs() / exact);
    }
    outcome(
        worst_ref <= 2e-3 && worst_exact < 1e-12,
        format!(
            "variates {xs:.4?}; max |x − printed| = {worst_ref:.2e} (≤ 2e-3), \
             max rel. gap to direct formula = {worst_exact:.1e}"
        ),
    )
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let d = Dataset::ball_bearing();
    let tle = fit_tle(&d, None).unwrap();
    let tlqe = fit_tlqe(&d, None).unwrap();
    let elapsed = start.elapsed();
    let within = |v: f64, target: f64| (v - target).abs() <= 0.1 * target;
    let e = tlqe.estimates;
    let q = e.q.unwrap();
    let checks = [
        ("TLE α", within(tle.estimates.alpha, 5.2827)),
        ("TLE λ", within(tle.estimates.lambda, 0.0161)),
        ("TLE AIC", (tle.aic - 229.9559).abs() <= 1.0),
        ("TLqE α", within(e.alpha, 2.4037)),
        ("TLqE λ", within(e.lambda, 0.0118)),
        ("TLqE q", (q - 1.1710).abs() <= 0.05),
        ("TLqE AIC", (tlqe.aic - 225.1589).abs() <= 1.0),
        ("AIC order", tlqe.aic < tle.aic),
        ("runtime", elapsed < Duration::from_secs(10)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        format!(
            "TLE α={:.4} λ={:.5} AIC={:.4}; TLqE α={:.4} λ={:.5} q={:.4} AIC={:.4}; {}; failing: {}",
            tle.estimates.alpha,
            tle.estimates.lambda,
            tle.aic,
            e.alpha,
            e.lambda,
            q,
            tlqe.aic,
            fmt_secs(elapsed),
            if failed.is_empty() { "none".into() } else { failed.join(", ") }
        ),
    )
}

fn normalization() -> Outcome {
    let mut worst = 0.0f64;
    for &a in &[0.5, 1.0, 2.0] {
        for &q in &[-0.5, 0.5, 0.9, 1.1, 1.5, 1.9] {
            let p = Tlqe::new(a, 1.0, q).unwrap();
            let total = integrate_positive(|x| p.pdf(x), p.x_max(), 1e-10);
            worst = worst.max((total - 1.0).abs());
        }
    }
    for &a in &[0.5, 1.0, 5.2827] {
        let p = Tle::new(a, 1.0).unwrap();
        let total = integrate_positive(|x| p.pdf(x), f64::INFINITY, 1e-10);
        worst = worst.max((total - 1.0).abs());
    }
    outcome(
        worst < 1e-6,
        format!("21 densities, max |∫f − 1| = {worst:.2e} (< 1e-6)"),
    )
}

fn quantile_round_trip() -> Outcome {
    let sets = [
        (0.3, 1.5, 1.2),
        (2.4037, 0.0118, 1.171),
        (0.5, 1.0, -0.5),
        (2.0, 0.5, 0.5),
        (1.0, 2.0, 0.9),
        (5.0, 0.1, 1.9),
        (1.1, 0.1, 0.9),
        (0.8, 3.0, 1.5),
        (3.0, 0.02, 0.1),
    ];
    let mut worst = 0.0f64;
    for &(a, l, q) in &sets {
        let p = Tlqe::new(a, l, q).unwrap();
        for u in interior_grid(0.0, 1.0, 999) {
            worst = worst.max((p.cdf(p.quantile(u).unwrap()) - u).abs());
        }
    }
    outcome(
        worst < 1e-10,
        format!("9 sets × 999 points, max |F(Q(u)) − u| = {worst:.2e} (< 1e-10)"),
    )
}

fn limit_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for &(a, l) in &[(0.5, 0.3), (2.0, 0.1)] {
        let tle = Tle::new(a, l).unwrap();
        let top = tle.quantile(1.0 - 1e-9).unwrap();
        for &q in &[1.0 - 1e-6, 1.0 + 1e-6] {
            let p = Tlqe::new(a, l, q).unwrap();
            for x in interior_grid(0.0, top, 1000) {
                worst = worst.max((p.cdf(x) - tle.cdf(x)).abs());
            }
        }
    }
    outcome(
        worst < 1e-4,
        format!("q = 1 ± 1e-6, max |F_TLqE − F_TLE| = {worst:.2e} (< 1e-4)"),
    )
}

fn gradient_correctness() -> Outcome {
    let draw = |p: Tlqe<f64>, n, seed| {
        Dataset::new(sample(&SampleRequest::new(p, n, seed).unwrap()).unwrap()).unwrap()
    };
    let datasets = [
        Dataset::ball_bearing(),
        draw(Tlqe::new(2.0, 0.5, 1.3).unwrap(), 60, 11),
        draw(Tlqe::new(0.7, 0.2, 0.6).unwrap(), 40, 12),
    ];
    let mut checked = 0;
    let mut bad = 0;
    let mut worst_rel = 0.0f64;
    for (k, d) in datasets.iter().enumerate() {
        let u = uniforms(500 + k as u64, 0, 60);
        for i in 0..20 {
            let alpha = 0.3 + 5.7 * u[3 * i];
            let q = -0.5 + 2.4 * u[3 * i + 1];
            let mut lambda = (0.2 + 2.8 * u[3 * i + 2]) / d.mean();
            if q < 1.0 {
                lambda = lambda.min(0.95 / ((1.0 - q) * d.max()));
            }
            let s = score_tlqe(&Tlqe::new(alpha, lambda, q).unwrap(), d).unwrap();
            let ll = |a: f64, l: f64, q: f64| loglik_tlqe(&Tlqe::new(a, l, q).unwrap(), d);
            let fd = [
                central_diff(|v| ll(v, lambda, q), alpha, 1e-5 * alpha),
                central_diff(|v| ll(alpha, v, q), lambda, 1e-5 * lambda),
                central_diff(|v| ll(alpha, lambda, v), q, 1e-5),
            ];
            for c in 0..3 {
                checked += 1;
                let diff = (s[c] - fd[c]).abs();
                let rel = diff / fd[c].abs().max(f64::MIN_POSITIVE);
                if !(diff < 1e-8 || rel < 1e-5) {
                    bad += 1;
                }
                if diff >= 1e-8 {
                    worst_rel = worst_rel.max(rel);
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!(
            "{checked} score components, {bad} outside tolerance, worst rel. gap {worst_rel:.1e}"
        ),
    )
}

fn sampler_correctness() -> Outcome {
    let models: [Model<f64>; 6] = [
        Tlqe::new(2.0, 0.5, 1.3).unwrap().into(),
        Tlqe::new(0.3, 1.5, 1.2).unwrap().into(),
        Tlqe::new(1.1, 0.1, 0.9).unwrap().into(),
        Tlqe::new(4.0, 1.0, -0.5).unwrap().into(),
        Tlqe::new(0.7, 2.0, 1.8).unwrap().into(),
        Tle::new(5.2827, 0.0161).unwrap().into(),
    ];
    let n = 10_000;
    let critical = 1.63 / (n as f64).sqrt();
    let mut worst = 0.0f64;
    let mut deterministic = true;
    for (k, m) in models.iter().enumerate() {
        let req = SampleRequest::new(*m, n, 2024 + k as u64).unwrap();
        let xs = sample(&req).unwrap();
        deterministic &= xs == sample(&req).unwrap();
        worst = worst.max(ks_statistic(&xs, |x| m.cdf(x)));
    }
    outcome(
        worst < critical && deterministic,
        format!("max KS D = {worst:.5} (< {critical:.5}), repeat draws identical: {deterministic}"),
    )
}

fn bayesian_closed_forms() -> Outcome {
    let d = Dataset::ball_bearing();
    let (lambda, q) = (0.0118, 1.171);
    let s = s_statistic(&d, &QExponential::new(lambda, q).unwrap()).unwrap();
    let n = d.len() as f64;
    let u = posterior_alpha(s, d.len(), PriorSpec::Uniform).unwrap();
    let exact = u.mean == n / s && u.variance == n / (s * s);
    let mut nest = 0.0f64;
    for prior in [
        PriorSpec::ExtendedJeffreys { m: 1e-12 },
        PriorSpec::Gamma { a: 1e-12, p: 1.0 },
    ] {
        let p = posterior_alpha(s, d.len(), prior).unwrap();
        nest = nest
            .max((p.mean - u.mean).abs() / u.mean)
            .max((p.variance - u.variance).abs() / u.variance);
    }
    let mle = alpha_given_base_tlqe(lambda, q, &d).unwrap();
    let mle_gap = (u.mean - mle).abs() / mle;
    outcome(
        exact && nest < 1e-9 && mle_gap < 1e-10,
        format!(
            "uniform exact: {exact}; nesting rel. gap {nest:.1e} (< 1e-9); \
             mean vs conditional MLE {mle_gap:.1e} (< 1e-10)"
        ),
    )
}

fn simulation_consistency() -> Outcome {
    let cfg = SimConfig::default();
    let start = Instant::now();
    let first = run_simulation(&cfg);
    let elapsed = start.elapsed();
    let first = match first {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("simulation failed: {e}")),
    };
    let second = run_simulation(&cfg).unwrap();
    let pooled = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| run_simulation(&cfg).unwrap());
    let bytes = |r| serde_json::to_string(r).unwrap();
    let identical = bytes(&first) == bytes(&second) && bytes(&first) == bytes(&pooled);
    let mut shrinking = true;
    let mut parts = Vec::new();
    for name in PARAMETERS {
        let small = first.cell(100, name).unwrap().mse;
        let large = first.cell(500, name).unwrap().mse;
        shrinking &= large < small;
        parts.push(format!("{name} {small:.4}→{large:.4}"));
    }
    outcome(
        shrinking && identical && elapsed < Duration::from_secs(300),
        format!(
            "MSE n=100→500: {}; identical across runs/pools: {identical}; {}",
            parts.join(", "),
            fmt_secs(elapsed)
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked variates", variate_reproduction),
        ("ball-bearing table", table_reproduction),
        ("normalization", normalization),
        ("quantile round trip", quantile_round_trip),
        ("q → 1 limit", limit_consistency),
        ("score vs finite differences", gradient_correctness),
        ("sampler KS", sampler_correctness),
        ("Bayesian closed forms", bayesian_closed_forms),
        ("simulation consistency", simulation_consistency),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {}: {} ({name}) {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
