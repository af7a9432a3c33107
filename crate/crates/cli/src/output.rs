//! The JSON envelope every command emits, and the per-command result bodies.

use serde::Serialize;
use tlqe::bayes::{CredibleInterval, PosteriorApprox, PriorSpec};
use tlqe::simstudy::SimReport;
use tlqe::{FitResult, Model};

use crate::input::InputDigest;

pub const TOOL: &str = "tlqe";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub tool: &'static str,
    pub version: &'static str,
    /// Arguments as given, without the program name.
    pub command: Vec<String>,
    pub input_digest: Option<InputDigest>,
    pub warnings: Vec<String>,
    pub results: Results,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Results {
    Fit(FitResult),
    Compare(CompareResults),
    Sample(SampleResults),
    Bayes(BayesResults),
    Simulate(SimulateResults),
    Curves(CurvesResults),
}

#[derive(Debug, Clone, Serialize)]
pub struct RankedFit {
    pub rank: usize,
    pub winner: bool,
    pub delta_aic: f64,
    pub fit: FitResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareResults {
    pub ranking: Vec<RankedFit>,
    pub bic_note: &'static str,
}

pub const BIC_NOTE: &str = "BIC is computed as k ln n - 2 loglik. Published BIC values for \
these models need not match: the original comparison table's BIC column is inconsistent with \
its AIC column.";

#[derive(Debug, Clone, Serialize)]
pub struct SampleResults {
    pub model: Model<f64>,
    /// `"uniforms-file"` when the uniforms were supplied, else the generator name.
    pub source: String,
    pub seed: Option<u64>,
    pub n: usize,
    pub variates: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseSource {
    Given,
    PluginMle,
}

#[derive(Debug, Clone, Serialize)]
pub struct BayesResults {
    pub prior: PriorSpec<f64>,
    pub lambda: f64,
    pub q: f64,
    pub base_source: BaseSource,
    pub posterior: PosteriorApprox<f64>,
    pub interval: CredibleInterval<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mle: Option<FitResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateResults {
    pub csv_path: String,
    pub json_path: String,
    pub report: SimReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvesResults {
    pub model: Model<f64>,
    pub path: String,
    pub columns: [&'static str; 6],
    pub rows: usize,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

pub const CURVE_COLUMNS: [&str; 6] = ["x", "pdf", "cdf", "survival", "hazard", "cum_hazard"];

impl RunOutput {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output is serialisable");
        s.push('\n');
        s
    }

    /// Plain-text rendering. Numbers use the shortest representation that
    /// reads back to the same `f64`, as in the JSON form.
    pub fn to_text(&self) -> String {
        match &self.results {
            Results::Fit(f) => fit_text(f),
            Results::Compare(c) => compare_text(c),
            Results::Sample(s) => s.variates.iter().map(|&v| num(v) + "\n").collect(),
            Results::Bayes(b) => bayes_text(b),
            Results::Simulate(s) => simulate_text(s),
            Results::Curves(c) => format!("wrote {} rows to {}\n", c.rows, c.path),
        }
    }
}

/// Shortest decimal form that parses back to the same value; switches to
/// exponent notation for very large and very small magnitudes.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

fn rows(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k:<20}{v}\n")).collect()
}

fn fit_text(f: &FitResult) -> String {
    let mut pairs = vec![
        ("model", f.model.label().to_string()),
        ("n", f.n.to_string()),
        ("alpha", num(f.estimates.alpha)),
        ("lambda", num(f.estimates.lambda)),
    ];
    if let Some(q) = f.estimates.q {
        pairs.push(("q", num(q)));
    }
    pairs.extend([
        ("loglik", num(f.loglik)),
        ("aic", num(f.aic)),
        ("bic", num(f.bic)),
        ("converged", f.converged.to_string()),
        ("iterations", f.iterations.to_string()),
        ("start_points_tried", f.start_points_tried.to_string()),
        ("grad_sup_norm", num(f.grad_sup_norm)),
    ]);
    rows(&pairs)
}

fn compare_text(c: &CompareResults) -> String {
    let mut out = String::from("rank,model,k,loglik,aic,bic,delta_aic,converged,winner\n");
    for r in &c.ranking {
        let f = &r.fit;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.rank,
            f.model.label(),
            f.model.n_params(),
            num(f.loglik),
            num(f.aic),
            num(f.bic),
            num(r.delta_aic),
            f.converged,
            if r.winner { "*" } else { "" }
        ));
    }
    out.push_str("* lowest AIC\n");
    out.push_str(&format!("note: {}\n", c.bic_note));
    out
}

fn bayes_text(b: &BayesResults) -> String {
    let prior = match b.prior {
        PriorSpec::Uniform => "uniform".to_string(),
        PriorSpec::ExtendedJeffreys { m } => format!("jeffreys:{}", num(m)),
        PriorSpec::Gamma { a, p } => format!("gamma:{},{}", num(a), num(p)),
    };
    let source = match b.base_source {
        BaseSource::Given => "given",
        BaseSource::PluginMle => "plugin-mle",
    };
    rows(&[
        ("prior", prior),
        ("base_source", source.to_string()),
        ("lambda", num(b.lambda)),
        ("q", num(b.q)),
        ("n", b.posterior.n.to_string()),
        ("s_statistic", num(b.posterior.s_statistic)),
        ("posterior_mean", num(b.posterior.mean)),
        ("posterior_variance", num(b.posterior.variance)),
        ("level", num(b.interval.level)),
        ("interval_lo", num(b.interval.lo)),
        ("interval_hi", num(b.interval.hi)),
        ("truncated", b.interval.truncated.to_string()),
    ])
}

fn simulate_text(s: &SimulateResults) -> String {
    let mut out = crate::commands::simulation_csv(&s.report);
    out.push_str(&format!("wrote {} and {}\n", s.csv_path, s.json_path));
    out
}
