//! Maximum-likelihood fitting.
//!
//! TLqE is fitted by BFGS in the unconstrained coordinates
//! `(ln α, ln λ, ln(2 − q))` from a small grid of starting points, because
//! the likelihood can have separate local maxima on either side of q = 1.
//! TLE is reduced to a one-dimensional root search on the profile score,
//! using the closed-form `α̂(λ)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::likelihood::{
    alpha_given_lambda_tle, information_criteria, loglik_tle, loglik_tlqe, score_tle, score_tlqe,
};
use crate::optim::{minimize, BfgsOptions};
use crate::sampling::Model;
use crate::{Dataset, Error, Result, Tle, Tlqe};

/// Gradient tolerance in the transformed coordinates.
pub const GRAD_TOL: f64 = 1e-6;
pub const MAX_ITER: usize = 500;

/// Relative gap below which two local optima are considered the same value.
const TIE_RTOL: f64 = 1e-10;

const START_ALPHAS: [f64; 3] = [0.5, 1.0, 3.0];
const START_QS: [f64; 4] = [0.5, 0.9, 1.1, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Tlqe,
    Tle,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Tlqe => "tlqe",
            ModelKind::Tle => "tle",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::Tlqe => "TLqE",
            ModelKind::Tle => "TLE",
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            ModelKind::Tlqe => 3,
            ModelKind::Tle => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub alpha: f64,
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelKind,
    pub estimates: Estimates,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub converged: bool,
    pub iterations: usize,
    pub n: usize,
    pub start_points_tried: usize,
    /// Sup-norm of the log-likelihood gradient in the fitting coordinates.
    pub grad_sup_norm: f64,
}

impl FitResult {
    #[allow(clippy::too_many_arguments)]
    fn new(
        model: ModelKind,
        estimates: Estimates,
        loglik: f64,
        n: usize,
        converged: bool,
        iterations: usize,
        start_points_tried: usize,
        grad_sup_norm: f64,
    ) -> Self {
        let (aic, bic) = information_criteria(loglik, model.n_params(), n);
        Self {
            model,
            estimates,
            loglik,
            aic,
            bic,
            converged,
            iterations,
            n,
            start_points_tried,
            grad_sup_norm,
        }
    }

    /// The fitted distribution.
    pub fn distribution(&self) -> Result<Model<f64>> {
        let e = &self.estimates;
        Ok(match (self.model, e.q) {
            (ModelKind::Tlqe, Some(q)) => Model::Tlqe(Tlqe::new(e.alpha, e.lambda, q)?),
            (ModelKind::Tle, _) => Model::Tle(Tle::new(e.alpha, e.lambda)?),
            (ModelKind::Tlqe, None) => {
                return Err(Error::InvalidParams("TLqE estimates without q".into()))
            }
        })
    }
}

fn to_theta(p: &Tlqe<f64>) -> [f64; 3] {
    [p.alpha().ln(), p.lambda().ln(), (2.0 - p.q()).ln()]
}

fn from_theta(theta: &[f64]) -> Result<Tlqe<f64>> {
    Tlqe::new(theta[0].exp(), theta[1].exp(), 2.0 - theta[2].exp())
}

/// Negative log-likelihood and its gradient in the transformed coordinates.
fn objective(theta: &[f64], d: &Dataset<f64>) -> (f64, Vec<f64>) {
    let infeasible = (f64::INFINITY, vec![0.0; 3]);
    let Ok(p) = from_theta(theta) else {
        return infeasible;
    };
    let ll = loglik_tlqe(&p, d);
    if !ll.is_finite() {
        return infeasible;
    }
    let Ok(s) = score_tlqe(&p, d) else {
        return infeasible;
    };
    // dq/dc = −(2 − q)
    let grad = vec![-p.alpha() * s[0], -p.lambda() * s[1], (2.0 - p.q()) * s[2]];
    (-ll, grad)
}

/// Starting points: the caller's point first, then the default grid.
///
/// Grid rates start at `1/mean`; for q < 1 they are shrunk so the largest
/// observation sits below 0.99 of the support bound.
pub fn start_points(d: &Dataset<f64>, init: Option<Tlqe<f64>>) -> Vec<Tlqe<f64>> {
    let rate = 1.0 / d.mean();
    let max = d.max();
    let mut starts: Vec<Tlqe<f64>> = init.into_iter().collect();
    for &q in &START_QS {
        for &alpha in &START_ALPHAS {
            let lambda = if q < 1.0 {
                rate.min(0.99 / ((1.0 - q) * max))
            } else {
                rate
            };
            starts.push(Tlqe::new(alpha, lambda, q).expect("grid values are valid"));
        }
    }
    starts
}

pub fn fit_tlqe(d: &Dataset<f64>, init: Option<Tlqe<f64>>) -> Result<FitResult> {
    if d.len() < 4 {
        return Err(Error::InvalidData(format!(
            "TLqE fitting needs at least 4 observations, got {}",
            d.len()
        )));
    }
    let opts = BfgsOptions {
        grad_tol: GRAD_TOL,
        max_iter: MAX_ITER,
        ..BfgsOptions::default()
    };
    let feasible: Vec<Tlqe<f64>> = start_points(d, init)
        .into_iter()
        .filter(|p| loglik_tlqe(p, d).is_finite())
        .collect();
    if feasible.is_empty() {
        return Err(Error::InvalidData(
            "no starting point has the data inside its support".into(),
        ));
    }
    let runs: Vec<_> = feasible
        .par_iter()
        .map(|p| minimize(|t| objective(t, d), &to_theta(p), &opts))
        .collect();

    // Deterministic argmax. Values within rounding of each other are ties;
    // a converged run beats a stalled one, then the earliest start wins.
    let mut best = 0;
    for (i, run) in runs.iter().enumerate().skip(1) {
        let incumbent = &runs[best];
        let tol = TIE_RTOL * incumbent.value.abs().max(1.0);
        let better = run.value < incumbent.value - tol
            || (run.value <= incumbent.value + tol && run.converged && !incumbent.converged);
        if better {
            best = i;
        }
    }
    let run = &runs[best];
    let p = from_theta(&run.x)?;
    let grad_sup = run.grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    Ok(FitResult::new(
        ModelKind::Tlqe,
        Estimates {
            alpha: p.alpha(),
            lambda: p.lambda(),
            q: Some(p.q()),
        },
        -run.value,
        d.len(),
        run.converged,
        run.iterations,
        runs.len(),
        grad_sup,
    ))
}

/// `λ ∂ℓ/∂λ` along the profile `α = α̂(λ)`, as a function of `b = ln λ`.
fn profile_score_tle(b: f64, d: &Dataset<f64>) -> f64 {
    let lambda = b.exp();
    let alpha = alpha_given_lambda_tle(lambda, d);
    match Tle::new(alpha, lambda) {
        Ok(p) => lambda * score_tle(&p, d)[1],
        Err(_) => f64::NAN,
    }
}

pub fn fit_tle(d: &Dataset<f64>, init: Option<Tle<f64>>) -> Result<FitResult> {
    if d.len() < 3 {
        return Err(Error::InvalidData(format!(
            "TLE fitting needs at least 3 observations, got {}",
            d.len()
        )));
    }
    // The profile score is positive left of the maximiser and negative (or
    // non-finite once α̂ overflows) to its right.
    let positive = |v: f64| v.is_finite() && v > 0.0;
    let b0 = match init {
        Some(p) => p.lambda().ln(),
        None => (0.5 / d.mean()).ln(),
    };
    let mut iterations = 0;
    let (mut lo, mut hi) = (b0, b0);
    if positive(profile_score_tle(b0, d)) {
        while positive(profile_score_tle(hi, d)) {
            lo = hi;
            hi += 1.0;
            iterations += 1;
            if iterations > 200 {
                return Err(Error::InvalidData("TLE profile has no maximiser".into()));
            }
        }
    } else {
        while !positive(profile_score_tle(lo, d)) {
            hi = lo;
            lo -= 1.0;
            iterations += 1;
            if iterations > 200 {
                return Err(Error::InvalidData("TLE profile has no maximiser".into()));
            }
        }
    }

    // Illinois regula falsi on the bracket [lo, hi]; bisection when the
    // right end is non-finite.
    let mut f_lo = profile_score_tle(lo, d);
    let mut f_hi = profile_score_tle(hi, d);
    let mut side = 0i8;
    let mut b = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        iterations += 1;
        b = if f_hi.is_finite() {
            (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        } else {
            0.5 * (lo + hi)
        };
        let fb = profile_score_tle(b, d);
        if fb.is_finite() && fb.abs() < 1e-12 {
            break;
        }
        if positive(fb) {
            lo = b;
            f_lo = fb;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = b;
            f_hi = fb;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
        if (hi - lo).abs() < 4.0 * f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }

    let lambda = b.exp();
    let alpha = alpha_given_lambda_tle(lambda, d);
    let p = Tle::new(alpha, lambda)?;
    let s = score_tle(&p, d);
    let grad_sup = (alpha * s[0]).abs().max((lambda * s[1]).abs());
    Ok(FitResult::new(
        ModelKind::Tle,
        Estimates {
            alpha,
            lambda,
            q: None,
        },
        loglik_tle(&p, d),
        d.len(),
        grad_sup < GRAD_TOL,
        iterations,
        1,
        grad_sup,
    ))
}

/// Fit either model by kind.
pub fn fit(kind: ModelKind, d: &Dataset<f64>) -> Result<FitResult> {
    match kind {
        ModelKind::Tlqe => fit_tlqe(d, None),
        ModelKind::Tle => fit_tle(d, None),
    }
}
