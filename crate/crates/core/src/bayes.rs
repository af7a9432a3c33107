//! Normal approximation to the posterior of the Topp-Leone shape α.
//!
//! With the parent distribution fixed, the TL-generated likelihood in α is
//! `αⁿ exp(−α S)` where `S = Σ −ln(2Gᵢ − Gᵢ²)` and `Gᵢ` is the parent cdf at
//! the i-th observation. Each supported prior keeps the posterior in the
//! gamma family, so the mode and curvature are available in closed form.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::special::log1mexp;
use crate::{Dataset, Error, LifetimeDistribution, QExponential, Result, Scalar};

/// Below this sample size the normal approximation is flagged as rough.
pub const SMALL_SAMPLE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorSpec<T> {
    /// `g(α) ∝ 1`
    Uniform,
    /// `g(α) ∝ α^{−m}`
    ExtendedJeffreys { m: T },
    /// `g(α) ∝ e^{−aα} α^{p−1}`
    Gamma { a: T, p: T },
}

impl<T: Scalar> PriorSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: T, name: &str| {
            if v.is_finite() && v > T::zero() {
                Ok(())
            } else {
                Err(Error::InvalidPrior(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match *self {
            PriorSpec::Uniform => Ok(()),
            PriorSpec::ExtendedJeffreys { m } => pos(m, "m"),
            PriorSpec::Gamma { a, p } => pos(a, "a").and(pos(p, "p")),
        }
    }

    /// Effective event count and rate of the gamma-shaped posterior
    /// `α^{count} e^{−rate·α}`.
    fn shape_rate(&self, s: T, n: usize) -> (T, T) {
        let n = T::of(n as f64);
        match *self {
            PriorSpec::Uniform => (n, s),
            PriorSpec::ExtendedJeffreys { m } => (n - m, s),
            PriorSpec::Gamma { a, p } => (n + p - T::one(), s + a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorApprox<T> {
    pub mean: T,
    pub variance: T,
    pub s_statistic: T,
    pub n: usize,
    pub prior: PriorSpec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CredibleInterval<T> {
    pub level: T,
    pub lo: T,
    pub hi: T,
    /// The lower end was clamped at 0.
    pub truncated: bool,
}

/// `S = Σ ln[(2Gᵢ − Gᵢ²)^{−1}]` with `Gᵢ` the q-exponential cdf at `xᵢ`.
///
/// Computed as `−Σ ln(1 − Sᵢ²)` from the parent survival `Sᵢ`.
pub fn s_statistic<T: Scalar>(d: &Dataset<T>, base: &QExponential<T>) -> Result<T> {
    let two = T::of(2.0);
    let mut total = T::zero();
    for (i, &x) in d.values().iter().enumerate() {
        let sf = base.sf(x);
        if !(sf > T::zero() && sf < T::one()) {
            return Err(Error::Domain(format!(
                "observation #{} = {x} sits at a support endpoint of the base distribution",
                i + 1
            )));
        }
        total = total - log1mexp(two * base.log_sf(x));
    }
    Ok(total)
}

pub fn posterior_alpha<T: Scalar>(
    s: T,
    n: usize,
    prior: PriorSpec<T>,
) -> Result<PosteriorApprox<T>> {
    if !(s.is_finite() && s > T::zero()) {
        return Err(Error::Domain(format!("S must be positive, got {s}")));
    }
    if n == 0 {
        return Err(Error::InvalidData("empty sample".into()));
    }
    prior.validate()?;
    let (count, rate) = prior.shape_rate(s, n);
    if count <= T::zero() {
        return Err(Error::InvalidPrior(format!(
            "effective count {count} is not positive for n = {n}"
        )));
    }
    Ok(PosteriorApprox {
        mean: count / rate,
        variance: count / (rate * rate),
        s_statistic: s,
        n,
        prior,
    })
}

pub fn credible_interval<T: Scalar>(
    post: &PosteriorApprox<T>,
    level: T,
) -> Result<CredibleInterval<T>> {
    let lvl = level.to_f64_lossy();
    if !(lvl > 0.0 && lvl < 1.0) {
        return Err(Error::Domain(format!(
            "level must lie in (0, 1), got {level}"
        )));
    }
    let z = Normal::standard().inverse_cdf(0.5 * (1.0 + lvl));
    let half = T::of(z) * post.variance.sqrt();
    let lo = post.mean - half;
    Ok(CredibleInterval {
        level,
        lo: lo.max(T::zero()),
        hi: post.mean + half,
        truncated: lo < T::zero(),
    })
}

/// Warning text when `n` is too small for the large-sample approximation.
pub fn small_sample_warning(n: usize) -> Option<String> {
    (n < SMALL_SAMPLE).then(|| {
        format!("n = {n} < {SMALL_SAMPLE}: the normal approximation to the posterior may be poor")
    })
}
