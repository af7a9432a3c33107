//! Log-likelihoods and analytic scores for TLqE and TLE samples.
//!
//! Per observation, with δ = 1 − q, z = λx and `L = ln(1 − δz)/δ`:
//!
//! ```text
//! ℓ = n ln(2αλ(2−q)) + Σ (2+δ) Lᵢ + (α−1) Σ ln(1 − e^{Eᵢ}),   Eᵢ = 2(1+δ) Lᵢ
//! ```
//!
//! which equals the textbook form `(r−1) Σ ln hᵢ + (α−1) Σ ln(1 − hᵢ^r)`
//! with `hᵢ = 1 − (1−q)λxᵢ` and `r = 2(2−q)/(1−q)`, but stays finite and
//! smooth through q = 1. [`LikelihoodTerms`] keeps the textbook form around
//! as an independent evaluation route.

use crate::dist::{Tle, Tlqe};
use crate::special::{log1mexp, log_bracket_scaled, log_bracket_scaled_ddelta};
use crate::{Dataset, Error, Result, Scalar};

/// Bracket values `hᵢ` and exponents `r`, `r − 1` for a parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodTerms<T> {
    pub h: Vec<T>,
    pub r: T,
    pub r_minus_1: T,
}

impl<T: Scalar> LikelihoodTerms<T> {
    /// Fails inside the exponential band, where `r` is unbounded.
    pub fn new(p: &Tlqe<T>, d: &Dataset<T>) -> Result<Self> {
        let delta = p.delta();
        if delta == T::zero() {
            return Err(Error::Domain(
                "bracket exponents are undefined in the q = 1 band".into(),
            ));
        }
        let two = T::of(2.0);
        let r = two * (two - p.q()) / delta;
        let h = d
            .values()
            .iter()
            .map(|&x| T::one() - delta * p.lambda() * x)
            .collect();
        Ok(Self {
            h,
            r,
            r_minus_1: (T::of(3.0) - p.q()) / delta,
        })
    }

    pub fn in_support(&self) -> bool {
        self.h.iter().all(|&h| h > T::zero())
    }

    /// `Σ ln(1 − hᵢ^r)`, i.e. `−S` for the shape posterior.
    pub fn sum_log_one_minus_h_pow_r(&self) -> T {
        self.h
            .iter()
            .fold(T::zero(), |acc, &h| acc + (T::one() - h.powf(self.r)).ln())
    }

    /// Log-likelihood in the textbook form.
    pub fn loglik(&self, p: &Tlqe<T>) -> T {
        if !self.in_support() {
            return T::neg_infinity();
        }
        let n = T::of(self.h.len() as f64);
        let sum_ln_h = self.h.iter().fold(T::zero(), |acc, &h| acc + h.ln());
        n * (T::of(2.0) * p.alpha() * p.lambda() * (T::of(2.0) - p.q())).ln()
            + self.r_minus_1 * sum_ln_h
            + (p.alpha() - T::one()) * self.sum_log_one_minus_h_pow_r()
    }
}

/// `ℓ(α, λ, q)`; `−∞` when an observation lies beyond the support.
pub fn loglik_tlqe<T: Scalar>(p: &Tlqe<T>, d: &Dataset<T>) -> T {
    let delta = p.delta();
    let one = T::one();
    let two = T::of(2.0);
    let am1 = p.alpha() - one;
    let mut acc = T::zero();
    for &x in d.values() {
        let l = log_bracket_scaled(delta, p.lambda() * x);
        if !l.is_finite() {
            return T::neg_infinity();
        }
        acc = acc + (two + delta) * l;
        if am1 != T::zero() {
            acc = acc + am1 * log1mexp(two * (one + delta) * l);
        }
    }
    let n = T::of(d.len() as f64);
    n * (two * p.alpha() * p.lambda() * (one + delta)).ln() + acc
}

/// Analytic score `(∂ℓ/∂α, ∂ℓ/∂λ, ∂ℓ/∂q)`.
///
/// Errors if an observation lies on or beyond the support boundary, or at a
/// point where `1 − hᵢ^r` vanishes.
pub fn score_tlqe<T: Scalar>(p: &Tlqe<T>, d: &Dataset<T>) -> Result<[T; 3]> {
    let delta = p.delta();
    let (alpha, lambda) = (p.alpha(), p.lambda());
    let one = T::one();
    let two = T::of(2.0);
    let am1 = alpha - one;
    let n = T::of(d.len() as f64);

    let mut d_alpha = n / alpha;
    let mut d_lambda = n / lambda;
    let mut d_delta = n / (one + delta);
    for (i, &x) in d.values().iter().enumerate() {
        let z = lambda * x;
        let l = log_bracket_scaled(delta, z);
        if !l.is_finite() {
            return Err(Error::Domain(format!(
                "observation #{} lies outside the support",
                i + 1
            )));
        }
        let e = two * (one + delta) * l;
        let log_inner = log1mexp(e);
        if !log_inner.is_finite() {
            return Err(Error::Domain(format!(
                "observation #{} sits at the lower support boundary",
                i + 1
            )));
        }
        // d ln(1 − e^E)/dE
        let w = -one / (-e).exp_m1();
        let h = one - delta * z;
        let l_delta = log_bracket_scaled_ddelta(delta, z);

        d_alpha = d_alpha + log_inner;
        d_lambda = d_lambda - x / h * ((two + delta) + am1 * w * two * (one + delta));
        d_delta =
            d_delta + l + (two + delta) * l_delta + am1 * w * two * (l + (one + delta) * l_delta);
    }
    Ok([d_alpha, d_lambda, -d_delta])
}

/// Closed-form maximiser of ℓ in α for fixed (λ, q): `−n / Σ ln(1 − hᵢ^r)`.
pub fn alpha_given_base_tlqe<T: Scalar>(lambda: T, q: T, d: &Dataset<T>) -> Result<T> {
    let p = Tlqe::new(T::one(), lambda, q)?;
    let delta = p.delta();
    let two = T::of(2.0);
    let mut sum = T::zero();
    for &x in d.values() {
        let l = log_bracket_scaled(delta, lambda * x);
        sum = sum + log1mexp(two * (T::one() + delta) * l);
    }
    if !(sum.is_finite() && sum < T::zero()) {
        return Err(Error::Domain(
            "observations outside the support of the base distribution".into(),
        ));
    }
    Ok(-T::of(d.len() as f64) / sum)
}

pub fn loglik_tle<T: Scalar>(p: &Tle<T>, d: &Dataset<T>) -> T {
    let two = T::of(2.0);
    let am1 = p.alpha() - T::one();
    let n = T::of(d.len() as f64);
    let mut acc = n * (two * p.alpha() * p.lambda()).ln() - two * p.lambda() * d.sum();
    if am1 != T::zero() {
        for &x in d.values() {
            acc = acc + am1 * log1mexp(-two * p.lambda() * x);
        }
    }
    acc
}

/// `(∂ℓ/∂α, ∂ℓ/∂λ)` for TLE.
pub fn score_tle<T: Scalar>(p: &Tle<T>, d: &Dataset<T>) -> [T; 2] {
    let two = T::of(2.0);
    let n = T::of(d.len() as f64);
    let am1 = p.alpha() - T::one();
    let mut d_alpha = n / p.alpha();
    let mut d_lambda = n / p.lambda() - two * d.sum();
    for &x in d.values() {
        let tx = two * p.lambda() * x;
        d_alpha = d_alpha + log1mexp(-tx);
        d_lambda = d_lambda + am1 * two * x / tx.exp_m1();
    }
    [d_alpha, d_lambda]
}

/// Profile maximiser `α̂(λ) = −n / Σ ln(1 − e^{−2λxᵢ})`.
pub fn alpha_given_lambda_tle<T: Scalar>(lambda: T, d: &Dataset<T>) -> T {
    let two = T::of(2.0);
    let sum = d
        .values()
        .iter()
        .fold(T::zero(), |acc, &x| acc + log1mexp(-two * lambda * x));
    -T::of(d.len() as f64) / sum
}

/// `(AIC, BIC) = (2k − 2ℓ, k ln n − 2ℓ)`.
pub fn information_criteria<T: Scalar>(loglik: T, k: usize, n: usize) -> (T, T) {
    let k = T::of(k as f64);
    let n = T::of(n as f64);
    let two = T::of(2.0);
    (two * k - two * loglik, k * n.ln() - two * loglik)
}
