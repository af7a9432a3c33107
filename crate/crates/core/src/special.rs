//! Stable primitives shared by the q-exponential family.
//!
//! With δ = 1 − q and z = λx the q-exponential bracket is
//! `1 − δz`, and every power of it that appears in the family has the form
//! `[1 − δz]^{c/δ} = exp(c · L(δ, z))` with `L(δ, z) = ln(1 − δz) / δ`.
//! `L` is continuous through δ = 0 where it equals `−z`, which is exactly
//! the exponential limit.

use crate::Scalar;

/// `ln(1 − e^x)` for `x ≤ 0`, accurate at both ends.
pub fn log1mexp<T: Scalar>(x: T) -> T {
    if x > -T::LN_2() {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `L(δ, z) = ln(1 − δz) / δ`, with `L(0, z) = −z`.
///
/// Returns `−∞` when the bracket is at or below zero (δz ≥ 1).
pub fn log_bracket_scaled<T: Scalar>(delta: T, z: T) -> T {
    if delta == T::zero() {
        return -z;
    }
    let dz = delta * z;
    if dz >= T::one() {
        return T::neg_infinity();
    }
    (-dz).ln_1p() / delta
}

/// ∂L/∂δ at (δ, z).
///
/// Uses the power series `−z² Σ (m+1)/(m+2) (δz)^m` when |δz| is small,
/// where the closed form `(−z/(1−δz) − L)/δ` cancels catastrophically.
pub fn log_bracket_scaled_ddelta<T: Scalar>(delta: T, z: T) -> T {
    let dz = delta * z;
    if dz.abs() < T::of(0.05) {
        let mut sum = T::zero();
        let mut pow = T::one();
        for m in 0..60 {
            let mf = T::of(m as f64);
            let term = (mf + T::one()) / (mf + T::of(2.0)) * pow;
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() {
                break;
            }
            pow = pow * dz;
        }
        -z * z * sum
    } else {
        let l = log_bracket_scaled(delta, z);
        (-z / (T::one() - dz) - l) / delta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log1mexp_matches_naive_in_the_middle() {
        for &x in &[-0.1f64, -0.5, -1.0, -3.0] {
            assert!((log1mexp(x) - (1.0 - x.exp()).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn log1mexp_tails() {
        assert!((log1mexp(-1e-20f64) - (1e-20f64).ln()).abs() < 1e-12);
        assert!((log1mexp(-50.0f64) + (-50.0f64).exp()).abs() < 1e-30);
        assert_eq!(log1mexp(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn bracket_limit_is_exponential() {
        assert_eq!(log_bracket_scaled(0.0, 2.5), -2.5);
        assert!((log_bracket_scaled(1e-12f64, 2.5) + 2.5).abs() < 1e-11);
        assert_eq!(log_bracket_scaled(0.5, 2.0), f64::NEG_INFINITY);
    }

    #[test]
    fn ddelta_matches_finite_difference_on_both_branches() {
        let z = 2.0f64;
        let f = |d: f64| log_bracket_scaled(d, z);
        // δz straddles the series/closed-form switch at 0.05, plus far points.
        for &d in &[-0.3f64, -0.0251, -0.0249, 1e-6, 0.0249, 0.0251, 0.3] {
            let h = 1e-4 * d.abs().max(1e-3);
            let fd =
                (f(d - 2.0 * h) - 8.0 * f(d - h) + 8.0 * f(d + h) - f(d + 2.0 * h)) / (12.0 * h);
            let an = log_bracket_scaled_ddelta(d, z);
            assert!((an - fd).abs() < 1e-8 * an.abs(), "d={d}: {an} vs {fd}");
        }
    }

    #[test]
    fn ddelta_at_zero() {
        assert_eq!(log_bracket_scaled_ddelta(0.0f64, 3.0), -4.5);
    }
}
