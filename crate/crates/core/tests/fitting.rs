use tlqe::likelihood::{
    alpha_given_base_tlqe, alpha_given_lambda_tle, loglik_tlqe, score_tle, score_tlqe,
};
use tlqe::sampling::sample;
use tlqe::{fit_tle, fit_tlqe, Dataset, LifetimeDistribution, ModelKind, SampleRequest, Tle, Tlqe};
use tlqe_testkit::central_diff;

// Maximum-likelihood estimates on the bundled ball-bearing data, computed
// independently with a general-purpose optimiser at tight tolerances.
const TLE_ALPHA: f64 = 5.575_437_024_996;
const TLE_LAMBDA: f64 = 0.016_526_958_426;
const TLE_AIC: f64 = 238.868_345_680_803;
const TLQE_ALPHA: f64 = 5.035_437_2;
const TLQE_LAMBDA: f64 = 0.013_912_432_37;
const TLQE_Q: f64 = 0.917_458_73;
const TLQE_LOGLIK: f64 = -117.417_582_516_8;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn ball_bearing_tle_matches_reference() {
    let f = fit_tle(&Dataset::ball_bearing(), None).unwrap();
    assert!(f.converged);
    assert_eq!(f.model, ModelKind::Tle);
    assert!(rel(f.estimates.alpha, TLE_ALPHA) < 1e-8);
    assert!(rel(f.estimates.lambda, TLE_LAMBDA) < 1e-8);
    assert!((f.aic - TLE_AIC).abs() < 1e-8);
    assert!((f.bic - (f.aic - 4.0 + 2.0 * 24f64.ln())).abs() < 1e-10);
    assert!(f.estimates.q.is_none());
}

#[test]
fn ball_bearing_tlqe_matches_reference() {
    let f = fit_tlqe(&Dataset::ball_bearing(), None).unwrap();
    assert!(f.converged);
    let e = f.estimates;
    assert!(rel(e.alpha, TLQE_ALPHA) < 1e-5, "{e:?}");
    assert!(rel(e.lambda, TLQE_LAMBDA) < 1e-5, "{e:?}");
    assert!((e.q.unwrap() - TLQE_Q).abs() < 1e-5, "{e:?}");
    assert!((f.loglik - TLQE_LOGLIK).abs() < 1e-7);
    assert!((f.aic - (6.0 - 2.0 * TLQE_LOGLIK)).abs() < 1e-6);
    assert_eq!(f.start_points_tried, 12);
}

#[test]
fn tlqe_optimum_beats_a_coarse_grid() {
    let d = Dataset::ball_bearing();
    let f = fit_tlqe(&d, None).unwrap();
    for i in 0..12 {
        for j in 0..12 {
            for k in 0..12 {
                let a = 0.3 * 1.35f64.powi(i);
                let l = 0.002 * 1.3f64.powi(j);
                let q = -0.2 + 0.17 * k as f64;
                let ll = loglik_tlqe(&Tlqe::new(a, l, q).unwrap(), &d);
                assert!(ll <= f.loglik + 1e-9, "({a}, {l}, {q}) gives {ll}");
            }
        }
    }
}

#[test]
fn refit_from_optimum_is_idempotent() {
    let d = Dataset::ball_bearing();
    let first = fit_tlqe(&d, None).unwrap();
    let Some(q) = first.estimates.q else { panic!() };
    let init = Tlqe::new(first.estimates.alpha, first.estimates.lambda, q).unwrap();
    let again = fit_tlqe(&d, Some(init)).unwrap();
    assert!(rel(again.estimates.alpha, first.estimates.alpha) < 1e-6);
    assert!(rel(again.estimates.lambda, first.estimates.lambda) < 1e-6);
    assert!((again.estimates.q.unwrap() - q).abs() < 1e-6);

    let tle = fit_tle(&d, None).unwrap();
    let init = Tle::new(tle.estimates.alpha, tle.estimates.lambda).unwrap();
    let again = fit_tle(&d, Some(init)).unwrap();
    assert!(rel(again.estimates.alpha, tle.estimates.alpha) < 1e-6);
}

#[test]
fn score_vanishes_and_hessian_is_negative_definite() {
    let d = Dataset::ball_bearing();
    let f = fit_tlqe(&d, None).unwrap();
    let e = f.estimates;
    let theta = [e.alpha, e.lambda, e.q.unwrap()];
    let score_at = |t: [f64; 3]| score_tlqe(&Tlqe::new(t[0], t[1], t[2]).unwrap(), &d).unwrap();

    // Scaled by the parameter magnitudes, the score is the gradient in
    // log coordinates.
    let s = score_at(theta);
    for c in 0..3 {
        assert!((s[c] * theta[c]).abs() < 1e-4, "component {c}: {}", s[c]);
    }

    let mut h = [[0.0; 3]; 3];
    for (j, row) in h.iter_mut().enumerate() {
        let step = 1e-4 * theta[j];
        for (i, cell) in row.iter_mut().enumerate() {
            *cell = central_diff(
                |v| {
                    let mut t = theta;
                    t[j] = v;
                    score_at(t)[i]
                },
                theta[j],
                step,
            );
        }
    }
    // Sylvester: leading minors alternate in sign, starting negative.
    let m1 = h[0][0];
    let m2 = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let m3 = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    assert!(m1 < 0.0 && m2 > 0.0 && m3 < 0.0, "{h:?}");
}

#[test]
fn permutation_invariance() {
    let d = Dataset::ball_bearing();
    let mut rev = d.values().to_vec();
    rev.reverse();
    let r = Dataset::new(rev).unwrap();
    let (a, b) = (fit_tlqe(&d, None).unwrap(), fit_tlqe(&r, None).unwrap());
    assert!(rel(a.estimates.alpha, b.estimates.alpha) < 1e-6);
    assert!(rel(a.estimates.lambda, b.estimates.lambda) < 1e-6);
    assert!((a.estimates.q.unwrap() - b.estimates.q.unwrap()).abs() < 1e-6);
    assert!((a.loglik - b.loglik).abs() < 1e-9);
}

#[test]
fn profile_identities_hold_at_the_optimum() {
    let d = Dataset::ball_bearing();
    let tle = fit_tle(&d, None).unwrap();
    let profiled = alpha_given_lambda_tle(tle.estimates.lambda, &d);
    assert!(rel(profiled, tle.estimates.alpha) < 1e-8);
    let s = score_tle(
        &Tle::new(tle.estimates.alpha, tle.estimates.lambda).unwrap(),
        &d,
    );
    assert!((s[1] * tle.estimates.lambda).abs() < 1e-8);

    let tlqe = fit_tlqe(&d, None).unwrap();
    let e = tlqe.estimates;
    let profiled = alpha_given_base_tlqe(e.lambda, e.q.unwrap(), &d).unwrap();
    assert!(rel(profiled, e.alpha) < 1e-6);
}

#[test]
fn recovers_parameters_from_large_samples() {
    let truth = Tlqe::new(2.0, 0.5, 1.3).unwrap();
    let d = Dataset::new(sample(&SampleRequest::new(truth, 2000, 2024).unwrap()).unwrap()).unwrap();
    let f = fit_tlqe(&d, None).unwrap();
    assert!(f.converged);
    assert!(rel(f.estimates.alpha, 2.0) < 0.15, "{:?}", f.estimates);
    assert!(rel(f.estimates.lambda, 0.5) < 0.15, "{:?}", f.estimates);
    assert!(rel(f.estimates.q.unwrap(), 1.3) < 0.15, "{:?}", f.estimates);

    let truth = Tle::new(5.0, 0.016).unwrap();
    let d = Dataset::new(sample(&SampleRequest::new(truth, 2000, 2025).unwrap()).unwrap()).unwrap();
    let f = fit_tle(&d, None).unwrap();
    assert!(f.converged);
    assert!(rel(f.estimates.alpha, 5.0) < 0.15, "{:?}", f.estimates);
    assert!(rel(f.estimates.lambda, 0.016) < 0.15, "{:?}", f.estimates);
}

#[test]
fn bounded_support_data() {
    let truth = Tlqe::new(1.5, 0.2, 0.6).unwrap();
    let d = Dataset::new(sample(&SampleRequest::new(truth, 400, 5).unwrap()).unwrap()).unwrap();
    let f = fit_tlqe(&d, None).unwrap();
    assert!(f.converged);
    let q = f.estimates.q.unwrap();
    assert!(q < 1.0);
    // Every observation stays inside the fitted support.
    assert!(d.max() < 1.0 / ((1.0 - q) * f.estimates.lambda));
    assert!(f.loglik.is_finite());
}

#[test]
fn fitted_distribution_reproduces_loglik() {
    let d = Dataset::ball_bearing();
    for f in [fit_tlqe(&d, None).unwrap(), fit_tle(&d, None).unwrap()] {
        let model = f.distribution().unwrap();
        let ll: f64 = d.values().iter().map(|&x| model.pdf(x).ln()).sum();
        assert!((ll - f.loglik).abs() < 1e-9, "{:?}", f.model);
    }
}
