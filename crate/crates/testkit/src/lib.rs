//! Numerical oracles for the test suites.
//!
//! Everything here is deliberately independent of the `tlqe` crate: the
//! routines only see plain `f64` closures, so they can check closed forms
//! without sharing any of the code paths under test.

/// Gauss-Kronrod 7/15 nodes on [0, 1] (symmetric; the negative half is mirrored).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over the finite interval [a, b].
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below `tol` or the subdivision budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate_panels(f, a, b, 16, tol)
}

/// [`integrate`] starting from `panels` equal sub-intervals, so that narrow
/// features on a long interval are not missed by the first estimate.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, tol: f64) -> f64 {
    let width = (b - a) / panels as f64;
    let mut segments: Vec<(f64, f64, f64, f64)> = (0..panels)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            let (v, e) = gk15(&f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();
    for _ in 0..20_000 {
        let err: f64 = segments.iter().map(|s| s.3).sum();
        if err <= tol {
            break;
        }
        let (idx, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = segments.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
    // Sort before summing so the result does not depend on heap order.
    segments.sort_by(|x, y| x.0.total_cmp(&y.0));
    segments.iter().map(|s| s.2).sum()
}

/// Integral of a density over (0, upper) by the substitution x = e^s.
///
/// Handles integrable singularities at 0 and power-law tails when
/// `upper` is infinite. The lower cut-off is e^-60.
pub fn integrate_positive<F: Fn(f64) -> f64>(f: F, upper: f64, tol: f64) -> f64 {
    let s_hi = if upper.is_finite() { upper.ln() } else { 300.0 };
    let panels = ((s_hi + 60.0) * 2.0).ceil().max(1.0) as usize;
    integrate_panels(
        |s| {
            let x = s.exp();
            let v = f(x) * x;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        -60.0,
        s_hi,
        panels,
        tol,
    )
}

/// Five-point central difference of `f` at `x` with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Plain two-point central difference.
pub fn central_diff2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// One-sample Kolmogorov-Smirnov statistic sup |F_n(x) − F(x)|.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i as f64 + 1.0) / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Bisection root of a continuous function with a sign change on [lo, hi].
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Evenly spaced interior grid of `n` points on (a, b), endpoints excluded.
pub fn interior_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| a + (b - a) * i as f64 / (n + 1) as f64)
        .collect()
}
