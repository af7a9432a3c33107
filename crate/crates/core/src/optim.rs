//! BFGS minimisation with a backtracking Armijo line search.
//!
//! Objectives return `(value, gradient)`. A non-finite value marks an
//! infeasible point; the line search backs off until it finds a finite,
//! sufficiently lower value, or, once differences in the value are at
//! rounding level, a point with a smaller gradient.

#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    /// Stop once `‖∇f‖∞` falls below this.
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Largest allowed change of any coordinate in one step.
    pub max_step: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-6,
            max_iter: 500,
            max_step: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn minimize<F>(objective: F, x0: &[f64], opts: &BfgsOptions) -> BfgsOutcome
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut g) = objective(&x);
    let mut h = identity(n);
    let mut fresh = true;

    if !fx.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return BfgsOutcome {
            x,
            value: fx,
            grad: g,
            iterations: 0,
            converged: false,
        };
    }

    let mut iter = 0;
    while iter < opts.max_iter {
        if sup_norm(&g) < opts.grad_tol {
            return BfgsOutcome {
                x,
                value: fx,
                grad: g,
                iterations: iter,
                converged: true,
            };
        }
        iter += 1;

        let mut dir: Vec<f64> = h.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&dir, &g);
        if slope >= 0.0 {
            // Lost positive definiteness: fall back to steepest descent.
            h = identity(n);
            fresh = true;
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&dir, &g);
        }
        let longest = sup_norm(&dir);
        let mut step = if longest > opts.max_step {
            opts.max_step / longest
        } else {
            1.0
        };

        // Near the optimum f stops resolving progress; inside that noise
        // band a step is judged by the gradient instead.
        let noise = 8.0 * f64::EPSILON * fx.abs().max(1.0);
        let g_norm = sup_norm(&g);
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let (ft, gt) = objective(&trial);
            if ft.is_finite() && gt.iter().all(|v| v.is_finite()) {
                let armijo = ft < fx && ft <= fx + 1e-4 * step * slope;
                let plateau = (ft - fx).abs() <= noise && sup_norm(&gt) < g_norm;
                if armijo || plateau {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }

        let Some((x_new, f_new, g_new)) = accepted else {
            if fresh {
                break;
            }
            h = identity(n);
            fresh = true;
            continue;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if fresh {
                let scale = sy / dot(&y, &y);
                for (i, row) in h.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = if i == j { scale } else { 0.0 };
                    }
                }
                fresh = false;
            }
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
            let rho = 1.0 / sy;
            let hy: Vec<f64> = h.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }

        x = x_new;
        fx = f_new;
        g = g_new;
    }

    let converged = sup_norm(&g) < opts.grad_tol;
    BfgsOutcome {
        x,
        value: fx,
        grad: g,
        iterations: iter,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            let v = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![
                -2.0 * (1.0 - a) - 400.0 * a * (b - a * a),
                200.0 * (b - a * a),
            ];
            (v, g)
        };
        let out = minimize(f, &[-1.2, 1.0], &BfgsOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn respects_infeasible_region() {
        // ln-barrier style objective: infinite for x ≤ 0.
        let f = |x: &[f64]| {
            if x[0] <= 0.0 {
                (f64::INFINITY, vec![0.0])
            } else {
                (x[0] - 3.0 * x[0].ln(), vec![1.0 - 3.0 / x[0]])
            }
        };
        let out = minimize(f, &[0.1], &BfgsOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn infeasible_start_reports_failure() {
        let f = |_: &[f64]| (f64::NAN, vec![0.0]);
        let out = minimize(f, &[1.0], &BfgsOptions::default());
        assert!(!out.converged);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn already_optimal() {
        let f = |x: &[f64]| (x[0] * x[0], vec![2.0 * x[0]]);
        let out = minimize(f, &[0.0], &BfgsOptions::default());
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
    }
}
