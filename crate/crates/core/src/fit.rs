//! Logistic transition fits, `f(x) = a / (1 + exp(-k (x - x0)))`.
//!
//! Parameters are found by Levenberg-Marquardt from several starting points;
//! the converged start with the lowest RMSE wins. A negative `k` means the
//! curve falls as `x` grows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::quantile_sorted;

/// Relative gradient tolerance: the largest cosine between a Jacobian
/// column and the residual vector at an accepted optimum.
pub const GRADIENT_TOLERANCE: f64 = 1e-9;
/// Relative step tolerance below which the optimizer stops moving.
pub const STEP_TOLERANCE: f64 = 1e-9;
const MAX_ITERATIONS: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogisticFit {
    pub a: f64,
    pub k: f64,
    pub x0: f64,
    pub rmse: f64,
    pub converged: bool,
}

impl LogisticFit {
    pub fn eval(&self, x: f64) -> f64 {
        logistic(self.a, self.k, self.x0, x)
    }
}

#[inline]
pub fn logistic(a: f64, k: f64, x0: f64, x: f64) -> f64 {
    a / (1.0 + (-k * (x - x0)).exp())
}

pub fn fit_logistic(xs: &[f64], ys: &[f64]) -> Result<LogisticFit> {
    if xs.len() != ys.len() {
        return Err(Error::config(
            "fit",
            format!("{} x value(s) but {} y value(s)", xs.len(), ys.len()),
        ));
    }
    if xs.len() < 4 {
        return Err(Error::config("fit", "need at least 4 points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::config("fit", "non-finite input"));
    }
    let mut pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::config("fit", "x values must be distinct"));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();

    let y_max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let span = xs[xs.len() - 1] - xs[0];
    if y_max - y_min <= 1e-12 * y_max.abs().max(1.0) {
        // no transition: any k = 0 curve with a = 2y fits, so report it unconverged
        let x0 = quantile_sorted(&xs, 0.5);
        let a = 2.0 * y_max;
        return Ok(LogisticFit {
            a,
            k: 0.0,
            x0,
            rmse: rmse(&xs, &ys, [a, 0.0, x0]),
            converged: false,
        });
    }

    let slope_sign = {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        if cov < 0.0 {
            -1.0
        } else {
            1.0
        }
    };

    let mut best: Option<LogisticFit> = None;
    for q in [0.25, 0.5, 0.75] {
        for scale in [4.0, 16.0, 64.0] {
            let start = [y_max, slope_sign * scale / span, quantile_sorted(&xs, q)];
            let fit = levenberg_marquardt(&xs, &ys, start);
            let better = match &best {
                None => true,
                Some(b) => (fit.converged, -fit.rmse) > (b.converged, -b.rmse),
            };
            if better {
                best = Some(fit);
            }
        }
    }
    let mut fit = best.expect("at least one start");
    if !(fit.a > 0.0) || fit.k.abs() * span < 1e-6 {
        fit.converged = false;
    }
    Ok(fit)
}

fn rmse(xs: &[f64], ys: &[f64], p: [f64; 3]) -> f64 {
    (cost(xs, ys, p) * 2.0 / xs.len() as f64).sqrt()
}

/// Half the residual sum of squares.
fn cost(xs: &[f64], ys: &[f64], p: [f64; 3]) -> f64 {
    0.5 * xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = logistic(p[0], p[1], p[2], *x) - y;
            r * r
        })
        .sum::<f64>()
}

/// Gradient `J^T r`, normal matrix `J^T J`, column norms of `J` and the
/// residual norm at `p`.
fn linearize(xs: &[f64], ys: &[f64], p: [f64; 3]) -> ([f64; 3], [[f64; 3]; 3], [f64; 3], f64) {
    let [a, k, x0] = p;
    let mut g = [0.0; 3];
    let mut h = [[0.0; 3]; 3];
    let mut col = [0.0; 3];
    let mut rr = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let s = 1.0 / (1.0 + (-k * (x - x0)).exp());
        let ds = a * s * (1.0 - s);
        let jac = [s, ds * (x - x0), -ds * k];
        let r = a * s - y;
        rr += r * r;
        for i in 0..3 {
            g[i] += jac[i] * r;
            col[i] += jac[i] * jac[i];
            for j in 0..3 {
                h[i][j] += jac[i] * jac[j];
            }
        }
    }
    (g, h, col.map(f64::sqrt), rr.sqrt())
}

fn gradient_cosine(g: &[f64; 3], col: &[f64; 3], rnorm: f64) -> f64 {
    g.iter()
        .zip(col)
        .map(|(gi, ci)| if *ci > 0.0 { gi.abs() / (ci * rnorm) } else { 0.0 })
        .fold(0.0, f64::max)
}

fn levenberg_marquardt(xs: &[f64], ys: &[f64], start: [f64; 3]) -> LogisticFit {
    let mut p = start;
    let mut c = cost(xs, ys, p);
    let mut lambda = 1e-3;
    let mut converged = false;

    for _ in 0..MAX_ITERATIONS {
        let (g, h, col, rnorm) = linearize(xs, ys, p);
        if rnorm <= 1e-14 * (xs.len() as f64).sqrt() || gradient_cosine(&g, &col, rnorm) <= GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        let mut accepted = false;
        while lambda < 1e20 {
            let mut damped = h;
            for i in 0..3 {
                damped[i][i] += lambda * h[i][i].max(1e-300);
            }
            let Some(delta) = solve3(damped, [-g[0], -g[1], -g[2]]) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]];
            let tc = cost(xs, ys, trial);
            if tc.is_finite() && tc <= c {
                let step = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
                let scale = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                p = trial;
                c = tc;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                if step <= STEP_TOLERANCE * (scale + STEP_TOLERANCE) {
                    let (g, _, col, rnorm) = linearize(xs, ys, p);
                    converged = rnorm <= 1e-14 * (xs.len() as f64).sqrt()
                        || gradient_cosine(&g, &col, rnorm) <= GRADIENT_TOLERANCE;
                    return finish(xs, ys, p, converged);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    finish(xs, ys, p, converged)
}

fn finish(xs: &[f64], ys: &[f64], p: [f64; 3], converged: bool) -> LogisticFit {
    LogisticFit {
        a: p[0],
        k: p[1],
        x0: p[2],
        rmse: rmse(xs, ys, p),
        converged: converged && p.iter().all(|v| v.is_finite()),
    }
}

/// Solves a 3x3 system by Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / m[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
