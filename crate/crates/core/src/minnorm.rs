//! Minimal-norm point in the convex hull of objective gradients.
//!
//! For a Jacobian with rows `∇f₁ … ∇f_m` this finds weights `α` on the
//! probability simplex minimizing `‖Σ αᵢ ∇fᵢ‖²`. The minimizer `g†` is the
//! common-descent direction: `−g†` decreases every objective at once, and
//! `‖g†‖ = 0` exactly at Pareto-stationary points.
//!
//! Two objectives use the closed-form projection onto the segment between
//! the two gradients. Three or more run Frank-Wolfe with away steps on the
//! `m × m` Gram matrix; the duality gap certifies the stopping point.

use crate::error::{Error, Result};
use crate::problem::Jacobian;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct MinNormSolution {
    /// Simplex weights.
    pub alpha: Vec<f64>,
    /// `Σ αᵢ ∇fᵢ`.
    pub g_dagger: Vec<f64>,
    /// `‖g†‖²`.
    pub norm_sq: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl MinNormSolution {
    /// Approximate gradient of `‖g†(x)‖²`.
    ///
    /// The exact gradient is `2(Σ αᵢ ∇²fᵢ) g†`; the Hessian combination is
    /// replaced by the identity, leaving `2 g†`.
    pub fn objective_term_drift(&self) -> Vec<f64> {
        self.g_dagger.iter().map(|g| 2.0 * g).collect()
    }
}

/// Solves `min_{α ∈ Δ_m} ‖Σ αᵢ Jᵢ‖²` for the rows `Jᵢ` of `jac`.
pub fn min_norm_point(jac: &Jacobian, tol: f64, max_iter: usize) -> Result<MinNormSolution> {
    let m = jac.rows();
    if m == 0 {
        return Err(Error::Numeric("Jacobian has no rows".into()));
    }
    if let Some(pos) = jac.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!(
            "Jacobian entry ({}, {}) is {}",
            pos / jac.cols(),
            pos % jac.cols(),
            jac.as_slice()[pos]
        )));
    }
    let gram = gram_matrix(jac);
    let (alpha, iterations, converged) = match m {
        1 => (vec![1.0], 0, true),
        2 => (two_point(&gram), 0, true),
        _ => frank_wolfe(&gram, tol, max_iter),
    };
    Ok(assemble(jac, alpha, iterations, converged))
}

fn assemble(jac: &Jacobian, alpha: Vec<f64>, iterations: usize, converged: bool) -> MinNormSolution {
    let mut g_dagger = vec![0.0; jac.cols()];
    jac.transpose_mul_add(&alpha, 1.0, &mut g_dagger);
    let norm_sq = g_dagger.iter().map(|g| g * g).sum();
    MinNormSolution { alpha, g_dagger, norm_sq, iterations, converged }
}

// Fills both triangles from one dot product.
#[allow(clippy::needless_range_loop)]
fn gram_matrix(jac: &Jacobian) -> Vec<Vec<f64>> {
    let m = jac.rows();
    let mut gram = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let v: f64 = jac.row(i).iter().zip(jac.row(j)).map(|(a, b)| a * b).sum();
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    gram
}

/// Weight on the first row: clip of `((g₂ − g₁)·g₂) / ‖g₁ − g₂‖²` to `[0, 1]`.
fn two_point(gram: &[Vec<f64>]) -> Vec<f64> {
    let (g11, g12, g22) = (gram[0][0], gram[0][1], gram[1][1]);
    let denom = g11 - 2.0 * g12 + g22;
    let a = if denom <= 0.0 { 0.5 } else { ((g22 - g12) / denom).clamp(0.0, 1.0) };
    vec![a, 1.0 - a]
}

fn quad(gram: &[Vec<f64>], alpha: &[f64]) -> f64 {
    let ga = mat_vec(gram, alpha);
    alpha.iter().zip(&ga).map(|(a, b)| a * b).sum()
}

fn mat_vec(gram: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    gram.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Away-step Frank-Wolfe for `min αᵀGα` on the simplex.
///
/// Starts from the best vertex; each step moves either toward the vertex with
/// the smallest gradient entry or away from the active vertex with the
/// largest, with an exact line search. Returns `(α, iterations, converged)`.
fn frank_wolfe(gram: &[Vec<f64>], tol: f64, max_iter: usize) -> (Vec<f64>, usize, bool) {
    let m = gram.len();
    let start = (0..m).min_by(|&i, &j| gram[i][i].total_cmp(&gram[j][j])).unwrap();
    let mut alpha = vec![0.0; m];
    alpha[start] = 1.0;
    let mut ga = mat_vec(gram, &alpha);
    let mut obj = ga[start];

    for iter in 0..max_iter {
        // ∇(αᵀGα) = 2Gα; constant factors drop out of the vertex choices
        let toward = (0..m).min_by(|&i, &j| ga[i].total_cmp(&ga[j])).unwrap();
        let gap = 2.0 * (obj - ga[toward]);
        if gap <= tol {
            return (alpha, iter, true);
        }
        let away = (0..m).filter(|&i| alpha[i] > 0.0).max_by(|&i, &j| ga[i].total_cmp(&ga[j])).unwrap();
        let away_gap = 2.0 * (ga[away] - obj);

        // direction d and the largest admissible step
        let mut dir = vec![0.0; m];
        let max_step = if gap >= away_gap {
            for (d, a) in dir.iter_mut().zip(&alpha) {
                *d = -a;
            }
            dir[toward] += 1.0;
            1.0
        } else {
            for (d, a) in dir.iter_mut().zip(&alpha) {
                *d = *a;
            }
            dir[away] -= 1.0;
            let w = alpha[away];
            if w >= 1.0 {
                f64::INFINITY
            } else {
                w / (1.0 - w)
            }
        };

        let gd = mat_vec(gram, &dir);
        let slope: f64 = alpha.iter().zip(&gd).map(|(a, b)| a * b).sum();
        let curv: f64 = dir.iter().zip(&gd).map(|(a, b)| a * b).sum();
        let step = if curv <= 0.0 { max_step } else { (-slope / curv).min(max_step) };
        if !(step > 0.0) || !step.is_finite() {
            return (alpha, iter, false);
        }
        let mut next: Vec<f64> = alpha.iter().zip(&dir).map(|(a, d)| (a + step * d).max(0.0)).collect();
        if step == max_step && gap < away_gap {
            next[away] = 0.0;
        }
        let total: f64 = next.iter().sum();
        for v in &mut next {
            *v /= total;
        }
        let next_obj = quad(gram, &next);
        if next_obj > obj {
            // rounding at convergence; keep the monotone iterate
            return (alpha, iter, gap <= tol.max(1e-12 * obj.abs()));
        }
        alpha = next;
        ga = mat_vec(gram, &alpha);
        obj = next_obj;
    }
    let toward = (0..m).min_by(|&i, &j| ga[i].total_cmp(&ga[j])).unwrap();
    let converged = 2.0 * (obj - ga[toward]) <= tol;
    (alpha, max_iter, converged)
}
