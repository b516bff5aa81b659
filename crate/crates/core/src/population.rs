//! The particle ensemble and its per-particle caches.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::minnorm::{self, MinNormSolution};
use crate::problem::{Jacobian, Problem};

/// How caches are rebuilt after positions change.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefreshOptions {
    /// Coordinates within this distance of a bound, whose gradients all push
    /// further out of the box, are dropped from the min-norm problem. The
    /// remaining `g†` then vanishes at box-constrained Pareto-stationary
    /// points (ZDT and DTLZ7 fronts lie on a face of the box). `None` turns
    /// the masking off.
    pub active_bound_tol: Option<f64>,
    /// Replace clamped singular Jacobian entries by 0 in the cache. At
    /// `x₁ = 0` the ZDT `√f₁` term has an infinite slope; its clamped value
    /// (around 10⁶) would otherwise freeze the particle wherever it landed on
    /// that face.
    pub zero_singular: bool,
    pub minnorm_tol: f64,
    pub minnorm_max_iter: usize,
}

impl Default for RefreshOptions {
    fn default() -> Self {
        Self {
            active_bound_tol: Some(1e-3),
            zero_singular: true,
            minnorm_tol: minnorm::DEFAULT_TOL,
            minnorm_max_iter: minnorm::DEFAULT_MAX_ITER,
        }
    }
}

impl RefreshOptions {
    /// Min-norm on the raw Jacobian, exactly as evaluated.
    pub fn unmasked() -> Self {
        Self { active_bound_tol: None, zero_singular: false, ..Self::default() }
    }
}

/// `N` particles with cached objective values, Jacobians and min-norm solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    positions: Vec<Vec<f64>>,
    objectives: Vec<Vec<f64>>,
    jacobians: Vec<Jacobian>,
    minnorm: Vec<MinNormSolution>,
    boundary_singular: Vec<bool>,
}

struct Cache {
    objectives: Vec<f64>,
    jacobian: Jacobian,
    minnorm: MinNormSolution,
    singular: bool,
}

fn compute_cache(problem: &Problem, x: &[f64], opts: &RefreshOptions) -> Result<Cache> {
    let objectives = problem.evaluate_unchecked(x);
    if objectives.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("objective value {objectives:?}")));
    }
    let mut eval = problem.jacobian_unchecked(x);
    // Columns to drop are decided on the clamped Jacobian: a singular entry
    // keeps its true sign there even after its magnitude is zeroed below.
    let active =
        opts.active_bound_tol.map(|tol| active_bound_columns(&eval.jacobian, x, problem.lower(), problem.upper(), tol));
    if opts.zero_singular {
        for &(i, j) in &eval.singular_entries {
            eval.jacobian.set(i, j, 0.0);
        }
    }
    let masked;
    let for_minnorm = match active {
        Some(cols) => {
            masked = zero_columns(&eval.jacobian, &cols);
            &masked
        }
        None => &eval.jacobian,
    };
    let minnorm = minnorm::min_norm_point(for_minnorm, opts.minnorm_tol, opts.minnorm_max_iter)?;
    Ok(Cache { objectives, jacobian: eval.jacobian, minnorm, singular: eval.boundary_singular })
}

/// Coordinates `j` where `xⱼ` sits on a bound and every gradient points outward there.
pub fn active_bound_columns(jac: &Jacobian, x: &[f64], lower: &[f64], upper: &[f64], tol: f64) -> Vec<usize> {
    (0..jac.cols())
        .filter(|&j| {
            let at_lower = x[j] - lower[j] <= tol && (0..jac.rows()).all(|i| jac.get(i, j) >= 0.0);
            let at_upper = upper[j] - x[j] <= tol && (0..jac.rows()).all(|i| jac.get(i, j) <= 0.0);
            at_lower || at_upper
        })
        .collect()
}

fn zero_columns(jac: &Jacobian, cols: &[usize]) -> Jacobian {
    let mut out = jac.clone();
    for &j in cols {
        for i in 0..jac.rows() {
            out.set(i, j, 0.0);
        }
    }
    out
}

/// Zeroes every column of `jac` that [`active_bound_columns`] selects.
pub fn mask_active_bounds(jac: &Jacobian, x: &[f64], lower: &[f64], upper: &[f64], tol: f64) -> Jacobian {
    zero_columns(jac, &active_bound_columns(jac, x, lower, upper, tol))
}

impl Population {
    /// Builds the population and all caches. Positions must be feasible.
    pub fn new(problem: &Problem, positions: Vec<Vec<f64>>, opts: &RefreshOptions) -> Result<Self> {
        for x in &positions {
            if x.len() != problem.dim() {
                return Err(Error::Dimension { expected: problem.dim(), got: x.len() });
            }
        }
        let caches: Vec<Cache> =
            positions.par_iter().map(|x| compute_cache(problem, x, opts)).collect::<Result<_>>()?;
        let mut pop = Self {
            positions,
            objectives: Vec::with_capacity(caches.len()),
            jacobians: Vec::with_capacity(caches.len()),
            minnorm: Vec::with_capacity(caches.len()),
            boundary_singular: Vec::with_capacity(caches.len()),
        };
        for c in caches {
            pop.objectives.push(c.objectives);
            pop.jacobians.push(c.jacobian);
            pop.minnorm.push(c.minnorm);
            pop.boundary_singular.push(c.singular);
        }
        Ok(pop)
    }

    /// Assembles a population from precomputed parts (no evaluation).
    ///
    /// Used for frozen-site experiments where positions are labels only.
    pub fn from_parts(
        positions: Vec<Vec<f64>>,
        objectives: Vec<Vec<f64>>,
        jacobians: Vec<Jacobian>,
        minnorm: Vec<MinNormSolution>,
    ) -> Self {
        let n = positions.len();
        assert!(objectives.len() == n && jacobians.len() == n && minnorm.len() == n);
        Self { positions, objectives, jacobians, minnorm, boundary_singular: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.first().map_or(0, Vec::len)
    }

    pub fn positions(&self) -> &[Vec<f64>] {
        &self.positions
    }

    pub fn objectives(&self) -> &[Vec<f64>] {
        &self.objectives
    }

    pub fn jacobians(&self) -> &[Jacobian] {
        &self.jacobians
    }

    pub fn minnorm(&self) -> &[MinNormSolution] {
        &self.minnorm
    }

    pub fn boundary_singular(&self) -> &[bool] {
        &self.boundary_singular
    }

    pub fn position(&self, k: usize) -> &[f64] {
        &self.positions[k]
    }

    pub fn objective(&self, k: usize) -> &[f64] {
        &self.objectives[k]
    }

    pub fn jacobian(&self, k: usize) -> &Jacobian {
        &self.jacobians[k]
    }

    /// Overwrites slot `dst` with a copy of particle `src`, caches included.
    pub fn copy_particle(&mut self, src: usize, dst: usize) {
        if src == dst {
            return;
        }
        self.positions[dst] = self.positions[src].clone();
        self.objectives[dst] = self.objectives[src].clone();
        self.jacobians[dst] = self.jacobians[src].clone();
        self.minnorm[dst] = self.minnorm[src].clone();
        self.boundary_singular[dst] = self.boundary_singular[src];
    }

    /// Consumes the population, returning positions.
    pub fn into_positions(self) -> Vec<Vec<f64>> {
        self.positions
    }
}
