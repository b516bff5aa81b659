//! The energy functional and its particle estimates.
//!
//! The energy combines four terms, each weighted by a hyperparameter:
//!
//! * `α₁ ∫ ‖g†‖² dρ`: distance from Pareto stationarity,
//! * `α₂ ∫∫ D(f(x), f(y)) μ(dy) ρ(dx)`: how strongly `x` is dominated,
//! * `β/2 ∫∫ R(f(x), f(y)) ρ(dx) ρ(dy)`: pairwise repulsion in objective space,
//! * `γ ∫ ρ log ρ`: negative entropy.
//!
//! With particles, `ρ` becomes the empirical measure of the population and the
//! Pareto-front measure `μ` is replaced by the population itself. Pairwise
//! averages use `1/(N−1)` and skip the particle's own term. Scalar sums are
//! taken in ascending value order, so Fréchet values and the energy are
//! bit-identical under relabeling and under any thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::nondominated_filter;
use crate::population::Population;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepulsiveKind {
    #[default]
    Gaussian,
    Coulomb,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialConfig {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Relaxation constant `c` of the dominance kernel (birth-death only).
    pub dominance_relax_c: f64,
    pub repulsive_kind: RepulsiveKind,
    /// Gaussian width `σ` in objective space.
    pub repulsive_sigma: f64,
    /// KDE bandwidth `h` in decision space.
    pub kde_bandwidth: f64,
    pub coulomb_eps: f64,
    /// Use only the population's nondominated members as the front proxy.
    pub dominance_front_only: bool,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        Self {
            alpha1: 0.0,
            alpha2: 0.0,
            beta: 0.0,
            gamma: 0.0,
            dominance_relax_c: 0.0,
            repulsive_kind: RepulsiveKind::Gaussian,
            repulsive_sigma: 1.0,
            kde_bandwidth: 1.0,
            coulomb_eps: 1e-8,
            dominance_front_only: false,
        }
    }
}

impl PotentialConfig {
    pub fn validate(&self) -> Result<()> {
        let weights = [self.alpha1, self.alpha2, self.beta, self.gamma, self.dominance_relax_c];
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config(format!("potential weights must be finite and nonnegative: {weights:?}")));
        }
        if !(self.repulsive_sigma > 0.0 && self.repulsive_sigma.is_finite()) {
            return Err(Error::Config(format!("repulsive_sigma must be positive, got {}", self.repulsive_sigma)));
        }
        if !(self.kde_bandwidth > 0.0 && self.kde_bandwidth.is_finite()) {
            return Err(Error::Config(format!("kde_bandwidth must be positive, got {}", self.kde_bandwidth)));
        }
        if !(self.coulomb_eps > 0.0) {
            return Err(Error::Config("coulomb_eps must be positive".into()));
        }
        Ok(())
    }
}

/// Stage-level potential settings as written in a config file. Unset widths
/// are filled in from the population when a stage starts (`σ`) or at every
/// birth-death step (`h`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialSettings {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub gamma: f64,
    pub dominance_relax_c: f64,
    pub repulsive_kind: RepulsiveKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repulsive_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kde_bandwidth: Option<f64>,
    pub coulomb_eps: f64,
    pub dominance_front_only: bool,
}

impl Default for PotentialSettings {
    fn default() -> Self {
        let base = PotentialConfig::default();
        Self {
            alpha1: base.alpha1,
            alpha2: base.alpha2,
            beta: base.beta,
            gamma: base.gamma,
            dominance_relax_c: base.dominance_relax_c,
            repulsive_kind: base.repulsive_kind,
            repulsive_sigma: None,
            kde_bandwidth: None,
            coulomb_eps: base.coulomb_eps,
            dominance_front_only: base.dominance_front_only,
        }
    }
}

impl PotentialSettings {
    /// Fills unset widths: `σ` from the median pairwise objective distance and
    /// `h` from Silverman's rule on the current positions.
    pub fn resolve(&self, pop: &Population) -> PotentialConfig {
        PotentialConfig {
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            beta: self.beta,
            gamma: self.gamma,
            dominance_relax_c: self.dominance_relax_c,
            repulsive_kind: self.repulsive_kind,
            repulsive_sigma: self.repulsive_sigma.unwrap_or_else(|| median_pairwise_distance(pop.objectives())),
            kde_bandwidth: self.kde_bandwidth.unwrap_or_else(|| silverman_bandwidth(pop.positions())),
            coulomb_eps: self.coulomb_eps,
            dominance_front_only: self.dominance_front_only,
        }
    }

    /// Checks everything that does not depend on the population.
    pub fn validate(&self) -> Result<()> {
        let mut probe = PotentialConfig {
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            beta: self.beta,
            gamma: self.gamma,
            dominance_relax_c: self.dominance_relax_c,
            repulsive_kind: self.repulsive_kind,
            coulomb_eps: self.coulomb_eps,
            dominance_front_only: self.dominance_front_only,
            ..PotentialConfig::default()
        };
        if let Some(s) = self.repulsive_sigma {
            probe.repulsive_sigma = s;
        }
        if let Some(h) = self.kde_bandwidth {
            probe.kde_bandwidth = h;
        }
        probe.validate()
    }
}

/// Silverman-style bandwidth `1.06 · s̄ · N^(−1/(d+4))`, where `s̄` is the mean
/// per-coordinate standard deviation of the positions.
pub fn silverman_bandwidth(positions: &[Vec<f64>]) -> f64 {
    let n = positions.len();
    let d = positions.first().map_or(0, Vec::len);
    if n < 2 || d == 0 {
        return 1.0;
    }
    let mut mean_sd = 0.0;
    for j in 0..d {
        let mean = positions.iter().map(|x| x[j]).sum::<f64>() / n as f64;
        let var = positions.iter().map(|x| (x[j] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        mean_sd += var.sqrt();
    }
    mean_sd /= d as f64;
    let h = 1.06 * mean_sd * (n as f64).powf(-1.0 / (d as f64 + 4.0));
    if h > 0.0 {
        h
    } else {
        1e-3
    }
}

/// Median pairwise objective-space distance, the default Gaussian width.
pub fn median_pairwise_distance(objectives: &[Vec<f64>]) -> f64 {
    let mut dists = Vec::new();
    for (i, a) in objectives.iter().enumerate() {
        for b in &objectives[i + 1..] {
            dists.push(distance(a, b));
        }
    }
    if dists.is_empty() {
        return 1.0;
    }
    dists.sort_by(f64::total_cmp);
    let med = dists[dists.len() / 2];
    if med > 0.0 {
        med
    } else {
        1.0
    }
}

/// Sums in ascending value order, so the result does not depend on how the
/// summands were indexed.
pub(crate) fn canonical_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `∏ᵢ (max{0, fxᵢ − fyᵢ} + c·1{fxᵢ ≥ fyᵢ})`: positive when `fy` dominates `fx`.
pub fn dominance_kernel(fx: &[f64], fy: &[f64], c: f64) -> f64 {
    let mut prod = 1.0;
    for (a, b) in fx.iter().zip(fy) {
        let diff = a - b;
        let factor = if diff >= 0.0 { diff + c } else { 0.0 };
        if factor == 0.0 {
            return 0.0;
        }
        prod *= factor;
    }
    prod
}

/// Accumulates `∂D/∂fx` for the unrelaxed kernel into `out`.
///
/// `∂/∂fxᵢ ∏ⱼ max{0, Δⱼ} = 1{Δᵢ > 0} ∏_{j≠i} max{0, Δⱼ}`, with the
/// derivative of `max{0, u}` at `u = 0` taken as 0.
fn dominance_kernel_grad(fx: &[f64], fy: &[f64], out: &mut [f64]) {
    let m = fx.len();
    if fx.iter().zip(fy).any(|(a, b)| a <= b) {
        return;
    }
    for (i, o) in out.iter_mut().enumerate().take(m) {
        let prod: f64 = (0..m).filter(|&j| j != i).map(|j| fx[j] - fy[j]).product();
        *o += prod;
    }
}

/// Symmetric repulsive kernel in objective space.
pub fn repulsive_kernel(fx: &[f64], fy: &[f64], cfg: &PotentialConfig) -> f64 {
    match cfg.repulsive_kind {
        RepulsiveKind::Gaussian => {
            let sq: f64 = fx.iter().zip(fy).map(|(a, b)| (a - b) * (a - b)).sum();
            (-sq / (cfg.repulsive_sigma * cfg.repulsive_sigma)).exp()
        }
        RepulsiveKind::Coulomb => 1.0 / distance(fx, fy).max(cfg.coulomb_eps),
    }
}

/// Accumulates `∂R/∂fx` into `out`. The Coulomb kernel is flat (and its
/// derivative zero) inside the `coulomb_eps` guard.
fn repulsive_kernel_grad(fx: &[f64], fy: &[f64], cfg: &PotentialConfig, out: &mut [f64]) {
    match cfg.repulsive_kind {
        RepulsiveKind::Gaussian => {
            let s2 = cfg.repulsive_sigma * cfg.repulsive_sigma;
            let sq: f64 = fx.iter().zip(fy).map(|(a, b)| (a - b) * (a - b)).sum();
            let r = (-sq / s2).exp();
            for ((o, a), b) in out.iter_mut().zip(fx).zip(fy) {
                *o += -2.0 / s2 * (a - b) * r;
            }
        }
        RepulsiveKind::Coulomb => {
            let dist = distance(fx, fy);
            if dist <= cfg.coulomb_eps {
                return;
            }
            let inv3 = 1.0 / (dist * dist * dist);
            for ((o, a), b) in out.iter_mut().zip(fx).zip(fy) {
                *o += -(a - b) * inv3;
            }
        }
    }
}

fn require_pairs(pop: &Population) -> Result<()> {
    if pop.len() < 2 {
        Err(Error::DegeneratePopulation(pop.len()))
    } else {
        Ok(())
    }
}

/// Partners that act as the Pareto-front proxy.
fn front_proxy(pop: &Population, cfg: &PotentialConfig) -> Vec<usize> {
    if cfg.dominance_front_only {
        nondominated_filter(pop.objectives())
    } else {
        (0..pop.len()).collect()
    }
}

fn dominance_potential_with(k: usize, pop: &Population, proxy: &[usize], c: f64) -> f64 {
    let fk = pop.objective(k);
    let terms: Vec<f64> =
        proxy.iter().filter(|&&j| j != k).map(|&j| dominance_kernel(fk, pop.objective(j), c)).collect();
    if terms.is_empty() {
        0.0
    } else {
        let count = terms.len() as f64;
        canonical_sum(terms) / count
    }
}

/// Empirical `δF₂` at particle `k`: mean relaxed dominance kernel against
/// every other particle.
pub fn dominance_potential(k: usize, pop: &Population, cfg: &PotentialConfig) -> Result<f64> {
    require_pairs(pop)?;
    Ok(dominance_potential_with(k, pop, &front_proxy(pop, cfg), cfg.dominance_relax_c))
}

fn dominance_drift_with(k: usize, pop: &Population, proxy: &[usize]) -> Vec<f64> {
    let fk = pop.objective(k);
    let mut grad_f = vec![0.0; fk.len()];
    let mut count = 0usize;
    for &j in proxy {
        if j != k {
            dominance_kernel_grad(fk, pop.objective(j), &mut grad_f);
            count += 1;
        }
    }
    if count == 0 {
        return vec![0.0; pop.dim()];
    }
    pop.jacobian(k).transpose_mul(&grad_f.iter().map(|g| g / count as f64).collect::<Vec<_>>())
}

/// Decision-space gradient of the unrelaxed (`c = 0`) dominance potential at `k`.
pub fn dominance_drift(k: usize, pop: &Population, cfg: &PotentialConfig) -> Result<Vec<f64>> {
    require_pairs(pop)?;
    Ok(dominance_drift_with(k, pop, &front_proxy(pop, cfg)))
}

fn mean_repulsion(k: usize, pop: &Population, cfg: &PotentialConfig) -> f64 {
    let fk = pop.objective(k);
    let terms: Vec<f64> = pop
        .objectives()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != k)
        .map(|(_, fj)| repulsive_kernel(fk, fj, cfg))
        .collect();
    canonical_sum(terms) / (pop.len() - 1) as f64
}

/// `∇ₓ (1/(N−1)) Σ_{j≠k} R(f(x), f(x_j))` at `x = x_k`, via `J_f(x_k)ᵀ ∂R/∂f`.
pub fn repulsive_drift(k: usize, pop: &Population, cfg: &PotentialConfig) -> Result<Vec<f64>> {
    require_pairs(pop)?;
    let fk = pop.objective(k);
    let mut grad_f = vec![0.0; fk.len()];
    for (j, fj) in pop.objectives().iter().enumerate() {
        if j != k {
            repulsive_kernel_grad(fk, fj, cfg, &mut grad_f);
        }
    }
    let scale = 1.0 / (pop.len() - 1) as f64;
    let mut out = vec![0.0; pop.dim()];
    pop.jacobian(k).transpose_mul_add(&grad_f, scale, &mut out);
    Ok(out)
}

/// Langevin drift `α₁·2g† + α₂·∇dominance + β·∇repulsion` for every particle.
pub fn total_drift(pop: &Population, cfg: &PotentialConfig) -> Result<Vec<Vec<f64>>> {
    if cfg.alpha2 != 0.0 || cfg.beta != 0.0 {
        require_pairs(pop)?;
    }
    let proxy = if cfg.alpha2 != 0.0 { front_proxy(pop, cfg) } else { Vec::new() };
    Ok((0..pop.len())
        .into_par_iter()
        .map(|k| {
            let mut drift = vec![0.0; pop.dim()];
            if cfg.alpha1 != 0.0 {
                for (o, g) in drift.iter_mut().zip(&pop.minnorm()[k].g_dagger) {
                    *o += cfg.alpha1 * 2.0 * g;
                }
            }
            if cfg.alpha2 != 0.0 {
                for (o, g) in drift.iter_mut().zip(dominance_drift_with(k, pop, &proxy)) {
                    *o += cfg.alpha2 * g;
                }
            }
            if cfg.beta != 0.0 {
                let fk = pop.objective(k);
                let mut grad_f = vec![0.0; fk.len()];
                for (j, fj) in pop.objectives().iter().enumerate() {
                    if j != k {
                        repulsive_kernel_grad(fk, fj, cfg, &mut grad_f);
                    }
                }
                pop.jacobian(k).transpose_mul_add(&grad_f, cfg.beta / (pop.len() - 1) as f64, &mut drift);
            }
            drift
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogDensity {
    pub value: f64,
    /// Every kernel term underflowed; `value` is the floor `ln(f64::MIN_POSITIVE)`.
    pub floored: bool,
}

/// `log[(1/N) Σ_k exp(−‖x − x_k‖²/h²)]`, evaluated with log-sum-exp.
pub fn kde_log_density(x: &[f64], pop: &Population, cfg: &PotentialConfig) -> LogDensity {
    let h2 = cfg.kde_bandwidth * cfg.kde_bandwidth;
    let exps: Vec<f64> =
        pop.positions().iter().map(|xk| -x.iter().zip(xk).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / h2).collect();
    let max = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = f64::MIN_POSITIVE.ln();
    if !(max >= floor) {
        return LogDensity { value: floor, floored: true };
    }
    let sum = canonical_sum(exps.iter().map(|e| (e - max).exp()).collect());
    LogDensity { value: max + (sum / pop.len() as f64).ln(), floored: false }
}

/// Per-particle pieces of the Fréchet derivative, each already averaged
/// over partners. Terms with zero weight are left at 0 and never computed.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTerms {
    pub norm_sq: Vec<f64>,
    pub dominance: Vec<f64>,
    pub repulsion: Vec<f64>,
    pub log_density: Vec<f64>,
    pub floored: usize,
}

impl FieldTerms {
    pub fn compute(pop: &Population, cfg: &PotentialConfig) -> Result<Self> {
        let n = pop.len();
        let pairwise = cfg.alpha2 != 0.0 || cfg.beta != 0.0;
        if pairwise {
            require_pairs(pop)?;
        }
        let proxy = if cfg.alpha2 != 0.0 { front_proxy(pop, cfg) } else { Vec::new() };
        let rows: Vec<(f64, f64, f64, LogDensity)> = (0..n)
            .into_par_iter()
            .map(|k| {
                let dom = if cfg.alpha2 != 0.0 {
                    dominance_potential_with(k, pop, &proxy, cfg.dominance_relax_c)
                } else {
                    0.0
                };
                let rep = if cfg.beta != 0.0 { mean_repulsion(k, pop, cfg) } else { 0.0 };
                let kde = if cfg.gamma != 0.0 {
                    kde_log_density(pop.position(k), pop, cfg)
                } else {
                    LogDensity { value: 0.0, floored: false }
                };
                (pop.minnorm()[k].norm_sq, dom, rep, kde)
            })
            .collect();
        let mut terms = FieldTerms {
            norm_sq: Vec::with_capacity(n),
            dominance: Vec::with_capacity(n),
            repulsion: Vec::with_capacity(n),
            log_density: Vec::with_capacity(n),
            floored: 0,
        };
        for (ns, dom, rep, kde) in rows {
            terms.norm_sq.push(ns);
            terms.dominance.push(dom);
            terms.repulsion.push(rep);
            terms.log_density.push(kde.value);
            terms.floored += kde.floored as usize;
        }
        Ok(terms)
    }

    /// Uncentered `δℰ` at particle `k`.
    pub fn frechet(&self, k: usize, cfg: &PotentialConfig) -> f64 {
        let mut v = 0.0;
        if cfg.alpha1 != 0.0 {
            v += cfg.alpha1 * self.norm_sq[k];
        }
        if cfg.alpha2 != 0.0 {
            v += cfg.alpha2 * self.dominance[k];
        }
        if cfg.beta != 0.0 {
            v += cfg.beta * self.repulsion[k];
        }
        if cfg.gamma != 0.0 {
            v += cfg.gamma * (self.log_density[k] + 1.0);
        }
        v
    }

    pub fn frechet_all(&self, cfg: &PotentialConfig) -> Vec<f64> {
        (0..self.norm_sq.len()).map(|k| self.frechet(k, cfg)).collect()
    }

    /// Particle estimate of the energy.
    pub fn energy(&self, cfg: &PotentialConfig) -> f64 {
        let n = self.norm_sq.len();
        if n == 0 {
            return 0.0;
        }
        let mean = |v: &[f64]| canonical_sum(v.to_vec()) / n as f64;
        let mut e = 0.0;
        if cfg.alpha1 != 0.0 {
            e += cfg.alpha1 * mean(&self.norm_sq);
        }
        if cfg.alpha2 != 0.0 {
            e += cfg.alpha2 * mean(&self.dominance);
        }
        if cfg.beta != 0.0 {
            e += cfg.beta * 0.5 * mean(&self.repulsion);
        }
        if cfg.gamma != 0.0 {
            e += cfg.gamma * mean(&self.log_density);
        }
        e
    }
}

/// `α₁‖g†‖² + α₂·dominance + β·mean R + γ(log ρ̂ + 1)` at particle `k`.
pub fn frechet_derivative(k: usize, pop: &Population, cfg: &PotentialConfig) -> Result<f64> {
    let mut v = 0.0;
    if cfg.alpha1 != 0.0 {
        v += cfg.alpha1 * pop.minnorm()[k].norm_sq;
    }
    if cfg.alpha2 != 0.0 {
        v += cfg.alpha2 * dominance_potential(k, pop, cfg)?;
    }
    if cfg.beta != 0.0 {
        require_pairs(pop)?;
        v += cfg.beta * mean_repulsion(k, pop, cfg);
    }
    if cfg.gamma != 0.0 {
        v += cfg.gamma * (kde_log_density(pop.position(k), pop, cfg).value + 1.0);
    }
    Ok(v)
}

pub fn empirical_energy(pop: &Population, cfg: &PotentialConfig) -> Result<f64> {
    Ok(FieldTerms::compute(pop, cfg)?.energy(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minnorm::MinNormSolution;
    use crate::problem::Jacobian;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    /// Population whose "decision space" is objective space: f(x) = x, J = I.
    pub(crate) fn identity_population(points: &[Vec<f64>]) -> Population {
        let m = points[0].len();
        let eye: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as u8 as f64).collect()).collect();
        let jac = Jacobian::from_rows(&eye);
        let sol =
            MinNormSolution { alpha: vec![1.0], g_dagger: vec![0.0; m], norm_sq: 0.0, iterations: 0, converged: true };
        Population::from_parts(points.to_vec(), points.to_vec(), vec![jac; points.len()], vec![sol; points.len()])
    }

    fn cfg() -> PotentialConfig {
        PotentialConfig::default()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(dominance_kernel(&[2.0, 3.0], &[1.0, 1.0], 0.0), 2.0);
        assert_eq!(dominance_kernel(&[1.0, 1.0], &[2.0, 0.0], 0.0), 0.0);
        assert_relative_eq!(dominance_kernel(&[0.4, 0.7], &[0.4, 0.7], 0.001), 1e-6, epsilon = 1e-18);
    }

    #[test]
    fn kernel_support() {
        let pts = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 2.0], [2.0, 2.0]];
        for a in &pts {
            for b in &pts {
                let strict = a.iter().zip(b).all(|(x, y)| x > y);
                let weak = a.iter().zip(b).all(|(x, y)| x >= y);
                assert_eq!(dominance_kernel(a, b, 0.0) > 0.0, strict);
                assert_eq!(dominance_kernel(a, b, 0.01) > 0.0, weak);
                if a != b {
                    assert!(dominance_kernel(a, b, 0.0) == 0.0 || dominance_kernel(b, a, 0.0) == 0.0);
                }
            }
        }
    }

    #[test]
    fn repulsive_examples() {
        let g = PotentialConfig { repulsive_sigma: 0.7, ..cfg() };
        assert_eq!(repulsive_kernel(&[0.3, 0.1], &[0.3, 0.1], &g), 1.0);
        assert_relative_eq!(repulsive_kernel(&[0.0, 0.0], &[0.7, 0.0], &g), 1.0 / E, epsilon = 1e-15);
        let c = PotentialConfig { repulsive_kind: RepulsiveKind::Coulomb, ..cfg() };
        assert_eq!(repulsive_kernel(&[0.0, 0.0], &[2.0, 0.0], &c), 0.5);
        assert_eq!(repulsive_kernel(&[1.0, 2.0], &[-1.0, 0.5], &c), repulsive_kernel(&[-1.0, 0.5], &[1.0, 2.0], &c));
    }

    #[test]
    fn dominance_potential_examples() {
        let pop = identity_population(&[vec![2.0, 3.0], vec![1.0, 1.0]]);
        assert_eq!(dominance_potential(0, &pop, &cfg()).unwrap(), 2.0);
        assert_eq!(dominance_potential(1, &pop, &cfg()).unwrap(), 0.0);

        let front = identity_population(&[vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
        for k in 0..3 {
            assert_eq!(dominance_potential(k, &front, &cfg()).unwrap(), 0.0);
        }
        assert!(matches!(
            dominance_potential(0, &identity_population(&[vec![1.0, 1.0]]), &cfg()),
            Err(Error::DegeneratePopulation(1))
        ));
    }

    #[test]
    fn dominance_potential_is_duplication_invariant() {
        let pts = vec![vec![0.9, 0.8], vec![0.1, 0.2], vec![0.5, 0.5], vec![0.3, 0.9], vec![0.95, 0.1]];
        let pop = identity_population(&pts);
        let doubled: Vec<Vec<f64>> = pts.iter().chain(&pts).cloned().collect();
        let pop2 = identity_population(&doubled);
        for k in 0..5 {
            // brute force: average over the other four
            let brute: f64 =
                (0..5).filter(|&j| j != k).map(|j| dominance_kernel(&pts[k], &pts[j], 0.0)).sum::<f64>() / 4.0;
            let a = dominance_potential(k, &pop, &cfg()).unwrap();
            assert_relative_eq!(a, brute, epsilon = 1e-15);
            // in the doubled set the copy of k has zero kernel (c = 0)
            let b = dominance_potential(k, &pop2, &cfg()).unwrap();
            assert_relative_eq!(a, b * 9.0 / 8.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn dominance_drift_examples() {
        let pop = identity_population(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(dominance_drift(0, &pop, &cfg()).unwrap(), vec![0.0, 0.0]);

        let pop = identity_population(&[vec![2.0, 3.0], vec![1.0, 1.0], vec![5.0, 0.0]]);
        // Δ = (1, 2) against particle 1: drift = 2∇f₁ + 1∇f₂, averaged over N − 1 = 2
        assert_eq!(dominance_drift(0, &pop, &cfg()).unwrap(), vec![1.0, 0.5]);
    }

    #[test]
    fn front_only_proxy() {
        let pts = vec![vec![3.0, 3.0], vec![2.0, 2.0], vec![1.0, 1.0]];
        let pop = identity_population(&pts);
        let all = dominance_potential(0, &pop, &cfg()).unwrap();
        let front = PotentialConfig { dominance_front_only: true, ..cfg() };
        assert_eq!(all, (1.0 + 4.0) / 2.0);
        assert_eq!(dominance_potential(0, &pop, &front).unwrap(), 4.0);
    }

    #[test]
    fn repulsive_drift_examples() {
        let g = PotentialConfig { repulsive_sigma: 1.0, ..cfg() };
        let same = identity_population(&[vec![0.5], vec![0.5], vec![0.5]]);
        assert_eq!(repulsive_drift(0, &same, &g).unwrap(), vec![0.0]);

        let pair = identity_population(&[vec![0.0], vec![1.0]]);
        assert_relative_eq!(repulsive_drift(0, &pair, &g).unwrap()[0], 2.0 / E, epsilon = 1e-15);
        assert_relative_eq!(repulsive_drift(1, &pair, &g).unwrap()[0], -2.0 / E, epsilon = 1e-15);
    }

    #[test]
    fn kde_examples() {
        let c = PotentialConfig { kde_bandwidth: 0.3, ..cfg() };
        let one = identity_population(&[vec![0.2, 0.4]]);
        assert_eq!(kde_log_density(&[0.2, 0.4], &one, &c).value, 0.0);

        let two = identity_population(&[vec![0.0, 0.0], vec![0.3, 0.0]]);
        let v = kde_log_density(&[0.0, 0.0], &two, &c);
        assert!(!v.floored);
        assert_relative_eq!(v.value, ((1.0 + (-1.0f64).exp()) / 2.0).ln(), epsilon = 1e-15);

        let four = identity_population(&[vec![0.0, 0.0], vec![0.3, 0.0], vec![0.0, 0.0], vec![0.3, 0.0]]);
        assert_relative_eq!(kde_log_density(&[0.0, 0.0], &four, &c).value, v.value, epsilon = 1e-15);

        let far = kde_log_density(&[1e3, 0.0], &two, &c);
        assert!(far.floored);
        assert_eq!(far.value, f64::MIN_POSITIVE.ln());
    }

    #[test]
    fn frechet_composition() {
        let zero = cfg();
        let pop = identity_population(&[vec![0.0], vec![1.0]]);
        assert_eq!(frechet_derivative(0, &pop, &zero).unwrap(), 0.0);

        let all = PotentialConfig {
            alpha1: 1.0,
            alpha2: 1.0,
            beta: 1.0,
            gamma: 1.0,
            repulsive_sigma: 1.0,
            kde_bandwidth: 1.0,
            ..cfg()
        };
        // particle 1 at f = 1 is dominated by particle 0 at f = 0 (m = 1)
        let kde = ((1.0 + (-1.0f64).exp()) / 2.0).ln();
        let expected1 = 0.0 + 1.0 + (-1.0f64).exp() + (kde + 1.0);
        let expected0 = 0.0 + 0.0 + (-1.0f64).exp() + (kde + 1.0);
        assert_relative_eq!(frechet_derivative(1, &pop, &all).unwrap(), expected1, epsilon = 1e-15);
        assert_relative_eq!(frechet_derivative(0, &pop, &all).unwrap(), expected0, epsilon = 1e-15);

        let terms = FieldTerms::compute(&pop, &all).unwrap();
        assert_eq!(
            terms.frechet_all(&all),
            vec![frechet_derivative(0, &pop, &all).unwrap(), frechet_derivative(1, &pop, &all).unwrap()]
        );
        // energy: mean dominance 1/2, half the mean repulsion, mean log density
        let energy = 0.5 + 0.5 * (-1.0f64).exp() + kde;
        assert_relative_eq!(empirical_energy(&pop, &all).unwrap(), energy, epsilon = 1e-15);
    }

    #[test]
    fn relabeling_invariance() {
        let pts = vec![vec![0.9, 0.8], vec![0.1, 0.2], vec![0.5, 0.5], vec![0.3, 0.9], vec![0.95, 0.1]];
        let all = PotentialConfig {
            alpha2: 2.0,
            beta: 0.5,
            gamma: 0.1,
            dominance_relax_c: 1e-3,
            repulsive_sigma: 0.4,
            kde_bandwidth: 0.2,
            ..cfg()
        };
        let a = identity_population(&pts);
        let perm = [3usize, 0, 4, 1, 2];
        let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| pts[i].clone()).collect();
        let b = identity_population(&permuted);
        let fa = FieldTerms::compute(&a, &all).unwrap().frechet_all(&all);
        let fb = FieldTerms::compute(&b, &all).unwrap().frechet_all(&all);
        for (slot, &i) in perm.iter().enumerate() {
            assert_eq!(fb[slot].to_bits(), fa[i].to_bits());
        }
        let ea = empirical_energy(&a, &all).unwrap();
        let eb = empirical_energy(&b, &all).unwrap();
        assert_eq!(ea.to_bits(), eb.to_bits());
    }

    #[test]
    fn bandwidth_defaults() {
        assert_eq!(median_pairwise_distance(&[vec![0.0, 0.0], vec![3.0, 4.0], vec![0.0, 0.0]]), 5.0);
        assert_eq!(median_pairwise_distance(&[vec![1.0], vec![1.0]]), 1.0);
        let h = silverman_bandwidth(&[vec![0.0], vec![1.0]]);
        let sd = 0.5f64.sqrt();
        assert_relative_eq!(h, 1.06 * sd * 2f64.powf(-0.2), epsilon = 1e-15);
    }
}
