use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::Result;
use crate::population::{Population, RefreshOptions};
use crate::potentials::{total_drift, FieldTerms, PotentialConfig};
use crate::problem::Problem;
use crate::rng::{Channel, Streams};

use super::run::Diagnostic;

#[derive(Clone, Debug, PartialEq)]
pub struct LangevinOutcome {
    pub population: Population,
    /// Particles held in place because their update was not finite.
    pub diagnostics: Vec<Diagnostic>,
}

/// One overdamped Langevin move of every particle:
/// `x ← Π(x − (τ/2)·drift + √(γτ)·ε)`, followed by a cache refresh.
pub fn langevin_step(
    problem: &Problem,
    pop: &Population,
    cfg: &PotentialConfig,
    tau: f64,
    streams: &Streams,
    epoch: u64,
    refresh: &RefreshOptions,
) -> Result<LangevinOutcome> {
    let drifts = total_drift(pop, cfg)?;
    let noise_scale = (cfg.gamma * tau).sqrt();
    let moved: Vec<(Vec<f64>, Option<String>)> = drifts
        .into_par_iter()
        .enumerate()
        .map(|(k, drift)| {
            let x = pop.position(k);
            if let Some(bad) = drift.iter().position(|v| !v.is_finite()) {
                return (x.to_vec(), Some(format!("drift component {bad} is {}", drift[bad])));
            }
            let mut next: Vec<f64> = x.iter().zip(&drift).map(|(xi, di)| xi - 0.5 * tau * di).collect();
            if noise_scale > 0.0 {
                let mut rng = streams.substream(epoch, k as u64, Channel::Noise);
                for v in next.iter_mut() {
                    let e: f64 = rng.sample(StandardNormal);
                    *v += noise_scale * e;
                }
            }
            if next.iter().any(|v| !v.is_finite()) {
                return (x.to_vec(), Some("update is not finite".to_string()));
            }
            problem.project_in_place(&mut next);
            (next, None)
        })
        .collect();
    let mut positions = Vec::with_capacity(moved.len());
    let mut diagnostics = Vec::new();
    for (k, (x, note)) in moved.into_iter().enumerate() {
        if let Some(message) = note {
            diagnostics.push(Diagnostic { epoch: epoch as usize, particle: k, message });
        }
        positions.push(x);
    }
    Ok(LangevinOutcome { population: Population::new(problem, positions, refresh)?, diagnostics })
}

/// Centered Fréchet derivative `Λ_k = δℰ(x_k) − mean_j δℰ(x_j)`.
pub fn birth_death_rates(pop: &Population, cfg: &PotentialConfig) -> Result<Vec<f64>> {
    let values = FieldTerms::compute(pop, cfg)?.frechet_all(cfg);
    Ok(center(values))
}

pub(crate) fn center(values: Vec<f64>) -> Vec<f64> {
    if values.is_empty() {
        return values;
    }
    let mean = crate::potentials::canonical_sum(values.clone()) / values.len() as f64;
    values.into_iter().map(|v| v - mean).collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BirthDeathOutcome {
    pub rates: Vec<f64>,
    /// `(source, overwritten slot)` for each duplication.
    pub duplicated: Vec<(usize, usize)>,
    /// `(removed slot, replacement source)` for each removal.
    pub removed: Vec<(usize, usize)>,
    pub events: usize,
}

/// Sequential birth-death sweep over slots `0..N`.
///
/// Slot `k` fires with probability `min(1, |1 − exp(−λ_k τ/2)|)` against a
/// uniformly drawn partner `k′`. A negative rate copies `k` over `k′`; a
/// positive one copies `k′` over `k`. Rates travel with the particle they
/// belong to, so a slot that was overwritten earlier in the sweep fires with
/// the rate of its new occupant.
pub fn birth_death_step(
    pop: &mut Population,
    rates: &[f64],
    tau: f64,
    streams: &Streams,
    epoch: u64,
) -> BirthDeathOutcome {
    let n = pop.len();
    let mut current = rates.to_vec();
    let mut outcome = BirthDeathOutcome { rates: rates.to_vec(), ..Default::default() };
    for k in 0..n {
        let partner = streams.substream(epoch, k as u64, Channel::Partner).gen_range(0..n);
        let eta: f64 = streams.substream(epoch, k as u64, Channel::Eta).gen();
        let lambda = current[k];
        let p = (1.0 - (-lambda * tau / 2.0).exp()).abs().min(1.0);
        if !(eta < p) || partner == k {
            continue;
        }
        if lambda < 0.0 {
            pop.copy_particle(k, partner);
            current[partner] = current[k];
            outcome.duplicated.push((k, partner));
        } else {
            pop.copy_particle(partner, k);
            current[k] = current[partner];
            outcome.removed.push((k, partner));
        }
        outcome.events += 1;
    }
    outcome
}
