//! Solution-quality measures: Pareto filtering, hypervolume, and distances
//! to a reference front.
//!
//! All objectives are minimized. `a` dominates `b` when `a ≤ b` in every
//! coordinate and `a < b` in at least one.

use std::collections::BTreeMap;

use ordered_float::OrderedFloat;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Benchmark, ReferenceFront};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceNorm {
    #[default]
    Euclidean,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsConfig {
    pub hv_reference: Vec<f64>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default)]
    pub distance_norm: DistanceNorm,
    /// Objective-space radius for counting a point as "on" a front segment.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Reference-front resolution used for the per-epoch GD/IGD columns.
    #[serde(default = "default_front_points")]
    pub front_points: usize,
}

fn default_mc_samples() -> usize {
    100_000
}

fn default_tolerance() -> f64 {
    0.05
}

fn default_front_points() -> usize {
    2_000
}

impl MetricsConfig {
    pub fn new(hv_reference: Vec<f64>) -> Self {
        Self {
            hv_reference,
            mc_samples: default_mc_samples(),
            distance_norm: DistanceNorm::Euclidean,
            tolerance: default_tolerance(),
            front_points: default_front_points(),
        }
    }

    /// Reference points: `(1.1, 1.1)` for ZDT, `(1.1, 1.1, 6.5)` for DTLZ7.
    pub fn for_benchmark(b: Benchmark) -> Self {
        match b {
            Benchmark::Dtlz7 => Self::new(vec![1.1, 1.1, 6.5]),
            _ => Self::new(vec![1.1, 1.1]),
        }
    }
}

pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strict |= x < y;
    }
    strict
}

/// Indices of the points no other point dominates, in input order.
pub fn nondominated_filter(points: &[Vec<f64>]) -> Vec<usize> {
    let m = points.first().map_or(0, Vec::len);
    let mut keep = match m {
        0 => (0..points.len()).collect(),
        2 | 3 => sweep_filter(points, m),
        _ => brute_force_filter(points),
    };
    keep.sort_unstable();
    keep
}

fn brute_force_filter(points: &[Vec<f64>]) -> Vec<usize> {
    (0..points.len()).filter(|&i| !points.iter().any(|q| dominates(q, &points[i]))).collect()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

/// Lexicographic sweep. Every earlier point that is not identical to `p` is
/// lexicographically smaller, so it dominates `p` iff it is `≤ p` in the
/// remaining coordinates. For `m = 2` that is a running minimum; for `m = 3`
/// a staircase over `(f₂, f₃)`.
fn sweep_filter(points: &[Vec<f64>], m: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));

    // staircase: f₂ → min f₃, f₃ strictly decreasing in f₂
    let mut stairs: BTreeMap<OrderedFloat<f64>, f64> = BTreeMap::new();
    let mut best2 = f64::INFINITY;
    let mut keep = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let p = &points[order[i]];
        let mut j = i + 1;
        while j < order.len() && lex_cmp(&points[order[j]], p).is_eq() {
            j += 1;
        }
        let dominated = if m == 2 {
            best2 <= p[1]
        } else {
            stairs.range(..=OrderedFloat(p[1])).next_back().is_some_and(|(_, &f3)| f3 <= p[2])
        };
        if !dominated {
            keep.extend_from_slice(&order[i..j]);
            if m == 2 {
                best2 = p[1];
            } else {
                let stale: Vec<_> =
                    stairs.range(OrderedFloat(p[1])..).take_while(|(_, &f3)| f3 >= p[2]).map(|(k, _)| *k).collect();
                for k in stale {
                    stairs.remove(&k);
                }
                stairs.insert(OrderedFloat(p[1]), p[2]);
            }
        }
        i = j;
    }
    keep
}

/// Points that weakly dominate `reference`; the rest contribute no volume.
fn clip_to_reference<'a>(points: &'a [Vec<f64>], reference: &[f64]) -> Vec<&'a [f64]> {
    points.iter().filter(|p| p.iter().zip(reference).all(|(a, r)| a <= r)).map(Vec::as_slice).collect()
}

/// Exact hypervolume for two or three objectives.
pub fn hypervolume_exact(points: &[Vec<f64>], reference: &[f64]) -> Result<f64> {
    let m = reference.len();
    if let Some(p) = points.iter().find(|p| p.len() != m) {
        return Err(Error::Dimension { expected: m, got: p.len() });
    }
    let pts = clip_to_reference(points, reference);
    match m {
        2 => Ok(area_2d(pts.iter().map(|p| (p[0], p[1])).collect(), reference[0], reference[1])),
        3 => Ok(volume_3d(pts, reference)),
        _ => {
            Err(Error::UnsupportedDimension { m, hint: "exact hypervolume covers m = 2 and m = 3; use hypervolume_mc" })
        }
    }
}

fn area_2d(mut pts: Vec<(f64, f64)>, r1: f64, r2: f64) -> f64 {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut best = r2;
    let mut area = 0.0;
    for (a, b) in pts {
        if b < best {
            area += (r1 - a) * (best - b);
            best = b;
        }
    }
    area
}

/// Sweep along `f₃`: each slab between consecutive levels contributes the
/// 2-D area of everything below it.
fn volume_3d(mut pts: Vec<&[f64]>, reference: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut front: Vec<(f64, f64)> = Vec::new();
    let mut volume = 0.0;
    for (k, p) in pts.iter().enumerate() {
        front.push((p[0], p[1]));
        let next = pts.get(k + 1).map_or(reference[2], |q| q[2]);
        if next > p[2] {
            front = nondominated_pairs(front);
            volume += area_2d(front.clone(), reference[0], reference[1]) * (next - p[2]);
        }
    }
    volume
}

fn nondominated_pairs(pairs: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let pts: Vec<Vec<f64>> = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
    nondominated_filter(&pts).into_iter().map(|i| pairs[i]).collect()
}

/// Monte-Carlo hypervolume: `(estimate, standard error)`.
pub fn hypervolume_mc<R: Rng + ?Sized>(
    points: &[Vec<f64>],
    reference: &[f64],
    cfg: &MetricsConfig,
    rng: &mut R,
) -> (f64, f64) {
    let pts = clip_to_reference(points, reference);
    if pts.is_empty() {
        return (0.0, 0.0);
    }
    let m = reference.len();
    let lower: Vec<f64> = (0..m).map(|j| pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let volume: f64 = lower.iter().zip(reference).map(|(l, r)| r - l).product();
    if !(volume > 0.0) {
        return (0.0, 0.0);
    }
    let n = cfg.mc_samples.max(1);
    let mut sample = vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..n {
        for j in 0..m {
            sample[j] = lower[j] + (reference[j] - lower[j]) * rng.gen::<f64>();
        }
        if pts.iter().any(|p| p.iter().zip(&sample).all(|(a, s)| a <= s)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / n as f64;
    (volume * frac, volume * (frac * (1.0 - frac) / n as f64).sqrt())
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn nearest(p: &[f64], set: &[Vec<f64>]) -> f64 {
    set.iter().map(|q| distance(p, q)).fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontDistance {
    /// Mean distance from each point to the front.
    pub gd: f64,
    /// Mean distance from each front sample to the points.
    pub igd: f64,
    /// Points within `tolerance` of each front segment.
    pub segment_counts: Vec<usize>,
}

pub fn front_distance(points: &[Vec<f64>], front: &ReferenceFront, tolerance: f64) -> FrontDistance {
    let mut segment_counts = vec![0; front.num_segments()];
    let mut gd = 0.0;
    let mut near = vec![f64::INFINITY; segment_counts.len()];
    for p in points {
        near.fill(f64::INFINITY);
        for (q, &s) in front.points.iter().zip(&front.segment_labels) {
            let d = distance(p, q);
            if d < near[s] {
                near[s] = d;
            }
        }
        gd += near.iter().copied().fold(f64::INFINITY, f64::min);
        for (count, &d) in segment_counts.iter_mut().zip(&near) {
            if d <= tolerance {
                *count += 1;
            }
        }
    }
    let igd = front.points.iter().map(|q| nearest(q, points)).sum::<f64>() / front.len().max(1) as f64;
    FrontDistance { gd: gd / points.len().max(1) as f64, igd, segment_counts }
}

/// Fraction of points within `tolerance` of any front sample.
pub fn fraction_near_front(points: &[Vec<f64>], front: &ReferenceFront, tolerance: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let near = points.iter().filter(|p| nearest(p, &front.points) <= tolerance).count();
    near as f64 / points.len() as f64
}

/// How far inside the region dominated by `front` the point `p` lies:
/// `max_q minᵢ (pᵢ − qᵢ)`. Positive means some front sample beats `p` in
/// every objective by at least that much.
pub fn dominance_margin(p: &[f64], front: &ReferenceFront) -> f64 {
    front
        .points
        .iter()
        .map(|q| p.iter().zip(q).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max)
}
