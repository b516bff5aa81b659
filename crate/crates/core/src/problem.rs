//! Box-constrained multi-objective problems and the benchmark suite.
//!
//! A [`Problem`] couples a feasible box with an [`Objectives`] implementation
//! that supplies values and analytic Jacobians. The four closed-form
//! benchmarks (ZDT1, ZDT2, ZDT3, DTLZ7) also know their true Pareto fronts.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::metrics::nondominated_filter;

/// Floor applied to `x₁` inside the derivative of the ZDT square-root term.
pub const ZDT_SQRT_FLOOR: f64 = 1e-12;

/// Dense grid size used to locate disconnected front segments.
pub const DENSE_FRONT_SAMPLES: usize = 1_000_000;

/// Row-major `m × d` matrix of objective gradients.
#[derive(Clone, Debug, PartialEq)]
pub struct Jacobian {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Jacobian {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Builds a Jacobian from gradient rows. Panics if rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged Jacobian rows");
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    /// `Jᵀ v`: pulls an objective-space vector back to decision space.
    pub fn transpose_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.transpose_mul_add(v, 1.0, &mut out);
        out
    }

    /// `out += scale · Jᵀ v`.
    pub fn transpose_mul_add(&self, v: &[f64], scale: f64, out: &mut [f64]) {
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (o, g) in out.iter_mut().zip(self.row(i)) {
                *o += scale * vi * g;
            }
        }
    }
}

/// Jacobian together with a flag raised when a singular derivative was clamped.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianEval {
    pub jacobian: Jacobian,
    pub boundary_singular: bool,
    /// `(objective, coordinate)` of every clamped entry.
    pub singular_entries: Vec<(usize, usize)>,
}

/// The vector-valued map `f: ℝᵈ → ℝᵐ` and its derivative.
pub trait Objectives: Send + Sync + fmt::Debug {
    fn num_objectives(&self) -> usize;

    fn eval(&self, x: &[f64]) -> Vec<f64>;

    fn jacobian(&self, x: &[f64]) -> JacobianEval;
}

/// The closed-form benchmarks shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Benchmark {
    Zdt1,
    Zdt2,
    Zdt3,
    Dtlz7,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] = [Benchmark::Zdt1, Benchmark::Zdt2, Benchmark::Zdt3, Benchmark::Dtlz7];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Zdt1 => "zdt1",
            Benchmark::Zdt2 => "zdt2",
            Benchmark::Zdt3 => "zdt3",
            Benchmark::Dtlz7 => "dtlz7",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnsupportedProblem(name.to_string()))
    }

    pub fn num_objectives(self) -> usize {
        match self {
            Benchmark::Dtlz7 => 3,
            _ => 2,
        }
    }

    /// The benchmark on `[0, 1]^d`.
    pub fn problem(self, d: usize) -> Problem {
        let objectives: Arc<dyn Objectives> = match self {
            Benchmark::Zdt1 => Arc::new(Zdt::new(ZdtVariant::One, d)),
            Benchmark::Zdt2 => Arc::new(Zdt::new(ZdtVariant::Two, d)),
            Benchmark::Zdt3 => Arc::new(Zdt::new(ZdtVariant::Three, d)),
            Benchmark::Dtlz7 => Arc::new(Dtlz7::new(d)),
        };
        let mut p = Problem::new(self.name(), vec![0.0; d], vec![1.0; d], objectives).expect("unit box is valid");
        p.benchmark = Some(self);
        p
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone)]
pub struct Problem {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objectives: Arc<dyn Objectives>,
    benchmark: Option<Benchmark>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("d", &self.dim())
            .field("m", &self.num_objectives())
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        objectives: Arc<dyn Objectives>,
    ) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Dimension { expected: lower.len(), got: upper.len() });
        }
        if lower.is_empty() {
            return Err(Error::Config("problem needs at least one decision variable".into()));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::Config(format!(
                "empty box side {i}: lower {} must be below upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(Self { name: name.into(), lower, upper, objectives, benchmark: None })
    }

    /// Looks up a registered benchmark by name, with the customary `d = 30`.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(Benchmark::from_name(name)?.problem(30))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.num_objectives()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn benchmark(&self) -> Option<Benchmark> {
        self.benchmark
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: x.len() });
        }
        for (i, &v) in x.iter().enumerate() {
            if !(v >= self.lower[i] && v <= self.upper[i]) {
                return Err(Error::Domain { index: i, value: v, lower: self.lower[i], upper: self.upper[i] });
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(self.objectives.eval(x))
    }

    pub fn jacobian(&self, x: &[f64]) -> Result<JacobianEval> {
        self.check(x)?;
        Ok(self.objectives.jacobian(x))
    }

    /// Evaluation without the box check, for points already known to be feasible.
    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.objectives.eval(x)
    }

    pub(crate) fn jacobian_unchecked(&self, x: &[f64]) -> JacobianEval {
        self.objectives.jacobian(x)
    }

    /// `n` points drawn uniformly from the box.
    pub fn sample_feasible<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| self.lower.iter().zip(&self.upper).map(|(&lo, &hi)| lo + (hi - lo) * rng.gen::<f64>()).collect())
            .collect()
    }

    /// Componentwise clamp onto the box.
    pub fn project_feasible(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        self.project_in_place(&mut y);
        y
    }

    pub fn project_in_place(&self, x: &mut [f64]) {
        for ((v, &lo), &hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(lo, hi);
        }
    }

    /// Samples the true Pareto front of a benchmark problem.
    ///
    /// ZDT1/ZDT2 place `n` points on a uniform `f₁` grid. ZDT3 filters a grid of
    /// at least [`DENSE_FRONT_SAMPLES`] points and keeps `n` of the survivors,
    /// evenly spaced. DTLZ7 filters a `⌈√n⌉ × ⌈√n⌉` grid over `(f₁, f₂)`, so
    /// it returns fewer than `n` points: only the nondominated patches survive.
    pub fn reference_front(&self, n: usize) -> Result<ReferenceFront> {
        let bench = self.benchmark.ok_or_else(|| Error::UnsupportedProblem(self.name.clone()))?;
        if n < 2 {
            return Err(Error::Config("reference front needs n >= 2".into()));
        }
        Ok(match bench {
            Benchmark::Zdt1 => zdt_front(ZdtVariant::One, n, n),
            Benchmark::Zdt2 => zdt_front(ZdtVariant::Two, n, n),
            Benchmark::Zdt3 => zdt_front(ZdtVariant::Three, n.max(DENSE_FRONT_SAMPLES), n),
            Benchmark::Dtlz7 => {
                let side = (n as f64).sqrt().ceil() as usize;
                dtlz7_front(side)
            }
        })
    }

    /// [`Problem::reference_front`], memoized as a text file in `dir`.
    pub fn reference_front_cached(&self, n: usize, dir: &Path) -> Result<ReferenceFront> {
        let path = front_cache_path(dir, &self.name, n);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok((name, cached_n, front)) = ReferenceFront::from_cache_str(&text) {
                if name == self.name && cached_n == n {
                    return Ok(front);
                }
            }
        }
        let front = self.reference_front(n)?;
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, front.to_cache_string(&self.name, n))?;
        fs::rename(&tmp, &path)?;
        Ok(front)
    }
}

pub fn front_cache_path(dir: &Path, name: &str, n: usize) -> PathBuf {
    dir.join(format!("{name}_{n}.front"))
}

// ---------------------------------------------------------------------------
// ZDT family

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZdtVariant {
    One,
    Two,
    Three,
}

impl ZdtVariant {
    /// `h(f₁, g)` and its partials `(∂h/∂f₁, ∂h/∂g)`.
    ///
    /// `f1_floor` replaces `f₁` inside the square-root derivative.
    fn h(self, f1: f64, g: f64, f1_floor: f64) -> (f64, f64, f64) {
        match self {
            ZdtVariant::One | ZdtVariant::Three => {
                let s = (f1 / g).sqrt();
                let fs = f1.max(f1_floor);
                let ds_df1 = 0.5 / (fs * g).sqrt();
                let ds_dg = -0.5 * (fs / g).sqrt() / g;
                let (mut h, mut dh_df1, mut dh_dg) = (1.0 - s, -ds_df1, -ds_dg);
                if self == ZdtVariant::Three {
                    let (sn, cs) = (10.0 * PI * f1).sin_cos();
                    h -= f1 / g * sn;
                    dh_df1 -= sn / g + f1 / g * 10.0 * PI * cs;
                    dh_dg += f1 / (g * g) * sn;
                }
                (h, dh_df1, dh_dg)
            }
            ZdtVariant::Two => {
                let r = f1 / g;
                (1.0 - r * r, -2.0 * r / g, 2.0 * r * r / g)
            }
        }
    }

    /// The front curve `f₂ = h(f₁, 1)`.
    pub fn front_curve(self, f1: f64) -> f64 {
        self.h(f1, 1.0, 0.0).0
    }
}

/// ZDT1/2/3 on `[0,1]^d`: `f₁ = x₁`, `f₂ = g·h(f₁, g)`, `g = 1 + 9/(d−1)·Σ_{i≥2} xᵢ`.
#[derive(Clone, Debug)]
pub struct Zdt {
    variant: ZdtVariant,
    d: usize,
}

impl Zdt {
    pub fn new(variant: ZdtVariant, d: usize) -> Self {
        assert!(d >= 2, "ZDT problems need d >= 2");
        Self { variant, d }
    }

    fn g_scale(&self) -> f64 {
        9.0 / (self.d - 1) as f64
    }

    fn g(&self, x: &[f64]) -> f64 {
        1.0 + self.g_scale() * x[1..].iter().sum::<f64>()
    }
}

impl Objectives for Zdt {
    fn num_objectives(&self) -> usize {
        2
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        let f1 = x[0];
        let g = self.g(x);
        let (h, _, _) = self.variant.h(f1, g, ZDT_SQRT_FLOOR);
        vec![f1, g * h]
    }

    fn jacobian(&self, x: &[f64]) -> JacobianEval {
        let f1 = x[0];
        let g = self.g(x);
        let (h, dh_df1, dh_dg) = self.variant.h(f1, g, ZDT_SQRT_FLOOR);
        let mut jac = Jacobian::zeros(2, self.d);
        jac.set(0, 0, 1.0);
        jac.set(1, 0, g * dh_df1);
        let df2_dg = h + g * dh_dg;
        let dxj = df2_dg * self.g_scale();
        for j in 1..self.d {
            jac.set(1, j, dxj);
        }
        let boundary_singular = self.variant != ZdtVariant::Two && f1 < ZDT_SQRT_FLOOR;
        let singular_entries = if boundary_singular { vec![(1, 0)] } else { Vec::new() };
        JacobianEval { jacobian: jac, boundary_singular, singular_entries }
    }
}

// ---------------------------------------------------------------------------
// DTLZ7 (three objectives)

/// DTLZ7 with `f₁ = x₁`, `f₂ = x₂`, `f₃ = (1 + g)·h` and
/// `g = 1 + 9/(d−1)·Σ_{i≥3} xᵢ`, `h = 3 − Σᵢ fᵢ/(1+g)·(1 + sin 3πfᵢ)`.
///
/// Note the double offset: `g` already contains the leading `1`, and `f₃`
/// multiplies by `1 + g` again, so the front sits at `1 + g = 2`.
#[derive(Clone, Debug)]
pub struct Dtlz7 {
    d: usize,
}

impl Dtlz7 {
    pub fn new(d: usize) -> Self {
        assert!(d >= 3, "DTLZ7 needs d >= 3");
        Self { d }
    }

    fn g_scale(&self) -> f64 {
        9.0 / (self.d - 1) as f64
    }

    /// Front profile term `u(t) = t(1 + sin 3πt)`; on the front `f₃ = 6 − u(f₁) − u(f₂)`.
    pub fn profile(t: f64) -> f64 {
        t * (1.0 + (3.0 * PI * t).sin())
    }

    fn profile_derivative(t: f64) -> f64 {
        let (s, c) = (3.0 * PI * t).sin_cos();
        1.0 + s + 3.0 * PI * t * c
    }
}

impl Objectives for Dtlz7 {
    fn num_objectives(&self) -> usize {
        3
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        let g = 1.0 + self.g_scale() * x[2..].iter().sum::<f64>();
        let h = 3.0
            - (x[0] / (1.0 + g)) * (1.0 + (3.0 * PI * x[0]).sin())
            - (x[1] / (1.0 + g)) * (1.0 + (3.0 * PI * x[1]).sin());
        vec![x[0], x[1], (1.0 + g) * h]
    }

    fn jacobian(&self, x: &[f64]) -> JacobianEval {
        // (1 + g)h = 3(1 + g) − u(x₁) − u(x₂)
        let mut jac = Jacobian::zeros(3, self.d);
        jac.set(0, 0, 1.0);
        jac.set(1, 1, 1.0);
        jac.set(2, 0, -Self::profile_derivative(x[0]));
        jac.set(2, 1, -Self::profile_derivative(x[1]));
        let dxj = 3.0 * self.g_scale();
        for j in 2..self.d {
            jac.set(2, j, dxj);
        }
        JacobianEval { jacobian: jac, boundary_singular: false, singular_entries: Vec::new() }
    }
}

// ---------------------------------------------------------------------------
// Reference fronts

/// Objective-space samples of a true Pareto front.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceFront {
    pub points: Vec<Vec<f64>>,
    /// Connected-component index of each point.
    pub segment_labels: Vec<usize>,
}

impl ReferenceFront {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn num_segments(&self) -> usize {
        self.segment_labels.iter().max().map_or(0, |&s| s + 1)
    }

    /// Cache format: a `# <problem> <n>` header, then `f₁,…,f_m,label` per line.
    pub fn to_cache_string(&self, problem: &str, n: usize) -> String {
        let mut out = format!("# {problem} {n}\n");
        for (p, &label) in self.points.iter().zip(&self.segment_labels) {
            for v in p {
                out.push_str(&format!("{v:e},"));
            }
            out.push_str(&format!("{label}\n"));
        }
        out
    }

    pub fn from_cache_str(text: &str) -> Result<(String, usize, ReferenceFront)> {
        let bad = |msg: &str| Error::Config(format!("malformed front cache: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty file"))?;
        let mut parts = header.strip_prefix("# ").ok_or_else(|| bad("missing header"))?.split_whitespace();
        let name = parts.next().ok_or_else(|| bad("missing problem name"))?.to_string();
        let n = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("missing sample count"))?;
        let mut points = Vec::new();
        let mut segment_labels = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').collect();
            let (label, values) = fields.split_last().ok_or_else(|| bad("empty record"))?;
            segment_labels.push(label.trim().parse().map_err(|_| bad("bad segment label"))?);
            points.push(
                values
                    .iter()
                    .map(|v| v.trim().parse::<f64>().map_err(|_| bad("bad objective value")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok((name, n, ReferenceFront { points, segment_labels }))
    }
}

/// Splits points sorted by `f₁` wherever the gap reaches 10× the median gap.
pub fn label_segments_by_gap(sorted_f1: &[f64]) -> Vec<usize> {
    if sorted_f1.len() < 2 {
        return vec![0; sorted_f1.len()];
    }
    let gaps: Vec<f64> = sorted_f1.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sorted = gaps.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let mut labels = Vec::with_capacity(sorted_f1.len());
    let mut label = 0;
    labels.push(0);
    for gap in gaps {
        if gap >= 10.0 * median {
            label += 1;
        }
        labels.push(label);
    }
    labels
}

fn zdt_front(variant: ZdtVariant, samples: usize, n: usize) -> ReferenceFront {
    let grid: Vec<Vec<f64>> = (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            vec![t, variant.front_curve(t)]
        })
        .collect();
    let kept = nondominated_filter(&grid);
    let f1: Vec<f64> = kept.iter().map(|&i| grid[i][0]).collect();
    let labels = label_segments_by_gap(&f1);
    let take: Vec<usize> = if kept.len() <= n {
        (0..kept.len()).collect()
    } else {
        let mut idx: Vec<usize> =
            (0..n).map(|k| ((k as f64) * (kept.len() - 1) as f64 / (n - 1) as f64).round() as usize).collect();
        idx.dedup();
        idx
    };
    ReferenceFront {
        points: take.iter().map(|&k| grid[kept[k]].clone()).collect(),
        segment_labels: take.iter().map(|&k| labels[k]).collect(),
    }
}

fn dtlz7_front(side: usize) -> ReferenceFront {
    let side = side.max(2);
    let t = |i: usize| i as f64 / (side - 1) as f64;
    let grid: Vec<Vec<f64>> = (0..side * side)
        .map(|k| {
            let (a, b) = (t(k / side), t(k % side));
            vec![a, b, 6.0 - Dtlz7::profile(a) - Dtlz7::profile(b)]
        })
        .collect();
    let kept = nondominated_filter(&grid);
    let mut alive = vec![false; grid.len()];
    for &k in &kept {
        alive[k] = true;
    }
    // 4-neighbourhood connected components on the grid
    let mut label = vec![usize::MAX; grid.len()];
    let mut next = 0;
    let mut stack = Vec::new();
    for &start in &kept {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        stack.push(start);
        while let Some(k) = stack.pop() {
            let (r, c) = (k / side, k % side);
            let mut visit = |nr: usize, nc: usize| {
                let nk = nr * side + nc;
                if alive[nk] && label[nk] == usize::MAX {
                    label[nk] = next;
                    stack.push(nk);
                }
            };
            if r > 0 {
                visit(r - 1, c);
            }
            if r + 1 < side {
                visit(r + 1, c);
            }
            if c > 0 {
                visit(r, c - 1);
            }
            if c + 1 < side {
                visit(r, c + 1);
            }
        }
        next += 1;
    }
    ReferenceFront {
        points: kept.iter().map(|&k| grid[k].clone()).collect(),
        segment_labels: kept.iter().map(|&k| label[k]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(d: usize, head: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; d];
        x[..head.len()].copy_from_slice(head);
        x
    }

    #[test]
    fn zdt1_values() {
        let p = Benchmark::Zdt1.problem(30);
        assert_eq!(p.evaluate(&unit(30, &[])).unwrap(), vec![0.0, 1.0]);
        let f = p.evaluate(&unit(30, &[0.25])).unwrap();
        assert_relative_eq!(f[0], 0.25);
        assert_relative_eq!(f[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn zdt3_at_right_end() {
        let f = Benchmark::Zdt3.problem(30).evaluate(&unit(30, &[1.0])).unwrap();
        assert_eq!(f[0], 1.0);
        // sin(10π) is only zero up to rounding
        assert!(f[1].abs() < 1e-14, "{}", f[1]);
    }

    #[test]
    fn dtlz7_value() {
        let f = Benchmark::Dtlz7.problem(30).evaluate(&unit(30, &[0.2, 0.4])).unwrap();
        let expected = 2.0 * (3.0 - 0.1 * (1.0 + (0.6 * PI).sin()) - 0.2 * (1.0 + (1.2 * PI).sin()));
        assert_eq!(&f[..2], &[0.2, 0.4]);
        assert_relative_eq!(f[2], expected, epsilon = 1e-14);
    }

    #[test]
    fn out_of_box_reports_index() {
        let p = Benchmark::Zdt1.problem(5);
        let err = p.evaluate(&[0.5, 0.1, 1.5, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Domain { index: 2, .. }), "{err}");
        assert!(matches!(p.evaluate(&[0.5, f64::NAN, 0.0, 0.0, 0.0]), Err(Error::Domain { index: 1, .. })));
        assert!(matches!(p.evaluate(&[0.5]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn zdt1_gradient_examples() {
        let p = Benchmark::Zdt1.problem(30);
        let j = p.jacobian(&unit(30, &[0.25])).unwrap();
        assert!(!j.boundary_singular);
        let mut e1 = vec![0.0; 30];
        e1[0] = 1.0;
        assert_eq!(j.jacobian.row(0), &e1[..]);
        assert_relative_eq!(j.jacobian.get(1, 0), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn zdt_boundary_is_flagged_and_finite() {
        for b in [Benchmark::Zdt1, Benchmark::Zdt3] {
            let j = b.problem(30).jacobian(&unit(30, &[])).unwrap();
            assert!(j.boundary_singular);
            assert!(j.jacobian.as_slice().iter().all(|v| v.is_finite()));
        }
        let j = Benchmark::Zdt2.problem(30).jacobian(&unit(30, &[])).unwrap();
        assert!(!j.boundary_singular);
    }

    #[test]
    fn sampling_is_reproducible_and_feasible() {
        let p = Benchmark::Zdt1.problem(30);
        let a = p.sample_feasible(50, &mut ChaCha8Rng::seed_from_u64(9));
        let b = p.sample_feasible(50, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        assert!(a.iter().flatten().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn sample_mean_concentrates() {
        let p = Benchmark::Zdt1.problem(3);
        let n = 10_000;
        let pts = p.sample_feasible(n, &mut ChaCha8Rng::seed_from_u64(1));
        // uniform on [0,1]: sd 1/√12, so the mean has sd 1/√(12n)
        let sigma = (1.0 / (12.0 * n as f64)).sqrt();
        for j in 0..3 {
            let mean = pts.iter().map(|x| x[j]).sum::<f64>() / n as f64;
            assert!((mean - 0.5).abs() < 3.0 * sigma, "coordinate {j}: {mean}");
        }
    }

    #[test]
    fn projection_clamps() {
        let p = Benchmark::Zdt1.problem(3);
        assert_eq!(p.project_feasible(&[-0.1, 1.2, 0.5]), vec![0.0, 1.0, 0.5]);
        assert_eq!(p.project_feasible(&[0.3, 0.2, 0.1]), vec![0.3, 0.2, 0.1]);
    }

    #[test]
    fn zdt1_front_is_uniform_grid() {
        let front = Benchmark::Zdt1.problem(30).reference_front(100).unwrap();
        assert_eq!(front.len(), 100);
        assert_eq!(front.num_segments(), 1);
        for (i, p) in front.points.iter().enumerate() {
            let t = i as f64 / 99.0;
            assert_relative_eq!(p[0], t);
            assert_relative_eq!(p[1], 1.0 - t.sqrt(), epsilon = 1e-15);
        }
    }

    #[test]
    fn unknown_problem_is_rejected() {
        assert!(matches!(Problem::by_name("zdt9"), Err(Error::UnsupportedProblem(_))));
        let custom =
            Problem::new("custom", vec![0.0; 2], vec![1.0; 2], Arc::new(Zdt::new(ZdtVariant::One, 2))).unwrap();
        assert!(matches!(custom.reference_front(10), Err(Error::UnsupportedProblem(_))));
    }

    #[test]
    fn rejects_empty_box() {
        let r = Problem::new("bad", vec![0.0, 1.0], vec![1.0, 1.0], Arc::new(Zdt::new(ZdtVariant::One, 2)));
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = Benchmark::Zdt2.problem(30);
        let a = p.reference_front_cached(64, dir.path()).unwrap();
        assert!(front_cache_path(dir.path(), "zdt2", 64).exists());
        let b = p.reference_front_cached(64, dir.path()).unwrap();
        assert_eq!(a, b);
    }
}
