//! Small hand-checkable problems for the dynamics tests.

use std::sync::Arc;

use crate::problem::{Jacobian, JacobianEval, Objectives, Problem};

/// `fᵢ(x) = wᵢ·‖x − c‖²/2` on `[lo, hi]ᵈ`. Every objective shares the minimizer `c`.
#[derive(Debug)]
pub struct Bowls {
    pub center: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Objectives for Bowls {
    fn num_objectives(&self) -> usize {
        self.weights.len()
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        let sq: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum();
        self.weights.iter().map(|w| 0.5 * w * sq).collect()
    }

    fn jacobian(&self, x: &[f64]) -> JacobianEval {
        let rows: Vec<Vec<f64>> =
            self.weights.iter().map(|w| x.iter().zip(&self.center).map(|(a, c)| w * (a - c)).collect()).collect();
        JacobianEval { jacobian: Jacobian::from_rows(&rows), boundary_singular: false, singular_entries: vec![] }
    }
}

pub fn bowls(center: Vec<f64>, weights: Vec<f64>, lo: f64, hi: f64) -> Problem {
    let d = center.len();
    Problem::new("bowls", vec![lo; d], vec![hi; d], Arc::new(Bowls { center, weights })).unwrap()
}

/// `f(x) = x²/2` in one dimension on `[−10, 10]`.
pub fn half_square() -> Problem {
    bowls(vec![0.0], vec![1.0], -10.0, 10.0)
}

/// Gradient `10³⁰⁸` for `x > 0.5`: finite, but any multiple overflows.
#[derive(Debug)]
pub struct Poisoned;

impl Objectives for Poisoned {
    fn num_objectives(&self) -> usize {
        1
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0]]
    }

    fn jacobian(&self, x: &[f64]) -> JacobianEval {
        let g = if x[0] > 0.5 { 1e308 } else { 1.0 };
        JacobianEval { jacobian: Jacobian::from_rows(&[vec![g]]), boundary_singular: false, singular_entries: vec![] }
    }
}

/// `f(x) = −x`, undefined (NaN) beyond `x = 0.5`.
#[derive(Debug)]
pub struct Cliff;

impl Objectives for Cliff {
    fn num_objectives(&self) -> usize {
        1
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        vec![if x[0] > 0.5 { f64::NAN } else { -x[0] }]
    }

    fn jacobian(&self, _x: &[f64]) -> JacobianEval {
        JacobianEval {
            jacobian: Jacobian::from_rows(&[vec![-1.0]]),
            boundary_singular: false,
            singular_entries: vec![],
        }
    }
}
