//! Small analytic problems used by the test and acceptance suites.

use crate::model::Model;
use crate::problem::FiniteSumProblem;

/// f_i(x) = c_i/2 * ||x||^2, so grad f_i(x) = c_i * x and the averaged
/// smoothness constant is exactly sqrt(mean c_i^2).
#[derive(Clone, Debug)]
pub struct QuadraticToy {
    pub coeffs: Vec<f64>,
    pub dim: usize,
}

impl QuadraticToy {
    pub fn new(coeffs: Vec<f64>, dim: usize) -> Self {
        QuadraticToy { coeffs, dim }
    }
}

impl FiniteSumProblem for QuadraticToy {
    fn component_count(&self) -> usize {
        self.coeffs.len()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn component_loss(&self, i: usize, x: &Model) -> f64 {
        0.5 * self.coeffs[i] * x.norm_sq()
    }

    fn component_grad(&self, i: usize, x: &Model, out: &mut [f64]) {
        for (o, v) in out.iter_mut().zip(x.values()) {
            *o = self.coeffs[i] * v;
        }
    }

    fn smoothness_constant(&self) -> Option<f64> {
        let n = self.coeffs.len() as f64;
        Some((self.coeffs.iter().map(|c| c * c).sum::<f64>() / n).sqrt())
    }
}

/// f_i(x) = <xi_i, x>, so grad f_i is the constant vector xi_i. Handy for
/// exercising estimators on arbitrary gradient families.
#[derive(Clone, Debug)]
pub struct LinearToy {
    pub xi: Vec<Vec<f64>>,
}

impl LinearToy {
    pub fn new(xi: Vec<Vec<f64>>) -> Self {
        LinearToy { xi }
    }
}

impl FiniteSumProblem for LinearToy {
    fn component_count(&self) -> usize {
        self.xi.len()
    }

    fn dim(&self) -> usize {
        self.xi[0].len()
    }

    fn component_loss(&self, i: usize, x: &Model) -> f64 {
        self.xi[i].iter().zip(x.values()).map(|(a, b)| a * b).sum()
    }

    fn component_grad(&self, i: usize, x: &Model, out: &mut [f64]) {
        let _ = x;
        out.copy_from_slice(&self.xi[i]);
    }

    fn smoothness_constant(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Enumerates every ordered batch of length b over [0, n): n^b tuples in
/// odometer order.
pub fn for_each_batch(n: usize, b: usize, mut f: impl FnMut(&[usize])) {
    let mut batch = vec![0usize; b];
    loop {
        f(&batch);
        let mut pos = b;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            batch[pos] += 1;
            if batch[pos] < n {
                break;
            }
            batch[pos] = 0;
        }
    }
}
