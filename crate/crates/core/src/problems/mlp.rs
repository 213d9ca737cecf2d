//! One-hidden-layer fully connected network with rectifier activation and
//! softmax cross-entropy loss, gradients by hand-written backpropagation.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::problem::FiniteSumProblem;
use crate::problems::multiclass::softmax_residual;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Flat parameter layout: input-to-hidden weights (input x hidden,
/// input-major), hidden biases, hidden-to-output weights (hidden x q,
/// hidden-major), output biases.
#[derive(Clone, Debug)]
pub struct MlpProblem {
    data: Dataset,
    input: usize,
    hidden: usize,
    q: usize,
}

impl MlpProblem {
    pub fn new(data: Dataset, hidden: usize) -> Result<Self> {
        let q = data.class_count();
        if q < 2 {
            return Err(Error::Data(format!("network needs q >= 2 classes, got {}", q)));
        }
        if hidden == 0 {
            return Err(Error::Config("hidden layer must have at least one unit".into()));
        }
        Ok(MlpProblem {
            input: data.dim(),
            hidden,
            q,
            data,
        })
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn class_count(&self) -> usize {
        self.q
    }

    fn w0_offset(&self) -> usize {
        0
    }

    fn b0_offset(&self) -> usize {
        self.input * self.hidden
    }

    fn w1_offset(&self) -> usize {
        self.b0_offset() + self.hidden
    }

    fn b1_offset(&self) -> usize {
        self.w1_offset() + self.hidden * self.q
    }

    /// Hidden pre-activations and output scores for example i.
    fn forward(&self, i: usize, w: &Model) -> (Vec<f64>, Vec<f64>) {
        self.forward_row(self.data.row(i), w)
    }

    fn forward_row(&self, row: &crate::data::SparseRow, w: &Model) -> (Vec<f64>, Vec<f64>) {
        let vals = w.values();
        let h = self.hidden;
        let mut pre = vals[self.b0_offset()..self.b0_offset() + h].to_vec();
        for (j, v) in row.iter() {
            let block = &vals[self.w0_offset() + j * h..self.w0_offset() + (j + 1) * h];
            for (p, wjh) in pre.iter_mut().zip(block) {
                *p += v * wjh;
            }
        }
        let mut scores = vals[self.b1_offset()..self.b1_offset() + self.q].to_vec();
        for (k, p) in pre.iter().enumerate() {
            if *p > 0.0 {
                let block = &vals[self.w1_offset() + k * self.q..self.w1_offset() + (k + 1) * self.q];
                for (s, w1) in scores.iter_mut().zip(block) {
                    *s += p * w1;
                }
            }
        }
        (pre, scores)
    }

    /// Output scores for an arbitrary observation.
    pub fn scores_for_row(&self, row: &crate::data::SparseRow, w: &Model) -> Vec<f64> {
        self.forward_row(row, w).1
    }
}

impl FiniteSumProblem for MlpProblem {
    fn component_count(&self) -> usize {
        self.data.n()
    }

    fn dim(&self) -> usize {
        (self.input + 1) * self.hidden + (self.hidden + 1) * self.q
    }

    fn component_loss(&self, i: usize, w: &Model) -> f64 {
        let (_, scores) = self.forward(i, w);
        let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
        lse - scores[self.data.class_index(i)]
    }

    fn component_grad(&self, i: usize, w: &Model, out: &mut [f64]) {
        out.fill(0.0);
        let (pre, scores) = self.forward(i, w);
        let residual = softmax_residual(&scores, self.data.class_index(i));
        let vals = w.values();
        let h = self.hidden;
        let q = self.q;

        // output layer: d/db1 = residual; d/dW1[k][c] = relu(pre_k) * residual_c
        out[self.b1_offset()..self.b1_offset() + q].copy_from_slice(&residual);
        let mut hidden_grad = vec![0.0f64; h];
        for (k, p) in pre.iter().enumerate() {
            if *p > 0.0 {
                let w1_block = &vals[self.w1_offset() + k * q..self.w1_offset() + (k + 1) * q];
                let out_block = &mut out[self.w1_offset() + k * q..self.w1_offset() + (k + 1) * q];
                let mut back = 0.0;
                for ((o, r), w1) in out_block.iter_mut().zip(&residual).zip(w1_block) {
                    *o = p * r;
                    back += w1 * r;
                }
                // rectifier derivative: 1 for positive pre-activation, 0 at
                // and below zero
                hidden_grad[k] = back;
            }
        }

        // hidden layer: d/db0 = hidden_grad; d/dW0[j][k] = a_j * hidden_grad_k
        out[self.b0_offset()..self.b0_offset() + h].copy_from_slice(&hidden_grad);
        for (j, v) in self.data.row(i).iter() {
            let block = &mut out[self.w0_offset() + j * h..self.w0_offset() + (j + 1) * h];
            for (o, hg) in block.iter_mut().zip(&hidden_grad) {
                *o = v * hg;
            }
        }
    }

    fn smoothness_constant(&self) -> Option<f64> {
        None
    }

    /// Seeded uniform-range initialization: weights in
    /// +-sqrt(6/(fan_in + fan_out)) per layer, biases zero.
    fn initial_point(&self, seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![0.0f64; self.dim()];
        let bound0 = (6.0 / (self.input + self.hidden) as f64).sqrt();
        for v in &mut values[self.w0_offset()..self.b0_offset()] {
            *v = rng.random_range(-bound0..bound0);
        }
        let bound1 = (6.0 / (self.hidden + self.q) as f64).sqrt();
        let (w1, b1) = (self.w1_offset(), self.b1_offset());
        for v in &mut values[w1..b1] {
            *v = rng.random_range(-bound1..bound1);
        }
        Model::from_vec(values)
    }
}

/// Heuristic curvature proxy for problems without an analytic smoothness
/// constant: the largest finite-difference gradient variation
/// ||grad f_i(x + eps*u) - grad f_i(x)|| / eps over seeded random probes
/// (random component, random point, random unit direction). This is a
/// sampled lower estimate of the true constant, not a bound.
pub fn estimate_curvature_bound(
    problem: &dyn FiniteSumProblem,
    probes: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = problem.dim();
    let n = problem.component_count();
    let eps = 1e-4;
    let mut best = 0.0f64;
    let mut g0 = vec![0.0f64; d];
    let mut g1 = vec![0.0f64; d];
    for _ in 0..probes {
        let i = rng.random_range(0..n);
        let x = Model::from_vec((0..d).map(|_| rng.random_range(-0.5..0.5)).collect());
        let mut dir: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        for v in &mut dir {
            *v /= norm;
        }
        let shifted = Model::from_vec(
            x.values()
                .iter()
                .zip(&dir)
                .map(|(xv, dv)| xv + eps * dv)
                .collect(),
        );
        problem.component_grad(i, &x, &mut g0);
        problem.component_grad(i, &shifted, &mut g1);
        let diff = g0
            .iter()
            .zip(&g1)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        best = best.max(diff / eps);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::parse_libsvm_str;

    fn tiny_mlp() -> MlpProblem {
        let ds = parse_libsvm_str("1 1:0.5\n2 2:1\n3 1:-1 2:0.25\n").unwrap();
        MlpProblem::new(ds, 4).unwrap()
    }

    #[test]
    fn dimension_counts_weights_and_biases() {
        let p = tiny_mlp();
        // (2+1)*4 + (4+1)*3 = 27
        assert_eq!(p.dim(), 27);
    }

    #[test]
    fn loss_at_zero_weights_is_log_q() {
        let p = tiny_mlp();
        let w = Model::zeros(p.dim());
        assert!((p.component_loss(0, &w) - 3.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn zero_weights_leave_only_output_bias_gradient() {
        let p = tiny_mlp();
        let w = Model::zeros(p.dim());
        let mut g = vec![0.0; p.dim()];
        p.component_grad(0, &w, &mut g);
        // softmax(0) - onehot(class 0) on the output bias block
        let b1 = p.b1_offset();
        assert!((g[b1] - (1.0 / 3.0 - 1.0)).abs() < 1e-15);
        assert!((g[b1 + 1] - 1.0 / 3.0).abs() < 1e-15);
        // every weight block is zero: hidden activations and inputs vanish
        assert!(g[..b1].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn initial_point_is_seeded_and_bounded() {
        let p = tiny_mlp();
        let a = p.initial_point(9);
        let b = p.initial_point(9);
        let c = p.initial_point(10);
        assert_eq!(a, b);
        assert_ne!(a, c);
        let bound0 = (6.0f64 / 6.0).sqrt();
        assert!(a.values()[..8].iter().all(|v| v.abs() <= bound0));
        // biases start at zero
        assert!(a.values()[8..12].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn curvature_probe_is_positive_and_deterministic() {
        let p = tiny_mlp();
        let a = estimate_curvature_bound(&p, 20, 3);
        let b = estimate_curvature_bound(&p, 20, 3);
        assert_eq!(a, b);
        assert!(a > 0.0);
    }
}
