//! Multiclass logistic regression: f_i(W) = logsumexp(a_i^T W) - (a_i^T W)_{b_i}.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::problem::FiniteSumProblem;

/// L = (q-1)/q * max_i ||a_i||^2 for the softmax cross-entropy loss.
pub fn multiclass_smoothness(data: &Dataset) -> Result<f64> {
    let q = data.class_count();
    if q < 2 {
        return Err(Error::Data(format!(
            "multiclass smoothness needs q >= 2, got {}",
            q
        )));
    }
    if data.n() == 0 {
        return Err(Error::Data("empty dataset".into()));
    }
    Ok((q as f64 - 1.0) / q as f64 * data.max_row_norm_sq())
}

/// Softmax probabilities minus the one-hot target, computed with
/// max-subtraction. This is the per-class gradient coefficient of the loss in
/// the class scores.
pub fn softmax_residual(scores: &[f64], class: usize) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = out.iter().sum();
    for (c, p) in out.iter_mut().enumerate() {
        *p /= total;
        if c == class {
            *p -= 1.0;
        }
    }
    out
}

/// Multiclass logistic problem over a d x q model matrix (rows = features).
/// The per-component gradient is the outer product of the sparse row with the
/// softmax residual.
#[derive(Clone, Debug)]
pub struct MulticlassLogisticProblem {
    data: Dataset,
    q: usize,
    l: f64,
}

impl MulticlassLogisticProblem {
    pub fn new(data: Dataset) -> Result<Self> {
        let q = data.class_count();
        let l = multiclass_smoothness(&data)?;
        Ok(MulticlassLogisticProblem { data, q, l })
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn class_count(&self) -> usize {
        self.q
    }

    /// Class scores a_i^T w_c for every class c. The flat layout is
    /// feature-major: entry (feature j, class c) lives at j*q + c.
    pub fn scores(&self, i: usize, w: &Model) -> Vec<f64> {
        debug_assert_eq!(w.len(), self.dim());
        let q = self.q;
        let vals = w.values();
        let mut scores = vec![0.0f64; q];
        for (j, v) in self.data.row(i).iter() {
            let row = &vals[j * q..(j + 1) * q];
            for (s, wj) in scores.iter_mut().zip(row) {
                *s += v * wj;
            }
        }
        scores
    }

    pub fn initial_model(&self) -> Model {
        Model::zeros_matrix(self.data.dim(), self.q)
    }
}

impl FiniteSumProblem for MulticlassLogisticProblem {
    fn component_count(&self) -> usize {
        self.data.n()
    }

    fn dim(&self) -> usize {
        self.data.dim() * self.q
    }

    fn component_loss(&self, i: usize, w: &Model) -> f64 {
        let scores = self.scores(i, w);
        let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
        lse - scores[self.data.class_index(i)]
    }

    fn component_grad(&self, i: usize, w: &Model, out: &mut [f64]) {
        let mut coeff = vec![0.0f64; self.q];
        self.component_coeff(i, w, &mut coeff);
        self.reconstruct_grad(i, &coeff, out);
    }

    fn smoothness_constant(&self) -> Option<f64> {
        Some(self.l)
    }

    fn compact_coeff_len(&self) -> Option<usize> {
        Some(self.q)
    }

    fn component_coeff(&self, i: usize, w: &Model, out: &mut [f64]) {
        let residual = softmax_residual(&self.scores(i, w), self.data.class_index(i));
        out.copy_from_slice(&residual);
    }

    fn reconstruct_grad(&self, i: usize, coeff: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let q = self.q;
        for (j, v) in self.data.row(i).iter() {
            let block = &mut out[j * q..(j + 1) * q];
            for (o, c) in block.iter_mut().zip(coeff) {
                *o = v * c;
            }
        }
    }

    fn initial_point(&self, _seed: u64) -> Model {
        self.initial_model()
    }
}
