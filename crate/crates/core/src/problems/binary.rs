//! Binary classification with the bounded nonconvex loss
//! l(s, t) = (1 - 1/(1 + exp(-t*s)))^2.

use crate::data::{dot, Dataset};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::problem::FiniteSumProblem;

/// Curvature factor of the loss: its second derivative in s is bounded by
/// (39 + 55*sqrt(33))/2304 times ||a_i||^2.
pub const BINARY_CURVATURE_FACTOR: f64 = 0.1540585701213505; // (39 + 55*sqrt(33))/2304

/// L = factor * max_i ||a_i||^2 for the binary nonconvex loss.
pub fn binary_smoothness(data: &Dataset) -> Result<f64> {
    if data.n() == 0 {
        return Err(Error::Data("empty dataset".into()));
    }
    Ok(BINARY_CURVATURE_FACTOR * data.max_row_norm_sq())
}

/// The sparse binary problem f_i(w) = l(a_i^T w, b_i) with labels in {-1,+1}.
#[derive(Clone, Debug)]
pub struct BinaryNonconvexProblem {
    data: Dataset,
    l: f64,
}

impl BinaryNonconvexProblem {
    pub fn new(data: Dataset) -> Result<Self> {
        if data.class_count() != 2 {
            return Err(Error::Data(format!(
                "binary problem needs a 2-class dataset, got q={}",
                data.class_count()
            )));
        }
        let l = binary_smoothness(&data)?;
        Ok(BinaryNonconvexProblem { data, l })
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    /// d l / d s at margin s with label t: -2*t*sigma(t*s)*(1 - sigma(t*s))^2.
    fn loss_derivative(s: f64, t: f64) -> f64 {
        let sig = sigmoid(t * s);
        -2.0 * t * sig * (1.0 - sig) * (1.0 - sig)
    }

    fn margin(&self, i: usize, w: &Model) -> f64 {
        dot(self.data.row(i), w.values()).expect("row/model dimension mismatch")
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl FiniteSumProblem for BinaryNonconvexProblem {
    fn component_count(&self) -> usize {
        self.data.n()
    }

    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn component_loss(&self, i: usize, w: &Model) -> f64 {
        let t = self.data.binary_label(i).expect("binary dataset");
        let sig = sigmoid(t * self.margin(i, w));
        (1.0 - sig) * (1.0 - sig)
    }

    fn component_grad(&self, i: usize, w: &Model, out: &mut [f64]) {
        let mut coeff = [0.0f64];
        self.component_coeff(i, w, &mut coeff);
        self.reconstruct_grad(i, &coeff, out);
    }

    fn smoothness_constant(&self) -> Option<f64> {
        Some(self.l)
    }

    fn compact_coeff_len(&self) -> Option<usize> {
        Some(1)
    }

    fn component_coeff(&self, i: usize, w: &Model, out: &mut [f64]) {
        let t = self.data.binary_label(i).expect("binary dataset");
        out[0] = Self::loss_derivative(self.margin(i, w), t);
    }

    fn reconstruct_grad(&self, i: usize, coeff: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (j, v) in self.data.row(i).iter() {
            out[j] = coeff[0] * v;
        }
    }
}
