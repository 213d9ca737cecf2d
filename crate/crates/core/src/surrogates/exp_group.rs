//! Exponential row-group penalty r(W) = lambda * sum_i (1 - exp(-alpha*||W_i||)).

use crate::error::{Error, Result};
use crate::model::Model;
use crate::surrogate::{check_mu, SurrogateRegularizer};

/// Row-wise exponential l2 penalty over a rows x cols model matrix. The
/// surrogate linearizes the concave exponential at the anchor, giving a
/// group-lasso subproblem with per-row weight lambda*alpha*exp(-alpha*||Y_i||)
/// solved exactly by group soft thresholding.
#[derive(Clone, Copy, Debug)]
pub struct ExponentialPenaltyGroupL2 {
    lambda: f64,
    alpha: f64,
    rows: usize,
    cols: usize,
}

impl ExponentialPenaltyGroupL2 {
    pub fn new(lambda: f64, alpha: f64, rows: usize, cols: usize) -> Result<Self> {
        if !(lambda >= 0.0) || !(alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exponential penalty needs lambda, alpha >= 0 (got {}, {})",
                lambda, alpha
            )));
        }
        if cols == 0 {
            return Err(Error::InvalidParameter("column count must be >= 1".into()));
        }
        Ok(ExponentialPenaltyGroupL2 {
            lambda,
            alpha,
            rows,
            cols,
        })
    }

    fn check_shape(&self, m: &Model) -> Result<()> {
        if m.cols() != self.cols || m.rows() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} model, got {}x{}",
                self.rows,
                self.cols,
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }
}

fn row_norm(row: &[f64]) -> f64 {
    row.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl SurrogateRegularizer for ExponentialPenaltyGroupL2 {
    fn value(&self, x: &Model) -> f64 {
        (0..x.rows())
            .map(|i| self.lambda * (1.0 - (-self.alpha * row_norm(x.row(i))).exp()))
            .sum()
    }

    fn surrogate_value(&self, x: &Model, anchor: &Model) -> f64 {
        self.value(anchor)
            + (0..anchor.rows())
                .map(|i| {
                    let anchor_norm = row_norm(anchor.row(i));
                    let weight = self.lambda * self.alpha * (-self.alpha * anchor_norm).exp();
                    weight * (row_norm(x.row(i)) - anchor_norm)
                })
                .sum::<f64>()
    }

    /// Per row, with V_i = Y_i - G_i/mu and theta_i =
    /// lambda*alpha*exp(-alpha*||Y_i||)/mu: the row solution is
    /// (1 - theta_i/||V_i||) * V_i when ||V_i|| >= theta_i and 0 otherwise.
    fn solve_subproblem(&self, anchor: &Model, grad: &[f64], mu: f64) -> Result<Model> {
        check_mu(mu)?;
        self.check_shape(anchor)?;
        if grad.len() != anchor.len() {
            return Err(Error::DimensionMismatch(format!(
                "gradient length {} vs model length {}",
                grad.len(),
                anchor.len()
            )));
        }
        let mut out = anchor.zeros_like();
        let cols = self.cols;
        for i in 0..self.rows {
            let y = anchor.row(i);
            let g = &grad[i * cols..(i + 1) * cols];
            let theta = self.lambda * self.alpha * (-self.alpha * row_norm(y)).exp() / mu;
            let v: Vec<f64> = y.iter().zip(g).map(|(yj, gj)| yj - gj / mu).collect();
            let target = out.row_mut(i);
            if theta == 0.0 {
                target.copy_from_slice(&v);
                continue;
            }
            let vnorm = row_norm(&v);
            if vnorm >= theta {
                let scale = 1.0 - theta / vnorm;
                for (t, vj) in target.iter_mut().zip(&v) {
                    *t = scale * vj;
                }
            }
            // otherwise the row stays zero
        }
        Ok(out)
    }
}
