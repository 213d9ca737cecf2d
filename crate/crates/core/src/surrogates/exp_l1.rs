//! Exponential coordinate-wise penalty r(w) = sum_i lambda * (1 - exp(-alpha*|w_i|)).

use crate::error::Result;
use crate::model::Model;
use crate::surrogate::{check_mu, SurrogateRegularizer};

/// The concave exponential penalty composed with |.| per coordinate. Its
/// surrogate at anchor y linearizes the concave outer function, giving a
/// weighted l1 term with per-coordinate weight lambda*alpha*exp(-alpha*|y_i|)
/// frozen at the anchor.
#[derive(Clone, Copy, Debug)]
pub struct ExponentialPenaltyL1 {
    lambda: f64,
    alpha: f64,
}

impl ExponentialPenaltyL1 {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !(alpha >= 0.0) {
            return Err(crate::error::Error::InvalidParameter(format!(
                "exponential penalty needs lambda, alpha >= 0 (got {}, {})",
                lambda, alpha
            )));
        }
        Ok(ExponentialPenaltyL1 { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Anchor-frozen l1 weight lambda*alpha*exp(-alpha*|y_i|).
    fn weight(&self, anchor_coord: f64) -> f64 {
        self.lambda * self.alpha * (-self.alpha * anchor_coord.abs()).exp()
    }
}

impl SurrogateRegularizer for ExponentialPenaltyL1 {
    fn value(&self, x: &Model) -> f64 {
        x.values()
            .iter()
            .map(|w| self.lambda * (1.0 - (-self.alpha * w.abs()).exp()))
            .sum()
    }

    fn surrogate_value(&self, x: &Model, anchor: &Model) -> f64 {
        self.value(anchor)
            + anchor
                .values()
                .iter()
                .zip(x.values())
                .map(|(y, w)| self.weight(*y) * (w.abs() - y.abs()))
                .sum::<f64>()
    }

    /// Per coordinate, with v_i = y_i - g_i/mu and threshold
    /// theta_i = lambda*alpha*exp(-alpha*|y_i|)/mu, the minimizer of the
    /// weighted-l1 subproblem is the soft threshold
    /// sign(v_i) * max(|v_i| - theta_i, 0).
    fn solve_subproblem(&self, anchor: &Model, grad: &[f64], mu: f64) -> Result<Model> {
        check_mu(mu)?;
        let values = anchor
            .values()
            .iter()
            .zip(grad)
            .map(|(y, g)| {
                let v = y - g / mu;
                let theta = self.weight(*y) / mu;
                soft_threshold(v, theta)
            })
            .collect();
        Ok(anchor.with_values(values))
    }
}

pub(crate) fn soft_threshold(v: f64, theta: f64) -> f64 {
    if v > theta {
        v - theta
    } else if v < -theta {
        v + theta
    } else {
        0.0
    }
}
