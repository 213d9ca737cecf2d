//! The regularizer/surrogate interface and the majorization diagnostic.

use crate::error::{Error, Result};
use crate::model::Model;

/// A regularizer r together with a surrogate u(x, y) satisfying
/// u(y, y) = r(y) and u(x, y) >= r(x), and an exact solver for the anchored
/// subproblem  argmin_x  mu/2 ||x - y||^2 + <g, x> + u(x, y).
pub trait SurrogateRegularizer: Sync {
    /// r(x).
    fn value(&self, x: &Model) -> f64;

    /// u(x, anchor).
    fn surrogate_value(&self, x: &Model, anchor: &Model) -> f64;

    /// Exact global minimizer of mu/2 ||x - anchor||^2 + <g, x> + u(x, anchor).
    fn solve_subproblem(&self, anchor: &Model, grad: &[f64], mu: f64) -> Result<Model>;
}

/// The trivial regularizer r = 0; the subproblem solution is the plain
/// gradient step anchor - g/mu.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroRegularizer;

impl SurrogateRegularizer for ZeroRegularizer {
    fn value(&self, _x: &Model) -> f64 {
        0.0
    }

    fn surrogate_value(&self, _x: &Model, _anchor: &Model) -> f64 {
        0.0
    }

    fn solve_subproblem(&self, anchor: &Model, grad: &[f64], mu: f64) -> Result<Model> {
        check_mu(mu)?;
        let values = anchor
            .values()
            .iter()
            .zip(grad)
            .map(|(y, g)| y - g / mu)
            .collect();
        Ok(anchor.with_values(values))
    }
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "subproblem weight mu must be positive, got {}",
            mu
        )));
    }
    Ok(())
}

/// Slack and anchor-equality data for one (x, y) sample.
#[derive(Clone, Copy, Debug)]
pub struct SurrogateSample {
    /// u(x, y) - r(x); negative values below -1e-12 violate majorization.
    pub slack: f64,
    /// |u(y, y) - r(y)|.
    pub anchor_error: f64,
}

/// Outcome of `check_surrogate_properties`.
#[derive(Clone, Debug)]
pub struct SurrogateReport {
    pub samples: Vec<SurrogateSample>,
    pub violations: usize,
    pub min_slack: f64,
    pub max_anchor_error: f64,
}

/// Evaluates the two defining surrogate properties on the given (x, y)
/// pairs: slack u(x,y) - r(x) per sample, and the anchored equality error
/// |u(y,y) - r(y)|. Samples with slack below -1e-12 are counted as
/// violations. Pure diagnostic.
pub fn check_surrogate_properties(
    s: &dyn SurrogateRegularizer,
    pairs: &[(Model, Model)],
) -> SurrogateReport {
    let mut samples = Vec::with_capacity(pairs.len());
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    let mut max_anchor_error: f64 = 0.0;
    for (x, y) in pairs {
        let slack = s.surrogate_value(x, y) - s.value(x);
        let anchor_error = (s.surrogate_value(y, y) - s.value(y)).abs();
        if slack < -1e-12 {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
        max_anchor_error = max_anchor_error.max(anchor_error);
        samples.push(SurrogateSample {
            slack,
            anchor_error,
        });
    }
    SurrogateReport {
        samples,
        violations,
        min_slack,
        max_anchor_error,
    }
}
