//! Surrogate constructions for general regularizer classes: weakly convex
//! functions with an exact prox, smooth functions, and differences of convex
//! functions.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::surrogate::{check_mu, SurrogateRegularizer};

/// A term psi with an exact proximal map argmin_x (1/2)||x - v||^2 + t*psi(x).
pub trait ProxOperator: Sync {
    fn value(&self, x: &Model) -> f64;
    fn prox(&self, v: &Model, t: f64) -> Model;
}

/// A differentiable term with a gradient oracle.
pub trait SmoothTerm: Sync {
    fn value(&self, x: &Model) -> f64;
    fn grad(&self, x: &Model) -> Vec<f64>;
}

/// weight * ||x||_1.
#[derive(Clone, Copy, Debug)]
pub struct L1Norm {
    pub weight: f64,
}

impl ProxOperator for L1Norm {
    fn value(&self, x: &Model) -> f64 {
        self.weight * x.values().iter().map(|v| v.abs()).sum::<f64>()
    }

    fn prox(&self, v: &Model, t: f64) -> Model {
        let theta = self.weight * t;
        let values = v
            .values()
            .iter()
            .map(|&vi| super::exp_l1::soft_threshold(vi, theta))
            .collect();
        v.with_values(values)
    }
}

/// (weight/2) * ||x||^2; smooth with gradient weight*x and prox v/(1 + weight*t).
#[derive(Clone, Copy, Debug)]
pub struct SquaredL2 {
    pub weight: f64,
}

impl SmoothTerm for SquaredL2 {
    fn value(&self, x: &Model) -> f64 {
        0.5 * self.weight * x.norm_sq()
    }

    fn grad(&self, x: &Model) -> Vec<f64> {
        x.values().iter().map(|v| self.weight * v).collect()
    }
}

impl ProxOperator for SquaredL2 {
    fn value(&self, x: &Model) -> f64 {
        0.5 * self.weight * x.norm_sq()
    }

    fn prox(&self, v: &Model, t: f64) -> Model {
        let scale = 1.0 / (1.0 + self.weight * t);
        v.with_values(v.values().iter().map(|vi| vi * scale).collect())
    }
}

/// Surrogate for an alpha-weakly convex r (alpha <= 0):
/// u(x, y) = r(x) + (-alpha/2)*||x - y||^2. The subproblem collapses to a
/// prox of r at curvature mu - alpha.
#[derive(Clone, Debug)]
pub struct ProximalSurrogate<P: ProxOperator> {
    inner: P,
    weak_convexity: f64,
}

impl<P: ProxOperator> ProximalSurrogate<P> {
    pub fn new(inner: P, weak_convexity: f64) -> Result<Self> {
        if weak_convexity > 0.0 {
            return Err(Error::InvalidParameter(
                "weak-convexity modulus must be <= 0".into(),
            ));
        }
        Ok(ProximalSurrogate {
            inner,
            weak_convexity,
        })
    }
}

impl<P: ProxOperator> SurrogateRegularizer for ProximalSurrogate<P> {
    fn value(&self, x: &Model) -> f64 {
        self.inner.value(x)
    }

    fn surrogate_value(&self, x: &Model, anchor: &Model) -> f64 {
        self.inner.value(x) + 0.5 * (-self.weak_convexity) * x.dist_sq(anchor)
    }

    fn solve_subproblem(&self, anchor: &Model, grad: &[f64], mu: f64) -> Result<Model> {
        check_mu(mu)?;
        let kappa = mu - self.weak_convexity;
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "subproblem is not strongly convex: mu - alpha = {}",
                kappa
            )));
        }
        let shifted = anchor.with_values(
            anchor
                .values()
                .iter()
                .zip(grad)
                .map(|(y, g)| y - g / kappa)
                .collect(),
        );
        Ok(self.inner.prox(&shifted, 1.0 / kappa))
    }
}

/// Surrogate for an L-smooth r:
/// u(x, y) = r(y) + <grad r(y), x - y> + (rho/2)*||x - y||^2 with rho >= L.
/// The subproblem is the linear solve x = y - (g + grad r(y)) / (mu + rho).
#[derive(Clone, Debug)]
pub struct LipschitzGradientSurrogate<S: SmoothTerm> {
    inner: S,
    rho: f64,
}

impl<S: SmoothTerm> LipschitzGradientSurrogate<S> {
    pub fn new(inner: S, rho: f64) -> Result<Self> {
        if !(rho >= 0.0) {
            return Err(Error::InvalidParameter(
                "curvature bound rho must be >= 0".into(),
            ));
        }
        Ok(LipschitzGradientSurrogate { inner, rho })
    }
}

impl<S: SmoothTerm> SurrogateRegularizer for LipschitzGradientSurrogate<S> {
    fn value(&self, x: &Model) -> f64 {
        self.inner.value(x)
    }

    fn surrogate_value(&self, x: &Model, anchor: &Model) -> f64 {
        let g = self.inner.grad(anchor);
        let linear: f64 = g
            .iter()
            .zip(x.values().iter().zip(anchor.values()))
            .map(|(gj, (xj, yj))| gj * (xj - yj))
            .sum();
        self.inner.value(anchor) + linear + 0.5 * self.rho * x.dist_sq(anchor)
    }

    fn solve_subproblem(&self, anchor: &Model, grad: &[f64], mu: f64) -> Result<Model> {
        check_mu(mu)?;
        let rg = self.inner.grad(anchor);
        let denom = mu + self.rho;
        let values = anchor
            .values()
            .iter()
            .zip(grad.iter().zip(&rg))
            .map(|(y, (g, r))| y - (g + r) / denom)
            .collect();
        Ok(anchor.with_values(values))
    }
}

/// Surrogate for a difference of convex functions r = r1 - r2 with r2 smooth:
/// u(x, y) = r1(x) - [<grad r2(y), x - y> + r2(y)]. The subproblem is a prox
/// of r1 at the gradient-corrected point.
#[derive(Clone, Debug)]
pub struct DcSurrogate<P: ProxOperator, S: SmoothTerm> {
    convex_part: P,
    concave_part: S,
}

impl<P: ProxOperator, S: SmoothTerm> DcSurrogate<P, S> {
    pub fn new(convex_part: P, concave_part: S) -> Self {
        DcSurrogate {
            convex_part,
            concave_part,
        }
    }
}

impl<P: ProxOperator, S: SmoothTerm> SurrogateRegularizer for DcSurrogate<P, S> {
    fn value(&self, x: &Model) -> f64 {
        self.convex_part.value(x) - self.concave_part.value(x)
    }

    fn surrogate_value(&self, x: &Model, anchor: &Model) -> f64 {
        let g2 = self.concave_part.grad(anchor);
        let linear: f64 = g2
            .iter()
            .zip(x.values().iter().zip(anchor.values()))
            .map(|(gj, (xj, yj))| gj * (xj - yj))
            .sum();
        self.convex_part.value(x) - linear - self.concave_part.value(anchor)
    }

    fn solve_subproblem(&self, anchor: &Model, grad: &[f64], mu: f64) -> Result<Model> {
        check_mu(mu)?;
        let g2 = self.concave_part.grad(anchor);
        let shifted = anchor.with_values(
            anchor
                .values()
                .iter()
                .zip(grad.iter().zip(&g2))
                .map(|(y, (g, r))| y - (g - r) / mu)
                .collect(),
        );
        Ok(self.convex_part.prox(&shifted, 1.0 / mu))
    }
}
