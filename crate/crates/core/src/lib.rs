//! Stochastic variance-reduced majorization-minimization solvers for
//! nonconvex nonsmooth finite-sum problems F(x) = f(x) + r(x).
//!
//! The crate provides:
//! - minibatch gradient estimators (SAGA, loop-less SVRG, loop-less SARAH)
//!   with exact evaluation accounting ([`estimators`]);
//! - regularizers with exact closed-form anchored subproblem solvers,
//!   including the exponential l1 and row-group penalties ([`surrogates`]);
//! - three classification problems with analytic gradients and smoothness
//!   constants ([`problems`]);
//! - LIBSVM-format ingestion, splitting, and scaling ([`data`]);
//! - the solver loop with parameter selection and the step-size feasibility
//!   check ([`solver`]).

pub mod data;
pub mod error;
pub mod estimators;
pub mod model;
pub mod problem;
pub mod problems;
pub mod solver;
pub mod surrogate;
pub mod surrogates;
pub mod synth;
pub mod testing;
pub mod theory;

pub use error::{Error, Result};
pub use model::Model;
pub use problem::FiniteSumProblem;
pub use surrogate::{check_surrogate_properties, SurrogateRegularizer, ZeroRegularizer};
pub use theory::{Method, TheoryConstants};
