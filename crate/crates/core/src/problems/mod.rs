//! Finite-sum classification problems with analytic gradients.

mod accuracy;
mod binary;
mod mlp;
mod multiclass;

pub use accuracy::{predict_accuracy, Classifier};
pub use binary::{binary_smoothness, BinaryNonconvexProblem, BINARY_CURVATURE_FACTOR};
pub use mlp::{estimate_curvature_bound, MlpProblem};
pub use multiclass::{multiclass_smoothness, softmax_residual, MulticlassLogisticProblem};
