//! Concrete regularizers with exact closed-form subproblem solvers.

mod exp_group;
mod exp_l1;
mod generic;

pub use exp_group::ExponentialPenaltyGroupL2;
pub use exp_l1::ExponentialPenaltyL1;
pub use generic::{
    DcSurrogate, L1Norm, LipschitzGradientSurrogate, ProxOperator, ProximalSurrogate, SmoothTerm,
    SquaredL2,
};
