//! Stochastic gradient estimators with gradient-evaluation accounting.
//!
//! Randomness contract: every estimator consumes one seeded generator in a
//! fixed order per step. SAGA draws only the batch. SVRG and SARAH first draw
//! the refresh/restart Bernoulli and then, only on the minibatch branch, the
//! batch indices. Traces are therefore bit-reproducible per seed.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::problem::FiniteSumProblem;
use crate::theory::Method;
use rand::Rng;

/// An index batch: a list of (possibly repeated) component ids drawn i.i.d.
/// uniformly with replacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Batch {
    indices: Vec<usize>,
}

impl Batch {
    pub fn from_indices(indices: Vec<usize>) -> Self {
        Batch { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Distinct ids in ascending order.
    pub fn distinct(&self) -> Vec<usize> {
        let mut d = self.indices.clone();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Draws b i.i.d. uniform indices from [0, n) with replacement.
pub fn sample_batch<R: Rng>(rng: &mut R, n: usize, b: usize) -> Result<Batch> {
    if n == 0 {
        return Err(Error::Data("cannot sample from an empty dataset".into()));
    }
    if b == 0 {
        return Err(Error::InvalidParameter("batch size must be >= 1".into()));
    }
    let indices = (0..b).map(|_| rng.random_range(0..n)).collect();
    Ok(Batch { indices })
}

/// Stored per-component gradient information for SAGA.
///
/// Every entry starts as the shared initial vector (the full gradient at the
/// starting iterate) and is replaced on first commit. The compact form keeps
/// only the per-component coefficient and reconstructs the dense gradient
/// through the problem, which reproduces the dense form bit-for-bit.
#[derive(Clone, Debug)]
enum TableEntry {
    Initial,
    Dense(Vec<f64>),
    Coeff(Vec<f64>),
}

#[derive(Clone, Debug)]
struct SagaTable {
    compact: bool,
    init: Vec<f64>,
    entries: Vec<TableEntry>,
}

impl SagaTable {
    fn materialize(&self, i: usize, problem: &dyn FiniteSumProblem, out: &mut [f64]) {
        match &self.entries[i] {
            TableEntry::Initial => out.copy_from_slice(&self.init),
            TableEntry::Dense(row) => out.copy_from_slice(row),
            TableEntry::Coeff(c) => problem.reconstruct_grad(i, c, out),
        }
    }

    fn store(&mut self, i: usize, dense: &[f64], coeff: Option<&[f64]>) {
        self.entries[i] = if self.compact {
            TableEntry::Coeff(coeff.expect("compact table update without coefficient").to_vec())
        } else {
            TableEntry::Dense(dense.to_vec())
        };
    }
}

/// Fresh gradients computed by a SAGA estimate, kept so the commit can reuse
/// them instead of re-evaluating.
#[derive(Clone, Debug)]
struct PendingGradients {
    batch: Batch,
    /// (component id, dense gradient, compact coefficient) per distinct id,
    /// ascending.
    fresh: Vec<(usize, Vec<f64>, Option<Vec<f64>>)>,
}

/// SAGA estimator state: the stored gradient table and its running average v.
#[derive(Clone, Debug)]
pub struct SagaState {
    table: SagaTable,
    v: Vec<f64>,
    b: usize,
    evals: u64,
    pending: Option<PendingGradients>,
}

impl SagaState {
    /// Initializes the table with the full gradient at `x0` replicated to
    /// every component, and v to the same vector. Costs n gradient
    /// evaluations.
    pub fn init(
        problem: &dyn FiniteSumProblem,
        x0: &Model,
        b: usize,
        compact: bool,
    ) -> Result<Self> {
        let n = problem.component_count();
        if n == 0 {
            return Err(Error::Data("empty problem".into()));
        }
        if compact && problem.compact_coeff_len().is_none() {
            return Err(Error::Config(
                "problem has no compact gradient representation".into(),
            ));
        }
        let mut init = vec![0.0; problem.dim()];
        problem.full_grad(x0, &mut init);
        Ok(SagaState {
            v: init.clone(),
            table: SagaTable {
                compact,
                init,
                entries: vec![TableEntry::Initial; n],
            },
            b,
            evals: n as u64,
        pending: None,
        })
    }

    /// Rebuilds a state from explicit table rows; v is set to their mean.
    /// Useful for resuming and for exercising the estimator from arbitrary
    /// stored-gradient configurations.
    pub fn from_table(table: Vec<Vec<f64>>, b: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Data("empty table".into()));
        }
        let d = table[0].len();
        if table.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch("ragged table rows".into()));
        }
        let mut v = vec![0.0; d];
        for row in &table {
            for j in 0..d {
                v[j] += row[j];
            }
        }
        for j in 0..d {
            v[j] /= n as f64;
        }
        Ok(SagaState {
            table: SagaTable {
                compact: false,
                init: vec![0.0; d],
                entries: table.into_iter().map(TableEntry::Dense).collect(),
            },
            v,
            b,
            evals: 0,
            pending: None,
        })
    }

    pub fn batch_size(&self) -> usize {
        self.b
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// The SAGA estimate (1/b) * sum_{i in batch} (grad f_i(x) - table[i]) + v,
    /// summed over the multiset with multiplicity. Counts b evaluations and
    /// caches the fresh gradients for the following `commit`.
    pub fn estimate(
        &mut self,
        x: &Model,
        batch: &Batch,
        problem: &dyn FiniteSumProblem,
    ) -> Vec<f64> {
        let d = problem.dim();
        let fresh = self.compute_fresh(x, batch, problem);
        self.evals += batch.len() as u64;

        let mut acc = vec![0.0f64; d];
        let mut old = vec![0.0f64; d];
        for &idx in batch.indices() {
            let slot = fresh.iter().position(|(i, _, _)| *i == idx).unwrap();
            let new = &fresh[slot].1;
            self.table.materialize(idx, problem, &mut old);
            for j in 0..d {
                acc[j] += new[j] - old[j];
            }
        }
        let inv_b = 1.0 / batch.len() as f64;
        let mut out = vec![0.0f64; d];
        for j in 0..d {
            out[j] = acc[j] * inv_b + self.v[j];
        }
        self.pending = Some(PendingGradients {
            batch: batch.clone(),
            fresh,
        });
        out
    }

    /// Folds the fresh gradients of the batch into the table and the running
    /// average: for each distinct i, v += (grad f_i(x) - table[i]) / n and
    /// table[i] is replaced. Duplicated indices are applied once, which keeps
    /// v equal to the mean of the table. Reuses the gradients cached by
    /// `estimate` when the batch matches; otherwise they are recomputed (and
    /// counted).
    pub fn commit(&mut self, x: &Model, batch: &Batch, problem: &dyn FiniteSumProblem) {
        let d = problem.dim();
        let n = problem.component_count() as f64;
        let fresh = match self.pending.take() {
            Some(p) if p.batch == *batch => p.fresh,
            _ => {
                let fresh = self.compute_fresh(x, batch, problem);
                self.evals += fresh.len() as u64;
                fresh
            }
        };
        let mut old = vec![0.0f64; d];
        for (idx, dense, coeff) in &fresh {
            self.table.materialize(*idx, problem, &mut old);
            for j in 0..d {
                self.v[j] += (dense[j] - old[j]) / n;
            }
            self.table.store(*idx, dense, coeff.as_deref());
        }
    }

    /// Fresh gradient (and coefficient, in compact mode) per distinct batch
    /// index, ascending.
    fn compute_fresh(
        &self,
        x: &Model,
        batch: &Batch,
        problem: &dyn FiniteSumProblem,
    ) -> Vec<(usize, Vec<f64>, Option<Vec<f64>>)> {
        let d = problem.dim();
        batch
            .distinct()
            .into_iter()
            .map(|i| {
                let mut dense = vec![0.0f64; d];
                let coeff = if self.table.compact {
                    let mut c = vec![0.0f64; problem.compact_coeff_len().unwrap()];
                    problem.component_coeff(i, x, &mut c);
                    problem.reconstruct_grad(i, &c, &mut dense);
                    Some(c)
                } else {
                    problem.component_grad(i, x, &mut dense);
                    None
                };
                (i, dense, coeff)
            })
            .collect()
    }

    /// Mean-squared staleness (1/(bn)) * sum_i ||grad f_i(x) - table[i]||^2.
    /// Diagnostic; does not touch the evaluation counter.
    pub fn upsilon(&self, x: &Model, problem: &dyn FiniteSumProblem) -> f64 {
        let d = problem.dim();
        let n = problem.component_count();
        let mut fresh = vec![0.0f64; d];
        let mut old = vec![0.0f64; d];
        let mut total = 0.0;
        for i in 0..n {
            problem.component_grad(i, x, &mut fresh);
            self.table.materialize(i, problem, &mut old);
            total += fresh
                .iter()
                .zip(&old)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
        total / (self.b as f64 * n as f64)
    }

    /// Max-norm distance between v and the recomputed mean of the table.
    /// Re-asserts the running-average invariant.
    pub fn mean_drift(&self, problem: &dyn FiniteSumProblem) -> f64 {
        let d = self.v.len();
        let n = problem.component_count();
        let mut sum = vec![0.0f64; d];
        let mut row = vec![0.0f64; d];
        for i in 0..n {
            self.table.materialize(i, problem, &mut row);
            for j in 0..d {
                sum[j] += row[j];
            }
        }
        let mut drift = 0.0f64;
        for j in 0..d {
            drift = drift.max((self.v[j] - sum[j] / n as f64).abs());
        }
        drift
    }
}

/// Loop-less SVRG estimator state: a pivot iterate and its exact gradient.
#[derive(Clone, Debug)]
pub struct SvrgState {
    pivot: Model,
    pivot_grad: Vec<f64>,
    m: u64,
    b: usize,
    evals: u64,
}

impl SvrgState {
    /// Pivot starts at `x0` with its exact full gradient (n evaluations).
    pub fn init(problem: &dyn FiniteSumProblem, x0: &Model, m: u64, b: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("period m must be >= 1".into()));
        }
        let mut pivot_grad = vec![0.0; problem.dim()];
        problem.full_grad(x0, &mut pivot_grad);
        Ok(SvrgState {
            pivot: x0.clone(),
            pivot_grad,
            m,
            b,
            evals: problem.component_count() as u64,
        })
    }

    /// Rebuilds a state around an explicit pivot; its gradient is computed
    /// without touching the evaluation counter.
    pub fn from_pivot(
        problem: &dyn FiniteSumProblem,
        pivot: Model,
        m: u64,
        b: usize,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("period m must be >= 1".into()));
        }
        let mut pivot_grad = vec![0.0; problem.dim()];
        problem.full_grad(&pivot, &mut pivot_grad);
        Ok(SvrgState {
            pivot,
            pivot_grad,
            m,
            b,
            evals: 0,
        })
    }

    pub fn pivot(&self) -> &Model {
        &self.pivot
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    /// One estimator step. Draws the refresh Bernoulli first; on refresh the
    /// pivot moves to x and the exact gradient is returned directly (the two
    /// batch sums of the estimator cancel when the pivot equals the iterate,
    /// so no component draws are spent). Returns the estimate and whether a
    /// refresh happened.
    pub fn estimate<R: Rng>(
        &mut self,
        x: &Model,
        rng: &mut R,
        problem: &dyn FiniteSumProblem,
    ) -> Result<(Vec<f64>, bool)> {
        let refresh = rng.random::<f64>() < 1.0 / self.m as f64;
        if refresh {
            self.pivot = x.clone();
            problem.full_grad(x, &mut self.pivot_grad);
            self.evals += problem.component_count() as u64;
            Ok((self.pivot_grad.clone(), true))
        } else {
            let batch = sample_batch(rng, problem.component_count(), self.b)?;
            Ok((self.estimate_with_batch(x, &batch, problem), false))
        }
    }

    /// The minibatch branch with an explicit batch:
    /// (1/b) * sum_{i in batch} (grad f_i(x) - grad f_i(pivot)) + grad f(pivot).
    /// Counts 2b evaluations.
    pub fn estimate_with_batch(
        &mut self,
        x: &Model,
        batch: &Batch,
        problem: &dyn FiniteSumProblem,
    ) -> Vec<f64> {
        let d = problem.dim();
        let mut acc = vec![0.0f64; d];
        let mut at_x = vec![0.0f64; d];
        let mut at_pivot = vec![0.0f64; d];
        for &i in batch.indices() {
            problem.component_grad(i, x, &mut at_x);
            problem.component_grad(i, &self.pivot, &mut at_pivot);
            for j in 0..d {
                acc[j] += at_x[j] - at_pivot[j];
            }
        }
        self.evals += 2 * batch.len() as u64;
        let inv_b = 1.0 / batch.len() as f64;
        (0..d).map(|j| acc[j] * inv_b + self.pivot_grad[j]).collect()
    }

    /// (1/(bn)) * sum_i ||grad f_i(x) - grad f_i(pivot)||^2. Diagnostic,
    /// uncounted.
    pub fn upsilon(&self, x: &Model, problem: &dyn FiniteSumProblem) -> f64 {
        let d = problem.dim();
        let n = problem.component_count();
        let mut at_x = vec![0.0f64; d];
        let mut at_pivot = vec![0.0f64; d];
        let mut total = 0.0;
        for i in 0..n {
            problem.component_grad(i, x, &mut at_x);
            problem.component_grad(i, &self.pivot, &mut at_pivot);
            total += at_x
                .iter()
                .zip(&at_pivot)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
        total / (self.b as f64 * n as f64)
    }
}

/// Loop-less SARAH estimator state: the previous estimate and iterate of the
/// recursion.
#[derive(Clone, Debug)]
pub struct SarahState {
    prev_estimate: Vec<f64>,
    prev_model: Model,
    m: u64,
    b: usize,
    evals: u64,
}

impl SarahState {
    /// Starts the recursion with the exact gradient at `x0` (n evaluations).
    pub fn init(problem: &dyn FiniteSumProblem, x0: &Model, m: u64, b: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("period m must be >= 1".into()));
        }
        let mut prev_estimate = vec![0.0; problem.dim()];
        problem.full_grad(x0, &mut prev_estimate);
        Ok(SarahState {
            prev_estimate,
            prev_model: x0.clone(),
            m,
            b,
            evals: problem.component_count() as u64,
        })
    }

    /// Rebuilds a state from an explicit (previous iterate, previous
    /// estimate) pair.
    pub fn from_parts(prev_model: Model, prev_estimate: Vec<f64>, m: u64, b: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("period m must be >= 1".into()));
        }
        if prev_model.len() != prev_estimate.len() {
            return Err(Error::DimensionMismatch(
                "estimate length differs from model length".into(),
            ));
        }
        Ok(SarahState {
            prev_estimate,
            prev_model,
            m,
            b,
            evals: 0,
        })
    }

    pub fn prev_estimate(&self) -> &[f64] {
        &self.prev_estimate
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    /// One estimator step. Draws the restart Bernoulli first: with
    /// probability 1/m the exact gradient at x restarts the recursion
    /// (n evaluations); otherwise the recursive minibatch correction is
    /// applied (2b evaluations). The state advances on both branches.
    pub fn estimate<R: Rng>(
        &mut self,
        x: &Model,
        rng: &mut R,
        problem: &dyn FiniteSumProblem,
    ) -> Result<(Vec<f64>, bool)> {
        let restart = rng.random::<f64>() < 1.0 / self.m as f64;
        if restart {
            let mut g = vec![0.0; problem.dim()];
            problem.full_grad(x, &mut g);
            self.evals += problem.component_count() as u64;
            self.prev_estimate = g.clone();
            self.prev_model = x.clone();
            Ok((g, true))
        } else {
            let batch = sample_batch(rng, problem.component_count(), self.b)?;
            Ok((self.estimate_with_batch(x, &batch, problem), false))
        }
    }

    /// The recursive branch with an explicit batch:
    /// (1/b) * sum_{i in batch} (grad f_i(x) - grad f_i(x_prev)) + prev_estimate,
    /// then the state advances to (x, returned estimate). Counts 2b
    /// evaluations.
    pub fn estimate_with_batch(
        &mut self,
        x: &Model,
        batch: &Batch,
        problem: &dyn FiniteSumProblem,
    ) -> Vec<f64> {
        let d = problem.dim();
        let mut acc = vec![0.0f64; d];
        let mut at_x = vec![0.0f64; d];
        let mut at_prev = vec![0.0f64; d];
        for &i in batch.indices() {
            problem.component_grad(i, x, &mut at_x);
            problem.component_grad(i, &self.prev_model, &mut at_prev);
            for j in 0..d {
                acc[j] += at_x[j] - at_prev[j];
            }
        }
        self.evals += 2 * batch.len() as u64;
        let inv_b = 1.0 / batch.len() as f64;
        let out: Vec<f64> = (0..d)
            .map(|j| acc[j] * inv_b + self.prev_estimate[j])
            .collect();
        self.prev_estimate = out.clone();
        self.prev_model = x.clone();
        out
    }

    /// ||prev_estimate - grad f(prev_model)||^2. Diagnostic, uncounted.
    pub fn upsilon(&self, problem: &dyn FiniteSumProblem) -> f64 {
        let mut g = vec![0.0; problem.dim()];
        problem.full_grad(&self.prev_model, &mut g);
        self.prev_estimate
            .iter()
            .zip(&g)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// The exact full gradient as a (deterministic) estimator.
#[derive(Clone, Debug, Default)]
pub struct FullState {
    evals: u64,
}

impl FullState {
    pub fn evals(&self) -> u64 {
        self.evals
    }

    /// grad f(x); counts n evaluations.
    pub fn estimate(&mut self, x: &Model, problem: &dyn FiniteSumProblem) -> Vec<f64> {
        let mut g = vec![0.0; problem.dim()];
        problem.full_grad(x, &mut g);
        self.evals += problem.component_count() as u64;
        g
    }
}

/// Exact full gradient of the problem at x, counted against `evals`.
pub fn full_estimate(x: &Model, problem: &dyn FiniteSumProblem, evals: &mut u64) -> Vec<f64> {
    let mut g = vec![0.0; problem.dim()];
    problem.full_grad(x, &mut g);
    *evals += problem.component_count() as u64;
    g
}

/// Result of one estimator step inside the solver loop.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub grad: Vec<f64>,
    /// True when the step spent a full gradient pass (refresh, restart, or
    /// the full-gradient method itself).
    pub full_pass: bool,
}

/// Uniform driver over the four estimator kinds, owned by one solver run.
#[derive(Clone, Debug)]
pub enum EstimatorState {
    Saga(SagaState),
    Svrg(SvrgState),
    Sarah(SarahState),
    Full(FullState),
}

impl EstimatorState {
    pub fn init(
        method: Method,
        problem: &dyn FiniteSumProblem,
        x0: &Model,
        b: usize,
        m: Option<u64>,
        compact: bool,
    ) -> Result<Self> {
        Ok(match method {
            Method::Saga => EstimatorState::Saga(SagaState::init(problem, x0, b, compact)?),
            Method::Svrg => EstimatorState::Svrg(SvrgState::init(
                problem,
                x0,
                m.ok_or_else(|| Error::Config("svrg needs a period m".into()))?,
                b,
            )?),
            Method::Sarah => EstimatorState::Sarah(SarahState::init(
                problem,
                x0,
                m.ok_or_else(|| Error::Config("sarah needs a period m".into()))?,
                b,
            )?),
            Method::Full => EstimatorState::Full(FullState::default()),
        })
    }

    pub fn method(&self) -> Method {
        match self {
            EstimatorState::Saga(_) => Method::Saga,
            EstimatorState::Svrg(_) => Method::Svrg,
            EstimatorState::Sarah(_) => Method::Sarah,
            EstimatorState::Full(_) => Method::Full,
        }
    }

    pub fn evals(&self) -> u64 {
        match self {
            EstimatorState::Saga(s) => s.evals(),
            EstimatorState::Svrg(s) => s.evals(),
            EstimatorState::Sarah(s) => s.evals(),
            EstimatorState::Full(s) => s.evals(),
        }
    }

    /// One estimate at x, consuming the run generator per the randomness
    /// contract above.
    pub fn estimate<R: Rng>(
        &mut self,
        x: &Model,
        rng: &mut R,
        problem: &dyn FiniteSumProblem,
    ) -> Result<StepOutcome> {
        match self {
            EstimatorState::Saga(s) => {
                let batch = sample_batch(rng, problem.component_count(), s.batch_size())?;
                let grad = s.estimate(x, &batch, problem);
                Ok(StepOutcome {
                    grad,
                    full_pass: false,
                })
            }
            EstimatorState::Svrg(s) => {
                let (grad, refreshed) = s.estimate(x, rng, problem)?;
                Ok(StepOutcome {
                    grad,
                    full_pass: refreshed,
                })
            }
            EstimatorState::Sarah(s) => {
                let (grad, restarted) = s.estimate(x, rng, problem)?;
                Ok(StepOutcome {
                    grad,
                    full_pass: restarted,
                })
            }
            EstimatorState::Full(s) => Ok(StepOutcome {
                grad: s.estimate(x, problem),
                full_pass: true,
            }),
        }
    }

    /// Post-step bookkeeping at the iterate the estimate was taken at.
    /// Only SAGA has any: folding the cached batch gradients into its table.
    pub fn commit(&mut self, x: &Model, problem: &dyn FiniteSumProblem) {
        if let EstimatorState::Saga(s) = self {
            if let Some(batch) = s.pending.as_ref().map(|p| p.batch.clone()) {
                s.commit(x, &batch, problem);
            }
        }
    }

    /// The method's mean-squared gradient staleness at x. Errors for the
    /// full-gradient method, which stores nothing.
    pub fn upsilon(&self, x: &Model, problem: &dyn FiniteSumProblem) -> Result<f64> {
        match self {
            EstimatorState::Saga(s) => Ok(s.upsilon(x, problem)),
            EstimatorState::Svrg(s) => Ok(s.upsilon(x, problem)),
            EstimatorState::Sarah(s) => Ok(s.upsilon(problem)),
            EstimatorState::Full(_) => Err(Error::InvalidMethod(
                "the full-gradient method has no staleness diagnostic".into(),
            )),
        }
    }
}

/// The method's mean-squared gradient staleness at x (see `e.upsilon`).
pub fn compute_upsilon(
    state: &EstimatorState,
    x: &Model,
    problem: &dyn FiniteSumProblem,
) -> Result<f64> {
    state.upsilon(x, problem)
}
