//! The finite-sum problem interface: f(x) = (1/n) * sum_i f_i(x).

use crate::model::Model;

/// A finite sum of differentiable component losses. Implementations must be
/// pure in `component_loss`/`component_grad` so callers may evaluate batches
/// concurrently.
pub trait FiniteSumProblem: Sync {
    /// Number of components n.
    fn component_count(&self) -> usize;

    /// Flat model dimension.
    fn dim(&self) -> usize;

    /// f_i(x).
    fn component_loss(&self, i: usize, x: &Model) -> f64;

    /// Writes the dense gradient of f_i at x into `out` (every entry of
    /// `out` is overwritten). `out.len()` must equal `dim()`.
    fn component_grad(&self, i: usize, x: &Model, out: &mut [f64]);

    /// Writes the exact mean of component gradients into `out`, using
    /// compensated summation so the result tracks the arithmetic mean of
    /// `component_grad` calls to well below 1e-10.
    fn full_grad(&self, x: &Model, out: &mut [f64]) {
        let n = self.component_count();
        let d = self.dim();
        debug_assert_eq!(out.len(), d);
        let mut sum = vec![0.0f64; d];
        let mut comp = vec![0.0f64; d];
        let mut g = vec![0.0f64; d];
        for i in 0..n {
            self.component_grad(i, x, &mut g);
            for j in 0..d {
                // Kahan step
                let y = g[j] - comp[j];
                let t = sum[j] + y;
                comp[j] = (t - sum[j]) - y;
                sum[j] = t;
            }
        }
        let inv = 1.0 / n as f64;
        for j in 0..d {
            out[j] = sum[j] * inv;
        }
    }

    /// Mean component loss, compensated the same way as `full_grad`.
    fn mean_loss(&self, x: &Model) -> f64 {
        let n = self.component_count();
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for i in 0..n {
            let y = self.component_loss(i, x) - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum / n as f64
    }

    /// The constant L of the averaged smoothness bound
    /// (1/n) sum_i ||grad f_i(x) - grad f_i(y)||^2 <= L^2 ||x - y||^2,
    /// when known analytically.
    fn smoothness_constant(&self) -> Option<f64>;

    /// Length of the per-component compact gradient coefficient, when the
    /// problem supports reconstructing grad f_i(x) from a small coefficient
    /// vector and the data row (e.g. a scalar loss derivative times a_i).
    fn compact_coeff_len(&self) -> Option<usize> {
        None
    }

    /// Writes the compact coefficient of component i at x into `out`
    /// (length `compact_coeff_len()`). Only called when supported.
    fn component_coeff(&self, _i: usize, _x: &Model, _out: &mut [f64]) {
        unimplemented!("problem has no compact gradient representation")
    }

    /// Reconstructs the dense gradient of component i from a stored compact
    /// coefficient, overwriting `out`. Must reproduce `component_grad`
    /// bit-for-bit when given the coefficient computed at the same iterate.
    fn reconstruct_grad(&self, _i: usize, _coeff: &[f64], _out: &mut [f64]) {
        unimplemented!("problem has no compact gradient representation")
    }

    /// Starting iterate. Most problems start at zero; problems without a
    /// natural zero start (e.g. networks) override this with a seeded
    /// initializer.
    fn initial_point(&self, _seed: u64) -> Model {
        Model::zeros(self.dim())
    }
}
