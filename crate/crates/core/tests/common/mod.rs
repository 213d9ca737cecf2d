//! Shared oracles for the integration suites: finite differences, brute-force
//! subproblem search, and seeded random models. These stay independent of the
//! library's own gradient and prox paths.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use svrmm::model::Model;
use svrmm::problem::FiniteSumProblem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec<R: Rng>(rng: &mut R, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-scale..scale)).collect()
}

pub fn random_model<R: Rng>(rng: &mut R, len: usize, scale: f64) -> Model {
    Model::from_vec(random_vec(rng, len, scale))
}

/// Central finite differences of the component loss, step scaled per
/// coordinate as h = base * (1 + |x_j|).
pub fn central_fd_grad(
    p: &dyn FiniteSumProblem,
    i: usize,
    x: &Model,
    base_step: f64,
) -> Vec<f64> {
    let d = p.dim();
    let mut out = vec![0.0; d];
    let mut probe = x.clone();
    for j in 0..d {
        let h = base_step * (1.0 + x[j].abs());
        let orig = probe[j];
        probe[j] = orig + h;
        let up = p.component_loss(i, &probe);
        probe[j] = orig - h;
        let down = p.component_loss(i, &probe);
        probe[j] = orig;
        out[j] = (up - down) / (2.0 * h);
    }
    out
}

/// Relative error between an analytic gradient and its finite-difference
/// estimate, measured on vector norms.
pub fn fd_relative_error(analytic: &[f64], fd: &[f64]) -> f64 {
    let diff: f64 = analytic
        .iter()
        .zip(fd)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt();
    diff / scale.max(1.0)
}

/// Random-search minimum of `objective` over the box [lo, hi], including the
/// box corners and the candidate point itself.
pub fn brute_force_search(
    objective: impl Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    candidate: &[f64],
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let d = lo.len();
    let mut best = objective(candidate);
    let mut point = vec![0.0; d];
    // always try the origin and the box midpoint
    best = best.min(objective(&vec![0.0; d]));
    for j in 0..d {
        point[j] = 0.5 * (lo[j] + hi[j]);
    }
    best = best.min(objective(&point));
    for _ in 0..samples {
        for j in 0..d {
            point[j] = rng.random_range(lo[j]..hi[j]);
        }
        best = best.min(objective(&point));
    }
    best
}
