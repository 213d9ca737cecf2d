//! Seeded synthetic classification datasets for benchmarks and tests.

use crate::data::{Dataset, SparseRow};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Linearly separable binary data with boundary-concentrated label noise:
/// rows are dense Gaussian vectors scaled by 1/sqrt(d); labels follow a
/// hidden separator perturbed by logistic noise of temperature `noise`
/// (relative to the margin spread), so points near the boundary flip often
/// and points deep inside a class almost never do. `noise = 0` gives exactly
/// separable data.
pub fn synthetic_binary(n: usize, d: usize, noise: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let separator: Vec<f64> = (0..d).map(|_| gaussian(&mut rng)).collect();
    let scale = 1.0 / (d as f64).sqrt();
    let mut rows = Vec::with_capacity(n);
    let mut margins = Vec::with_capacity(n);
    for _ in 0..n {
        let values: Vec<f64> = (0..d).map(|_| gaussian(&mut rng) * scale).collect();
        let margin: f64 = values.iter().zip(&separator).map(|(a, w)| a * w).sum();
        rows.push(SparseRow::new((0..d as u32).collect(), values).unwrap());
        margins.push(margin);
    }
    let spread = (margins.iter().map(|m| m * m).sum::<f64>() / n as f64)
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let labels = margins
        .iter()
        .map(|m| {
            let jitter = if noise > 0.0 {
                let u: f64 = rng.random::<f64>().clamp(1e-12, 1.0 - 1e-12);
                noise * spread * (u / (1.0 - u)).ln()
            } else {
                0.0
            };
            if m + jitter >= 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    Dataset::new(rows, labels, d, 2).unwrap()
}

/// Multiclass blobs: q hidden class centers, labels follow the nearest
/// center's index and flip to a random class with probability `flip_prob`.
pub fn synthetic_multiclass(n: usize, d: usize, q: usize, flip_prob: f64, seed: u64) -> Dataset {
    assert!(q >= 2, "need at least two classes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..q)
        .map(|_| (0..d).map(|_| gaussian(&mut rng)).collect())
        .collect();
    let scale = 1.0 / (d as f64).sqrt();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let class = rng.random_range(0..q);
        let values: Vec<f64> = centers[class]
            .iter()
            .map(|c| (c + 0.5 * gaussian(&mut rng)) * scale)
            .collect();
        let mut label = class as i32;
        if rng.random::<f64>() < flip_prob {
            label = rng.random_range(0..q) as i32;
        }
        rows.push(SparseRow::new((0..d as u32).collect(), values).unwrap());
        labels.push(label);
    }
    Dataset::new(rows, labels, d, q).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_generation_is_seeded() {
        let a = synthetic_binary(50, 10, 0.05, 7);
        let b = synthetic_binary(50, 10, 0.05, 7);
        assert_eq!(a, b);
        assert_eq!(a.n(), 50);
        assert_eq!(a.dim(), 10);
        assert_eq!(a.class_count(), 2);
    }

    #[test]
    fn multiclass_labels_cover_declared_range() {
        let ds = synthetic_multiclass(200, 5, 4, 0.1, 3);
        assert_eq!(ds.class_count(), 4);
        assert!((0..ds.n()).all(|i| ds.class_index(i) < 4));
    }
}
