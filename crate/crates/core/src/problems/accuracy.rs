//! Test-set classification accuracy.

use crate::data::{dot, Dataset, SparseRow};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::problems::{BinaryNonconvexProblem, MlpProblem, MulticlassLogisticProblem};

/// Maps a model and an observation to a canonical class id.
pub trait Classifier {
    fn predict(&self, model: &Model, row: &SparseRow) -> usize;
}

impl Classifier for BinaryNonconvexProblem {
    /// sign(a^T w), with a zero margin mapped to the positive class.
    fn predict(&self, model: &Model, row: &SparseRow) -> usize {
        let s = dot(row, model.values()).expect("row/model dimension mismatch");
        if s >= 0.0 {
            1
        } else {
            0
        }
    }
}

impl Classifier for MulticlassLogisticProblem {
    fn predict(&self, model: &Model, row: &SparseRow) -> usize {
        let q = self.class_count();
        let vals = model.values();
        let mut scores = vec![0.0f64; q];
        for (j, v) in row.iter() {
            for (s, w) in scores.iter_mut().zip(&vals[j * q..(j + 1) * q]) {
                *s += v * w;
            }
        }
        argmax(&scores)
    }
}

impl Classifier for MlpProblem {
    fn predict(&self, model: &Model, row: &SparseRow) -> usize {
        argmax(&self.scores_for_row(row, model))
    }
}

/// Index of the largest score; the lowest class index wins ties.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

/// Fraction of `test` examples the model classifies correctly.
pub fn predict_accuracy<C: Classifier>(
    classifier: &C,
    model: &Model,
    test: &Dataset,
) -> Result<f64> {
    if test.n() == 0 {
        return Err(Error::Data("empty test set".into()));
    }
    let correct = (0..test.n())
        .filter(|&i| classifier.predict(model, test.row(i)) == test.class_index(i))
        .count();
    Ok(correct as f64 / test.n() as f64)
}
