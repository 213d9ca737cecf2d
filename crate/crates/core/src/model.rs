//! Dense iterate storage.

use crate::error::{Error, Result};

/// Dense parameter vector. Multiclass problems store a `rows x cols` matrix
/// flattened row-major (feature-major), so the per-feature coefficient block
/// `W_i` is the contiguous slice `row(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    values: Vec<f64>,
    cols: usize,
}

impl Model {
    /// Zero vector of length `len`.
    pub fn zeros(len: usize) -> Self {
        Model {
            values: vec![0.0; len],
            cols: 1,
        }
    }

    /// Zero matrix with `rows` rows of `cols` entries, flattened row-major.
    pub fn zeros_matrix(rows: usize, cols: usize) -> Self {
        assert!(cols >= 1, "matrix model needs at least one column");
        Model {
            values: vec![0.0; rows * cols],
            cols,
        }
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        Model { values, cols: 1 }
    }

    pub fn matrix_from_vec(values: Vec<f64>, cols: usize) -> Result<Self> {
        if cols == 0 || values.len() % cols != 0 {
            return Err(Error::DimensionMismatch(format!(
                "length {} is not a multiple of column count {}",
                values.len(),
                cols
            )));
        }
        Ok(Model { values, cols })
    }

    /// Same shape as `self`, all zeros.
    pub fn zeros_like(&self) -> Self {
        Model {
            values: vec![0.0; self.values.len()],
            cols: self.cols,
        }
    }

    /// New model with `self`'s shape and the given flat values.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Model {
            values,
            cols: self.cols,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.values.len() / self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Row `i` as a contiguous slice of `cols` entries.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.cols..(i + 1) * self.cols]
    }

    /// True when every entry is finite (no NaN/Inf).
    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist_sq(&self, other: &Model) -> f64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

impl std::ops::Index<usize> for Model {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl std::ops::IndexMut<usize> for Model {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.values[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_layout_is_feature_major() {
        let mut w = Model::zeros_matrix(3, 2);
        w.row_mut(1).copy_from_slice(&[4.0, 5.0]);
        assert_eq!(w.values(), &[0.0, 0.0, 4.0, 5.0, 0.0, 0.0]);
        assert_eq!(w.row(1), &[4.0, 5.0]);
        assert_eq!(w.rows(), 3);
    }

    #[test]
    fn finiteness_check() {
        let mut m = Model::zeros(2);
        assert!(m.all_finite());
        m[1] = f64::NAN;
        assert!(!m.all_finite());
    }

    #[test]
    fn matrix_from_vec_rejects_ragged() {
        assert!(Model::matrix_from_vec(vec![1.0, 2.0, 3.0], 2).is_err());
    }
}
