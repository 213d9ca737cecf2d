//! Sparse rows, labeled datasets, and LIBSVM-format ingestion.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};

/// One observation vector stored as sorted (index, value) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRow {
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseRow {
    /// Builds a row from parallel index/value lists. Indices must be strictly
    /// increasing; explicit zeros are allowed but discouraged.
    pub fn new(indices: Vec<u32>, values: Vec<f64>) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} indices vs {} values",
                indices.len(),
                values.len()
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Data(
                "sparse row indices must be strictly increasing".into(),
            ));
        }
        Ok(SparseRow { indices, values })
    }

    pub fn empty() -> Self {
        SparseRow {
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, &v)| (i as usize, v))
    }

    /// Largest stored feature index, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.indices.last().map(|&i| i as usize)
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    fn scale_values(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }
}

/// Inner product of a sparse row with a dense vector.
pub fn dot(row: &SparseRow, x: &[f64]) -> Result<f64> {
    // indices are sorted, so the last one bounds them all
    if let Some(max) = row.max_index() {
        if max >= x.len() {
            return Err(Error::DimensionMismatch(format!(
                "row index {} out of range for dense vector of length {}",
                max,
                x.len()
            )));
        }
    }
    Ok(row
        .indices
        .iter()
        .zip(&row.values)
        .map(|(&i, &v)| v * x[i as usize])
        .sum())
}

/// Labeled sparse dataset. Binary datasets (`q == 2`) store labels as -1/+1;
/// datasets with three or more classes store contiguous class ids `0..q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    rows: Vec<SparseRow>,
    labels: Vec<i32>,
    d: usize,
    q: usize,
    /// Original label value for each canonical class, in class order.
    label_map: Vec<i64>,
}

impl Dataset {
    pub fn new(rows: Vec<SparseRow>, labels: Vec<i32>, d: usize, q: usize) -> Result<Self> {
        let label_map = if q == 2 {
            vec![-1, 1]
        } else {
            (0..q as i64).collect()
        };
        Self::with_label_map(rows, labels, d, q, label_map)
    }

    pub fn with_label_map(
        rows: Vec<SparseRow>,
        labels: Vec<i32>,
        d: usize,
        q: usize,
        label_map: Vec<i64>,
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Data(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            let valid = if q == 2 {
                *label == -1 || *label == 1
            } else {
                (0..q as i32).contains(label)
            };
            if !valid {
                return Err(Error::Data(format!(
                    "label {} at row {} invalid for q={}",
                    label, i, q
                )));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some(max) = row.max_index() {
                if max >= d {
                    return Err(Error::Data(format!(
                        "row {} has feature index {} but d={}",
                        i, max, d
                    )));
                }
            }
        }
        if label_map.len() != q {
            return Err(Error::Data(format!(
                "label map has {} entries for q={}",
                label_map.len(),
                q
            )));
        }
        Ok(Dataset {
            rows,
            labels,
            d,
            q,
            label_map,
        })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn class_count(&self) -> usize {
        self.q
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn label(&self, i: usize) -> i32 {
        self.labels[i]
    }

    /// The -1/+1 label of a binary dataset, as a float.
    pub fn binary_label(&self, i: usize) -> Result<f64> {
        if self.q != 2 {
            return Err(Error::Data(format!(
                "binary label requested from a {}-class dataset",
                self.q
            )));
        }
        Ok(self.labels[i] as f64)
    }

    /// Canonical class id in `0..q` (binary: -1 -> 0, +1 -> 1).
    pub fn class_index(&self, i: usize) -> usize {
        if self.q == 2 {
            if self.labels[i] > 0 {
                1
            } else {
                0
            }
        } else {
            self.labels[i] as usize
        }
    }

    /// Original label values in class order.
    pub fn label_map(&self) -> &[i64] {
        &self.label_map
    }

    /// Counts per canonical class.
    pub fn label_histogram(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.q];
        for i in 0..self.n() {
            counts[self.class_index(i)] += 1;
        }
        counts
    }

    pub fn max_row_norm_sq(&self) -> f64 {
        self.rows.iter().map(|r| r.norm_sq()).fold(0.0, f64::max)
    }

    /// Widens the feature dimension. Needed when a companion file (e.g. a
    /// test split stored separately) has a larger max index.
    pub fn with_dim(mut self, d: usize) -> Result<Self> {
        if d < self.d {
            return Err(Error::Data(format!(
                "cannot shrink dimension from {} to {}",
                self.d, d
            )));
        }
        self.d = d;
        Ok(self)
    }

    fn subset(&self, order: &[usize]) -> Dataset {
        Dataset {
            rows: order.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: order.iter().map(|&i| self.labels[i]).collect(),
            d: self.d,
            q: self.q,
            label_map: self.label_map.clone(),
        }
    }
}

/// Deterministic train/test split specification.
#[derive(Clone, Copy, Debug)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

/// Shuffles with a seeded generator and takes the first
/// `floor(train_fraction * n)` rows as the training partition.
pub fn split(dataset: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction {} outside (0, 1]",
            spec.train_fraction
        )));
    }
    let n = dataset.n();
    if n == 0 {
        return Err(Error::Data("cannot split an empty dataset".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    order.shuffle(&mut rng);
    let train_n = ((spec.train_fraction * n as f64).floor() as usize).min(n);
    let (train_idx, test_idx) = order.split_at(train_n);
    Ok((dataset.subset(train_idx), dataset.subset(test_idx)))
}

/// Rescales all feature values so the largest row norm becomes 1, returning
/// the dataset and the divisor that was applied. All-zero data is a no-op
/// with factor 1.
pub fn scale_max_norm(dataset: &Dataset) -> (Dataset, f64) {
    let max_norm = dataset.max_row_norm_sq().sqrt();
    if max_norm == 0.0 {
        return (dataset.clone(), 1.0);
    }
    (scale_by(dataset, max_norm), max_norm)
}

/// Divides every feature value by `factor` (used to apply a training-set
/// scaling factor to a held-out file).
pub fn scale_by(dataset: &Dataset, factor: f64) -> Dataset {
    let mut out = dataset.clone();
    for row in &mut out.rows {
        row.scale_values(1.0 / factor);
    }
    out
}

/// Seeded subsample of `count` rows without replacement (used by `--take`).
pub fn take_subset(dataset: &Dataset, count: usize, seed: u64) -> Dataset {
    let n = dataset.n();
    if count >= n {
        return dataset.clone();
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    order.truncate(count);
    dataset.subset(&order)
}

/// Parses LIBSVM sparse text: each nonempty line is a label token followed by
/// whitespace-separated `index:value` pairs with 1-based strictly increasing
/// indices. `#` starts a comment that runs to the end of the line. Two-class
/// label sets are remapped to -1/+1; larger label sets are remapped to
/// contiguous ids by sorted original value.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut raw_labels: Vec<i64> = Vec::new();
    let mut d = 0usize;

    for (line_no, line) in reader.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line?;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let mut tokens = content.split_whitespace();
        let label_token = match tokens.next() {
            Some(t) => t,
            None => continue, // blank or comment-only line
        };
        raw_labels.push(parse_label(label_token, line_no)?);

        let mut indices: Vec<u32> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for pair in tokens {
            let (idx_str, val_str) = pair.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("malformed feature pair '{}'", pair),
            })?;
            let one_based: usize = idx_str.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad feature index '{}'", idx_str),
            })?;
            if one_based == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "feature indices are 1-based".into(),
                });
            }
            let value: f64 = val_str.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad feature value '{}'", val_str),
            })?;
            let zero_based = (one_based - 1) as u32;
            if let Some(&last) = indices.last() {
                if zero_based <= last {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("non-increasing feature index {}", one_based),
                    });
                }
            }
            indices.push(zero_based);
            values.push(value);
            d = d.max(one_based);
        }
        rows.push(SparseRow { indices, values });
    }

    if rows.is_empty() {
        return Err(Error::Data("no data lines in input".into()));
    }
    canonicalize_labels(rows, raw_labels, d)
}

pub fn parse_libsvm_str(text: &str) -> Result<Dataset> {
    parse_libsvm(text.as_bytes())
}

pub fn parse_libsvm_path(path: &std::path::Path) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    parse_libsvm(std::io::BufReader::new(file))
}

fn parse_label(token: &str, line_no: usize) -> Result<i64> {
    let value: f64 = token.parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("unparsable label '{}'", token),
    })?;
    let rounded = value.round();
    if (value - rounded).abs() > 1e-9 {
        return Err(Error::Parse {
            line: line_no,
            message: format!("label '{}' is not integral", token),
        });
    }
    Ok(rounded as i64)
}

fn canonicalize_labels(rows: Vec<SparseRow>, raw: Vec<i64>, d: usize) -> Result<Dataset> {
    let mut distinct: Vec<i64> = raw.clone();
    distinct.sort_unstable();
    distinct.dedup();

    let binary_convention = distinct.iter().all(|&v| v == -1 || v == 1)
        || distinct.iter().all(|&v| v == 0 || v == 1);
    if binary_convention {
        // {0,1} maps to {-1,+1}; {-1,+1} is kept as-is.
        let negative = if distinct.contains(&0) { 0 } else { -1 };
        let labels = raw
            .iter()
            .map(|&v| if v == negative { -1 } else { 1 })
            .collect();
        return Dataset::with_label_map(rows, labels, d, 2, vec![negative, 1]);
    }

    let q = distinct.len();
    if q == 2 {
        // Any other two-value label set also follows the -1/+1 convention,
        // smaller original value mapped to -1.
        let labels = raw
            .iter()
            .map(|&v| if v == distinct[0] { -1 } else { 1 })
            .collect();
        return Dataset::with_label_map(rows, labels, d, 2, distinct);
    }
    let labels = raw
        .iter()
        .map(|&v| distinct.binary_search(&v).unwrap() as i32)
        .collect();
    Dataset::with_label_map(rows, labels, d, q, distinct)
}

/// Writes the dataset back out in LIBSVM text form (1-based indices,
/// canonical labels). `parse_libsvm` of the output reproduces the dataset's
/// rows and labels.
pub fn serialize_libsvm<W: Write>(dataset: &Dataset, writer: &mut W) -> Result<()> {
    for i in 0..dataset.n() {
        let label = dataset.label_map[dataset.class_index(i)];
        write!(writer, "{}", label)?;
        for (j, v) in dataset.rows[i].iter() {
            write!(writer, " {}:{}", j + 1, v)?;
        }
        writeln!(writer)?;
    }
    Ok(())
}
