use std::fmt;

use crate::datamodel::manifest::StimulusManifest;
use crate::error::{Error, Result};

/// Dense row-major matrix of 64-bit reals. This is what the binary matrix
/// file stores; it carries no dataset metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        match rows.checked_mul(cols) {
            Some(len) if len == data.len() => Ok(Matrix { rows, cols, data }),
            Some(len) => Err(Error::Contract(format!(
                "matrix {rows}x{cols} needs {len} values, got {}",
                data.len()
            ))),
            None => Err(Error::Format(format!("matrix dimensions {rows}x{cols} overflow"))),
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Contract(format!(
                    "row {i} has {} values, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    /// New matrix holding only `columns`, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * columns.len());
        for r in self.iter_rows() {
            data.extend(columns.iter().map(|&c| r[c]));
        }
        Matrix {
            rows: self.rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn count_non_finite(&self) -> usize {
        self.data.iter().filter(|v| !v.is_finite()).count()
    }
}

/// Where a representation came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSource {
    Model { model_id: String, condition_id: String },
    Subject { subject_id: String },
}

impl fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSource::Model {
                model_id,
                condition_id,
            } => write!(f, "model {model_id} ({condition_id})"),
            MatrixSource::Subject { subject_id } => write!(f, "subject {subject_id}"),
        }
    }
}

/// One row per manifest stimulus, in manifest order.
///
/// Model representations must be finite. Brain matrices straight out of
/// [`flatten_volume`](crate::datamodel::flatten_volume) may hold NaN for
/// invalid voxels until they are sampled; use
/// [`RepresentationMatrix::with_missing`] for those.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationMatrix {
    dataset_id: String,
    stimulus_ids: Vec<String>,
    source: MatrixSource,
    values: Matrix,
}

impl RepresentationMatrix {
    pub fn new(manifest: &StimulusManifest, source: MatrixSource, values: Matrix) -> Result<Self> {
        if let Some(v) = values.data().iter().find(|v| !v.is_finite()) {
            return Err(Error::Format(format!(
                "{source}: representation contains non-finite value {v}"
            )));
        }
        Self::with_missing(manifest, source, values)
    }

    /// Like [`RepresentationMatrix::new`] but NaN entries are allowed.
    pub fn with_missing(
        manifest: &StimulusManifest,
        source: MatrixSource,
        values: Matrix,
    ) -> Result<Self> {
        if values.rows() != manifest.len() {
            return Err(Error::Contract(format!(
                "{source}: matrix has {} rows but manifest {} lists {} stimuli",
                values.rows(),
                manifest.dataset_id(),
                manifest.len()
            )));
        }
        if values.cols() < 2 {
            return Err(Error::Contract(format!(
                "{source}: representation dimension must be >= 2, got {}",
                values.cols()
            )));
        }
        if let Some(v) = values.data().iter().find(|v| v.is_infinite()) {
            return Err(Error::Format(format!("{source}: infinite value {v}")));
        }
        Ok(RepresentationMatrix {
            dataset_id: manifest.dataset_id().to_owned(),
            stimulus_ids: manifest
                .stimuli()
                .iter()
                .map(|s| s.stimulus_id.clone())
                .collect(),
            source,
            values,
        })
    }

    pub fn dataset_id(&self) -> &str {
        &self.dataset_id
    }

    pub fn source(&self) -> &MatrixSource {
        &self.source
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn into_values(self) -> Matrix {
        self.values
    }

    pub fn n_stimuli(&self) -> usize {
        self.values.rows()
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    pub fn stimulus_ids(&self) -> &[String] {
        &self.stimulus_ids
    }

    pub fn has_missing(&self) -> bool {
        self.values.data().iter().any(|v| v.is_nan())
    }

    pub(crate) fn with_values(&self, values: Matrix) -> Self {
        RepresentationMatrix {
            dataset_id: self.dataset_id.clone(),
            stimulus_ids: self.stimulus_ids.clone(),
            source: self.source.clone(),
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datamodel::manifest::{Stimulus, StimulusKind};

    fn manifest(n: usize) -> StimulusManifest {
        StimulusManifest::new(
            "d",
            (0..n)
                .map(|i| Stimulus {
                    stimulus_id: format!("s{i}"),
                    text: String::new(),
                    kind: StimulusKind::Sentence,
                })
                .collect(),
        )
        .unwrap()
    }

    fn src() -> MatrixSource {
        MatrixSource::Subject {
            subject_id: "P01".into(),
        }
    }

    #[test]
    fn row_count_must_match_manifest() {
        let m = Matrix::new(2, 2, vec![0.0; 4]).unwrap();
        assert!(RepresentationMatrix::new(&manifest(3), src(), m).is_err());
    }

    #[test]
    fn dim_at_least_two() {
        let m = Matrix::new(3, 1, vec![0.0; 3]).unwrap();
        assert!(RepresentationMatrix::new(&manifest(3), src(), m).is_err());
    }

    #[test]
    fn nan_only_allowed_with_missing() {
        let m = Matrix::new(1, 2, vec![f64::NAN, 1.0]).unwrap();
        assert!(RepresentationMatrix::new(&manifest(1), src(), m.clone()).is_err());
        assert!(RepresentationMatrix::with_missing(&manifest(1), src(), m).is_ok());
    }

    #[test]
    fn select_columns_keeps_rows() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let s = m.select_columns(&[0, 2]);
        assert_eq!(s.data(), &[1.0, 3.0, 4.0, 6.0]);
    }
}
