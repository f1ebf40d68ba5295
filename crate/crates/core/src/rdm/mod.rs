//! Representational dissimilarity matrices and RSA scoring.

mod group;
mod permutation;
mod record;
mod score;
mod vectorize;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datamodel::io::{atomic_write, read_matrix, write_matrix};
use crate::datamodel::{Matrix, RepresentationMatrix};
use crate::error::{Error, Result};
use crate::stats::Centered;

pub use group::{group_score, group_scores};
pub use permutation::{permutation_pvalue, PermutationResult, MIN_PERMUTATIONS};
pub use record::{read_records, write_records, SimilarityRecord};
pub use score::{row_profile_similarity, rsa_score, rsa_score_with};
pub use vectorize::{vectorizers, FullMatrix, OffDiagonal, RdmVectorizer, UpperTriangle};

pub const MIN_STIMULI: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Brain,
    Model,
}

/// Symmetric `n x n` matrix of `1 - pearson` dissimilarities with a zero
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Rdm {
    dataset_id: String,
    modality: Modality,
    values: Matrix,
}

/// JSON sidecar stored next to an RDM matrix file as `<path>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdmDescriptor {
    pub modality: Modality,
    pub manifest_ref: String,
}

impl Rdm {
    /// Wrap an existing matrix, checking every RDM invariant.
    pub fn from_matrix(dataset_id: impl Into<String>, modality: Modality, values: Matrix) -> Result<Self> {
        let n = values.rows();
        if values.cols() != n {
            return Err(Error::Contract(format!(
                "RDM must be square, got {}x{}",
                values.rows(),
                values.cols()
            )));
        }
        if n < MIN_STIMULI {
            return Err(Error::Contract(format!("RDM needs n >= {MIN_STIMULI}, got {n}")));
        }
        for i in 0..n {
            if values.get(i, i) != 0.0 {
                return Err(Error::Format(format!("RDM diagonal entry {i} is not zero")));
            }
            for j in i + 1..n {
                let v = values.get(i, j);
                if v != values.get(j, i) {
                    return Err(Error::Format(format!("RDM not symmetric at ({i}, {j})")));
                }
                if !(0.0..=2.0).contains(&v) {
                    return Err(Error::Format(format!(
                        "RDM entry ({i}, {j}) = {v} outside [0, 2]"
                    )));
                }
            }
        }
        Ok(Rdm {
            dataset_id: dataset_id.into(),
            modality,
            values,
        })
    }

    pub fn dataset_id(&self) -> &str {
        &self.dataset_id
    }

    pub fn modality(&self) -> Modality {
        self.modality
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }

    /// RDM over a subset of stimuli, in the order given.
    pub fn restrict(&self, indices: &[usize]) -> Result<Rdm> {
        let n = self.n();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::Contract(format!("stimulus index {bad} out of range 0..{n}")));
        }
        let mut seen = vec![false; n];
        for &i in indices {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Contract(format!("stimulus index {i} repeated")));
            }
        }
        if indices.len() < MIN_STIMULI {
            return Err(Error::Contract(format!(
                "restricted RDM needs >= {MIN_STIMULI} stimuli, got {}",
                indices.len()
            )));
        }
        let k = indices.len();
        let mut data = Vec::with_capacity(k * k);
        for &i in indices {
            data.extend(indices.iter().map(|&j| self.get(i, j)));
        }
        Ok(Rdm {
            dataset_id: self.dataset_id.clone(),
            modality: self.modality,
            values: Matrix::new(k, k, data)?,
        })
    }

    pub fn descriptor(&self) -> RdmDescriptor {
        RdmDescriptor {
            modality: self.modality,
            manifest_ref: self.dataset_id.clone(),
        }
    }

    pub fn sidecar_path(path: &Path) -> PathBuf {
        let mut name = path.as_os_str().to_owned();
        name.push(".json");
        PathBuf::from(name)
    }

    /// Matrix file plus JSON sidecar.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        write_matrix(path, &self.values)?;
        let mut json = serde_json::to_string_pretty(&self.descriptor())?;
        json.push('\n');
        atomic_write(Self::sidecar_path(path), json.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Rdm> {
        let path = path.as_ref();
        let side = Self::sidecar_path(path);
        let bytes = std::fs::read(&side).map_err(|e| Error::io(&side, e))?;
        let desc: RdmDescriptor = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Format(format!("{}: {e}", side.display())))?;
        let values = read_matrix(path)?;
        Rdm::from_matrix(desc.manifest_ref, desc.modality, values)
            .map_err(|e| e.context(path.display()))
    }
}

/// Pairwise `1 - pearson` between representation rows.
///
/// Each unordered pair is computed once and mirrored, the diagonal is
/// exactly zero. Rows are processed in parallel on the current rayon pool;
/// the result does not depend on the pool size.
pub fn compute_rdm(reps: &RepresentationMatrix, modality: Modality) -> Result<Rdm> {
    let values = reps.values();
    let n = values.rows();
    if n < MIN_STIMULI {
        return Err(Error::Contract(format!(
            "{}: need at least {MIN_STIMULI} stimuli, got {n}",
            reps.source()
        )));
    }
    if values.cols() < 2 {
        return Err(Error::Contract(format!(
            "{}: representation dimension must be >= 2",
            reps.source()
        )));
    }

    let mut centered = Vec::with_capacity(n);
    for (i, row) in values.iter_rows().enumerate() {
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Format(format!(
                "{}: stimulus {} has non-finite value {v}; sample valid voxels first",
                reps.source(),
                reps.stimulus_ids()[i]
            )));
        }
        let c = Centered::new(row);
        if c.is_constant() {
            return Err(Error::Degenerate(format!(
                "{}: stimulus {} has a constant representation",
                reps.source(),
                reps.stimulus_ids()[i]
            )));
        }
        centered.push(c);
    }

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| 1.0 - centered[i].correlate(&centered[j]))
                .collect()
        })
        .collect();

    let mut data = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (offset, &d) in row.iter().enumerate() {
            let j = i + 1 + offset;
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }

    Ok(Rdm {
        dataset_id: reps.dataset_id().to_owned(),
        modality,
        values: Matrix::new(n, n, data)?,
    })
}
