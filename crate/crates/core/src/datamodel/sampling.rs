use serde::{Deserialize, Serialize};

use crate::datamodel::matrix::RepresentationMatrix;
use crate::error::{Error, Result};
use crate::rng::Pcg32;

/// How many voxels to keep per subject and which seed drives the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub n_voxels: usize,
    pub seed: u64,
}

impl SamplingConfig {
    pub const DEFAULT_VOXELS: usize = 1000;

    pub fn new(n_voxels: usize, seed: u64) -> Result<Self> {
        if n_voxels < 2 {
            return Err(Error::Configuration(format!(
                "n_voxels must be >= 2, got {n_voxels}"
            )));
        }
        Ok(SamplingConfig { n_voxels, seed })
    }
}

/// Ascending indices of columns with no NaN in any row.
pub fn valid_voxel_mask(matrix: &RepresentationMatrix) -> Vec<usize> {
    let values = matrix.values();
    let mut valid = vec![true; values.cols()];
    for row in values.iter_rows() {
        for (flag, v) in valid.iter_mut().zip(row) {
            if v.is_nan() {
                *flag = false;
            }
        }
    }
    valid
        .iter()
        .enumerate()
        .filter_map(|(i, &ok)| ok.then_some(i))
        .collect()
}

/// Column indices [`sample_voxels`] keeps, ascending.
///
/// Draws `n_voxels` positions from the sorted valid-index array with a
/// partial Fisher–Yates shuffle driven by `Pcg32::from_seed(cfg.seed)`.
pub fn sample_voxel_indices(matrix: &RepresentationMatrix, cfg: &SamplingConfig) -> Result<Vec<usize>> {
    if cfg.n_voxels < 2 {
        return Err(Error::Configuration(format!(
            "n_voxels must be >= 2, got {}",
            cfg.n_voxels
        )));
    }
    let mut pool = valid_voxel_mask(matrix);
    if pool.len() < cfg.n_voxels {
        return Err(Error::Capacity {
            requested: cfg.n_voxels,
            available: pool.len(),
        });
    }
    let mut rng = Pcg32::from_seed(cfg.seed);
    rng.partial_shuffle(&mut pool, cfg.n_voxels);
    pool.truncate(cfg.n_voxels);
    pool.sort_unstable();
    Ok(pool)
}

/// Restrict a flattened brain matrix to `cfg.n_voxels` valid voxels.
pub fn sample_voxels(matrix: &RepresentationMatrix, cfg: &SamplingConfig) -> Result<RepresentationMatrix> {
    let columns = sample_voxel_indices(matrix, cfg)?;
    Ok(matrix.with_values(matrix.values().select_columns(&columns)))
}
