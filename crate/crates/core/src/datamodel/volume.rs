use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datamodel::manifest::StimulusManifest;
use crate::datamodel::matrix::{Matrix, MatrixSource, RepresentationMatrix};
use crate::error::{Error, Result};

/// One 3-D scan, indexed `[i][j][k]`. `None` marks an invalid voxel (NaN).
pub type Scan = Vec<Vec<Vec<Option<f64>>>>;

/// Per-stimulus voxel grids for one subject, before flattening.
///
/// On disk this is JSON: `{"subject_id", "shape": [d1, d2, d3], "scans": [...]}`
/// where each scan is a nested `d1 x d2 x d3` array and `null` stands for NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuralVolume {
    pub subject_id: String,
    pub shape: [usize; 3],
    pub scans: Vec<Scan>,
}

impl NeuralVolume {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_slice(&bytes)
            .map_err(|e| Error::Format(format!("volume {}: {e}", path.display())))
    }

    pub fn voxel_count(&self) -> usize {
        self.shape.iter().product()
    }
}

/// Row-major linear index with the last axis fastest.
pub fn linear_index(shape: [usize; 3], (i, j, k): (usize, usize, usize)) -> usize {
    let [_, d2, d3] = shape;
    i * d2 * d3 + j * d3 + k
}

/// Inverse of [`linear_index`].
pub fn unflatten_index(shape: [usize; 3], index: usize) -> (usize, usize, usize) {
    let [_, d2, d3] = shape;
    (index / (d2 * d3), (index / d3) % d2, index % d3)
}

/// Flatten every scan into one matrix row (`d1*d2*d3` columns). Invalid
/// voxels become NaN and are kept in place.
pub fn flatten_volume(
    volume: &NeuralVolume,
    manifest: &StimulusManifest,
) -> Result<RepresentationMatrix> {
    let [d1, d2, d3] = volume.shape;
    let dim = d1
        .checked_mul(d2)
        .and_then(|v| v.checked_mul(d3))
        .ok_or_else(|| Error::Format(format!("volume shape {:?} overflows", volume.shape)))?;
    if volume.scans.len() != manifest.len() {
        return Err(Error::Contract(format!(
            "subject {} has {} scans but manifest {} lists {} stimuli",
            volume.subject_id,
            volume.scans.len(),
            manifest.dataset_id(),
            manifest.len()
        )));
    }

    let mut data = Vec::with_capacity(dim * volume.scans.len());
    for (s, scan) in volume.scans.iter().enumerate() {
        let bad_shape = || {
            Error::Format(format!(
                "subject {} scan {s} does not match shape {:?}",
                volume.subject_id, volume.shape
            ))
        };
        if scan.len() != d1 {
            return Err(bad_shape());
        }
        for plane in scan {
            if plane.len() != d2 {
                return Err(bad_shape());
            }
            for line in plane {
                if line.len() != d3 {
                    return Err(bad_shape());
                }
                data.extend(line.iter().map(|v| v.unwrap_or(f64::NAN)));
            }
        }
    }

    let values = Matrix::new(volume.scans.len(), dim, data)?;
    RepresentationMatrix::with_missing(
        manifest,
        MatrixSource::Subject {
            subject_id: volume.subject_id.clone(),
        },
        values,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datamodel::manifest::{Stimulus, StimulusKind};
    use proptest::prelude::*;

    fn manifest(n: usize) -> StimulusManifest {
        StimulusManifest::new(
            "d",
            (0..n)
                .map(|i| Stimulus {
                    stimulus_id: format!("s{i}"),
                    text: String::new(),
                    kind: StimulusKind::Concept,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(linear_index([2, 2, 2], (1, 0, 1)), 5);
        assert_eq!(linear_index([3, 4, 5], (2, 3, 4)), 59);
    }

    #[test]
    fn index_matches_nested_loop_enumeration() {
        let shape = [3, 4, 5];
        let mut expected = 0;
        for i in 0..3 {
            for j in 0..4 {
                for k in 0..5 {
                    assert_eq!(linear_index(shape, (i, j, k)), expected);
                    expected += 1;
                }
            }
        }
    }

    #[test]
    fn identity_flatten() {
        let vol = NeuralVolume {
            subject_id: "P01".into(),
            shape: [1, 1, 3],
            scans: vec![vec![vec![vec![Some(1.5), Some(-2.0), Some(3.25)]]]],
        };
        let m = flatten_volume(&vol, &manifest(1)).unwrap();
        assert_eq!(m.values().data(), &[1.5, -2.0, 3.25]);
    }

    #[test]
    fn nan_preserved_and_order_row_major() {
        let scan = vec![
            vec![vec![Some(0.0), Some(1.0)], vec![Some(2.0), None]],
            vec![vec![Some(4.0), Some(5.0)], vec![Some(6.0), Some(7.0)]],
        ];
        let vol = NeuralVolume {
            subject_id: "P01".into(),
            shape: [2, 2, 2],
            scans: vec![scan.clone(), scan],
        };
        let m = flatten_volume(&vol, &manifest(2)).unwrap();
        let row = m.values().row(0);
        assert!(row[3].is_nan());
        assert_eq!(row[5], 5.0);
        assert_eq!(m.dim(), 8);
    }

    #[test]
    fn inconsistent_scan_shape_is_format_error() {
        let good = vec![vec![vec![Some(0.0), Some(1.0)]]];
        let bad = vec![vec![vec![Some(0.0)]]];
        let vol = NeuralVolume {
            subject_id: "P01".into(),
            shape: [1, 1, 2],
            scans: vec![good, bad],
        };
        assert!(matches!(
            flatten_volume(&vol, &manifest(2)),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn json_nulls_become_nan() {
        let json = r#"{"subject_id":"P01","shape":[1,1,2],"scans":[[[[1.0,null]]]]}"#;
        let vol: NeuralVolume = serde_json::from_str(json).unwrap();
        let m = flatten_volume(&vol, &manifest(1)).unwrap();
        assert_eq!(m.values().get(0, 0), 1.0);
        assert!(m.values().get(0, 1).is_nan());
    }

    proptest! {
        #[test]
        fn flatten_is_a_bijection(d1 in 1usize..8, d2 in 1usize..8, d3 in 1usize..8) {
            let shape = [d1, d2, d3];
            let mut seen = vec![false; d1 * d2 * d3];
            for i in 0..d1 {
                for j in 0..d2 {
                    for k in 0..d3 {
                        let idx = linear_index(shape, (i, j, k));
                        prop_assert!(!seen[idx]);
                        seen[idx] = true;
                        prop_assert_eq!(unflatten_index(shape, idx), (i, j, k));
                    }
                }
            }
        }
    }
}
