use crate::error::{Error, Result};
use crate::stats::pearson;

use super::vectorize::{RdmVectorizer, UpperTriangle};
use super::Rdm;

fn check_compatible(rdm_h: &Rdm, rdm_m: &Rdm) -> Result<()> {
    if rdm_h.dataset_id() != rdm_m.dataset_id() {
        return Err(Error::Contract(format!(
            "RDMs reference different manifests: {} vs {}",
            rdm_h.dataset_id(),
            rdm_m.dataset_id()
        )));
    }
    if rdm_h.n() != rdm_m.n() {
        return Err(Error::Contract(format!(
            "RDM sizes differ: {} vs {}",
            rdm_h.n(),
            rdm_m.n()
        )));
    }
    Ok(())
}

/// Pearson correlation between the strictly-upper triangles of two RDMs.
pub fn rsa_score(rdm_h: &Rdm, rdm_m: &Rdm) -> Result<f64> {
    rsa_score_with(&UpperTriangle, rdm_h, rdm_m)
}

/// [`rsa_score`] with an explicit vectorization strategy.
pub fn rsa_score_with(vectorizer: &dyn RdmVectorizer, rdm_h: &Rdm, rdm_m: &Rdm) -> Result<f64> {
    check_compatible(rdm_h, rdm_m)?;
    let h = vectorizer.vectorize(rdm_h);
    let m = vectorizer.vectorize(rdm_m);
    pearson(&h, &m).map_err(|e| e.context("rsa_score"))
}

/// Pearson correlation between row `stimulus_index` of each RDM, with the
/// diagonal entry dropped.
pub fn row_profile_similarity(rdm_h: &Rdm, rdm_m: &Rdm, stimulus_index: usize) -> Result<f64> {
    check_compatible(rdm_h, rdm_m)?;
    let n = rdm_h.n();
    if stimulus_index >= n {
        return Err(Error::Contract(format!(
            "stimulus index {stimulus_index} out of range 0..{n}"
        )));
    }
    let profile = |r: &Rdm| -> Vec<f64> {
        r.values()
            .row(stimulus_index)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != stimulus_index)
            .map(|(_, v)| *v)
            .collect()
    };
    pearson(&profile(rdm_h), &profile(rdm_m))
        .map_err(|e| e.context(format!("row profile of stimulus #{stimulus_index}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datamodel::Matrix;
    use crate::rdm::Modality;

    fn from_triangle(n: usize, tri: &[f64], dataset: &str) -> Rdm {
        let mut data = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                data[i * n + j] = tri[k];
                data[j * n + i] = tri[k];
                k += 1;
            }
        }
        Rdm::from_matrix(dataset, Modality::Brain, Matrix::new(n, n, data).unwrap()).unwrap()
    }

    const X: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
    const Y: [f64; 6] = [0.2, 0.1, 0.4, 0.3, 0.6, 0.5];

    #[test]
    fn self_similarity() {
        let r = from_triangle(4, &X, "d");
        assert_eq!(rsa_score(&r, &r).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_triangles() {
        // deviations from 0.35: sxy = 0.145, sxx = syy = 0.175
        let s = rsa_score(&from_triangle(4, &X, "d"), &from_triangle(4, &Y, "d")).unwrap();
        assert!((s - 29.0 / 35.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn reflected_triangles_on_both_sides_cancel() {
        let fx: Vec<f64> = X.iter().map(|v| 2.0 - v).collect();
        let fy: Vec<f64> = Y.iter().map(|v| 2.0 - v).collect();
        let a = from_triangle(4, &fx, "d");
        assert!((rsa_score(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let s = rsa_score(&a, &from_triangle(4, &fy, "d")).unwrap();
        assert!((s - 29.0 / 35.0).abs() < 1e-12);
    }

    #[test]
    fn manifest_mismatch_names_both() {
        let err = rsa_score(&from_triangle(4, &X, "alpha"), &from_triangle(4, &Y, "beta")).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Contract(_)));
        assert!(msg.contains("alpha") && msg.contains("beta"), "{msg}");
    }

    #[test]
    fn constant_triangle_is_degenerate() {
        let flat = from_triangle(3, &[0.5, 0.5, 0.5], "d");
        let other = from_triangle(3, &[0.1, 0.5, 0.9], "d");
        assert!(matches!(rsa_score(&flat, &other), Err(Error::Degenerate(_))));
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = from_triangle(4, &X, "d");
        let b = from_triangle(4, &[0.9, 0.1, 0.4, 1.3, 0.2, 0.7], "d");
        assert_eq!(rsa_score(&a, &b).unwrap(), rsa_score(&b, &a).unwrap());
    }

    #[test]
    fn row_profile_cases() {
        let a = from_triangle(4, &X, "d");
        assert_eq!(row_profile_similarity(&a, &a, 2).unwrap(), 1.0);

        // row 0 profiles: [.1,.2,.3] vs [.3,.2,.1]
        let b = from_triangle(4, &[0.3, 0.2, 0.1, 0.4, 0.5, 0.6], "d");
        assert_eq!(row_profile_similarity(&a, &b, 0).unwrap(), -1.0);
        assert!(row_profile_similarity(&a, &b, 4).is_err());
    }

    #[test]
    fn row_profile_matches_slice_oracle() {
        let mut rng = crate::rng::Pcg32::from_seed(17);
        let mut tri = || -> Vec<f64> { (0..15).map(|_| rng.bounded(2000) as f64 / 1000.0).collect() };
        let (ta, tb) = (tri(), tri());
        let a = from_triangle(6, &ta, "d");
        let b = from_triangle(6, &tb, "d");
        for idx in 0..6 {
            let pa: Vec<f64> = (0..6).filter(|&j| j != idx).map(|j| a.get(idx, j)).collect();
            let pb: Vec<f64> = (0..6).filter(|&j| j != idx).map(|j| b.get(idx, j)).collect();
            let oracle = pearson(&pa, &pb).unwrap();
            assert!((row_profile_similarity(&a, &b, idx).unwrap() - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_profile_is_degenerate() {
        let a = from_triangle(4, &[0.5, 0.5, 0.5, 0.1, 0.2, 0.3], "d");
        let b = from_triangle(4, &X, "d");
        assert!(matches!(row_profile_similarity(&a, &b, 0), Err(Error::Degenerate(_))));
    }
}
