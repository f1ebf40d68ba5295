use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datamodel::Matrix;
use crate::error::{Error, Result};
use crate::rng::Pcg32;
use crate::stats::Centered;

use super::vectorize::{RdmVectorizer, UpperTriangle};
use super::{rsa_score_with, Rdm};

pub const MIN_PERMUTATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationResult {
    pub observed: f64,
    pub p_value: f64,
    pub n_perm: usize,
    pub seed: u64,
    /// Permutations whose score reached the observed one.
    pub n_extreme: usize,
}

/// One-sided stimulus-label permutation test for [`rsa_score`](super::rsa_score).
///
/// Replicate `r` relabels the stimuli of `rdm_m` (rows and columns jointly)
/// with a Fisher–Yates shuffle from `Pcg32::new(seed, r)`, so each replicate
/// is independent of scheduling. `p = (1 + #{perm >= observed}) / (1 + n_perm)`.
pub fn permutation_pvalue(rdm_h: &Rdm, rdm_m: &Rdm, n_perm: usize, seed: u64) -> Result<PermutationResult> {
    if n_perm < MIN_PERMUTATIONS {
        return Err(Error::Configuration(format!(
            "n_perm must be >= {MIN_PERMUTATIONS}, got {n_perm}"
        )));
    }
    let vectorizer = UpperTriangle;
    let observed = rsa_score_with(&vectorizer, rdm_h, rdm_m)?;
    let target = Centered::new(&vectorizer.vectorize(rdm_h));
    let n = rdm_m.n();

    let scores: Vec<f64> = (0..n_perm as u64)
        .into_par_iter()
        .map(|r| {
            let mut perm: Vec<usize> = (0..n).collect();
            Pcg32::new(seed, r).shuffle(&mut perm);
            let permuted = permute(rdm_m, &perm);
            let v = Centered::new(&vectorizer.vectorize(&permuted));
            // relabeling keeps the multiset of entries, so variance stays nonzero
            target.correlate(&v)
        })
        .collect();

    let n_extreme = scores.iter().filter(|&&s| s >= observed).count();
    Ok(PermutationResult {
        observed,
        p_value: (1 + n_extreme) as f64 / (1 + n_perm) as f64,
        n_perm,
        seed,
        n_extreme,
    })
}

fn permute(rdm: &Rdm, perm: &[usize]) -> Rdm {
    let n = rdm.n();
    let mut data = Vec::with_capacity(n * n);
    for &i in perm {
        data.extend(perm.iter().map(|&j| rdm.get(i, j)));
    }
    Rdm {
        dataset_id: rdm.dataset_id.clone(),
        modality: rdm.modality,
        values: Matrix::new(n, n, data).expect("square"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdm::Modality;

    fn random_rdm(n: usize, seed: u64) -> Rdm {
        let mut rng = Pcg32::from_seed(seed);
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.bounded(1 << 20) as f64 / (1 << 19) as f64;
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Rdm::from_matrix("d", Modality::Brain, Matrix::new(n, n, data).unwrap()).unwrap()
    }

    #[test]
    fn identical_rdms_are_significant() {
        let r = random_rdm(10, 1);
        let res = permutation_pvalue(&r, &r, 1000, 3).unwrap();
        assert_eq!(res.observed, 1.0);
        assert!(res.p_value <= 0.01, "{res:?}");
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_rdm(10, 1);
        let b = random_rdm(10, 2);
        let p1 = permutation_pvalue(&a, &b, 200, 9).unwrap();
        let p2 = permutation_pvalue(&a, &b, 200, 9).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn independent_rdms_give_roughly_uniform_p() {
        // Under the null, P(p <= 0.5) should be near one half.
        let trials = 60;
        let mut below = 0;
        for t in 0..trials {
            let a = random_rdm(10, 1000 + t);
            let b = random_rdm(10, 5000 + t);
            let p = permutation_pvalue(&a, &b, 100, t).unwrap().p_value;
            assert!(p > 0.0 && p <= 1.0);
            if p <= 0.5 {
                below += 1;
            }
        }
        let frac = below as f64 / trials as f64;
        assert!((0.3..=0.7).contains(&frac), "fraction below 0.5: {frac}");
    }

    #[test]
    fn too_few_permutations() {
        let a = random_rdm(5, 1);
        assert!(matches!(
            permutation_pvalue(&a, &a, 99, 0),
            Err(Error::Configuration(_))
        ));
    }
}
