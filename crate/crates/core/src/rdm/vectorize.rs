use crate::registry::{Named, Registry};
use crate::stats::upper_triangle;

use super::Rdm;

/// Turns an RDM into the vector that RSA correlates.
pub trait RdmVectorizer: Named + Send + Sync {
    fn vectorize(&self, rdm: &Rdm) -> Vec<f64>;
}

/// Strictly-upper triangle, row-major. The default.
pub struct UpperTriangle;

impl Named for UpperTriangle {
    fn name(&self) -> &'static str {
        "upper_triangle"
    }

    fn description(&self) -> &'static str {
        "entries i < j in row-major order, diagonal excluded"
    }
}

impl RdmVectorizer for UpperTriangle {
    fn vectorize(&self, rdm: &Rdm) -> Vec<f64> {
        upper_triangle(rdm.values().data(), rdm.n()).expect("RDM is square with n >= 3")
    }
}

/// Every off-diagonal entry, so each pair is counted twice.
pub struct OffDiagonal;

impl Named for OffDiagonal {
    fn name(&self) -> &'static str {
        "off_diagonal"
    }

    fn description(&self) -> &'static str {
        "all entries i != j in row-major order"
    }
}

impl RdmVectorizer for OffDiagonal {
    fn vectorize(&self, rdm: &Rdm) -> Vec<f64> {
        let n = rdm.n();
        let mut out = Vec::with_capacity(n * (n - 1));
        for (i, row) in rdm.values().iter_rows().enumerate() {
            out.extend(row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| *v));
        }
        out
    }
}

/// The whole matrix including the zero diagonal.
pub struct FullMatrix;

impl Named for FullMatrix {
    fn name(&self) -> &'static str {
        "full_matrix"
    }

    fn description(&self) -> &'static str {
        "all n*n entries in row-major order"
    }
}

impl RdmVectorizer for FullMatrix {
    fn vectorize(&self, rdm: &Rdm) -> Vec<f64> {
        rdm.values().data().to_vec()
    }
}

/// Built-in vectorizers; `upper_triangle` is the default.
pub fn vectorizers() -> Registry<dyn RdmVectorizer> {
    let mut reg: Registry<dyn RdmVectorizer> = Registry::new("vectorizer", Box::new(UpperTriangle));
    reg.register(Box::new(OffDiagonal)).register(Box::new(FullMatrix));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datamodel::Matrix;
    use crate::rdm::Modality;

    fn rdm3() -> Rdm {
        let m = Matrix::from_rows(&[
            vec![0.0, 0.1, 0.2],
            vec![0.1, 0.0, 0.3],
            vec![0.2, 0.3, 0.0],
        ])
        .unwrap();
        Rdm::from_matrix("d", Modality::Brain, m).unwrap()
    }

    #[test]
    fn each_strategy_layout() {
        let r = rdm3();
        let reg = vectorizers();
        assert_eq!(reg.default_name(), "upper_triangle");
        assert_eq!(reg.get("upper_triangle").unwrap().vectorize(&r), vec![0.1, 0.2, 0.3]);
        assert_eq!(
            reg.get("off_diagonal").unwrap().vectorize(&r),
            vec![0.1, 0.2, 0.1, 0.3, 0.2, 0.3]
        );
        assert_eq!(reg.get("full_matrix").unwrap().vectorize(&r).len(), 9);
    }
}
