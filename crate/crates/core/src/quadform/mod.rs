//! Invariant quadratic forms: two independent Gram constructions, signatures,
//! bounded isotropic search and ℚ-rank certificates.

mod diag;
mod gram;
mod rank;
mod search;

pub use diag::{diagonalize, signature, signature_interlace, signature_of_diagonal};
pub use gram::{cross_checked, gram_invariance, gram_remainder, invariant_form};
pub use rank::{
    anisotropy_certificate, certify_anisotropic, q_rank, squarefree_integral, witt_decompose,
    witt_decompose_from, Obstruction, RankCertificate,
};
pub use search::{isotropic_search, SearchPlan};

use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    /// `1, x, …, x^{n−1}`
    Standard,
    /// `v, Av, …, A^{n−1}v`
    Cyclic,
    Custom(String),
}

/// A symmetric rational Gram matrix together with the basis it is written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSpace {
    pub dim: usize,
    pub gram: RatMatrix,
    pub basis: BasisLabel,
    /// Columns are the basis vectors in standard coordinates.
    pub base_change: RatMatrix,
}

impl QuadSpace {
    pub fn new(gram: RatMatrix, basis: BasisLabel) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Dimension("Gram matrix must be square and symmetric".into()));
        }
        let dim = gram.nrows();
        Ok(Self { dim, gram, basis, base_change: RatMatrix::identity(dim) })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::new(crate::linalg::rat_matrix(rows), BasisLabel::Standard).expect("symmetric literal")
    }

    pub fn product(&self, a: &[Rat], b: &[Rat]) -> Rat {
        crate::linalg::bilinear(&self.gram, a, b)
    }

    pub fn is_integral(&self) -> bool {
        self.gram.to_integer().is_some()
    }

    pub fn determinant(&self) -> Rat {
        self.gram.determinant().expect("square")
    }
}

/// `gram ↦ Mᵀ·gram·M`.
pub fn change_basis(space: &QuadSpace, m: &RatMatrix, label: BasisLabel) -> Result<QuadSpace> {
    if m.nrows() != space.dim || !m.is_square() {
        return Err(Error::Dimension("base change must be square of the form's dimension".into()));
    }
    if m.determinant()? == Rat::from_integer(0.into()) {
        return Err(Error::SingularMatrix);
    }
    let gram = &(&m.transpose() * &space.gram) * m;
    Ok(QuadSpace { dim: space.dim, gram, basis: label, base_change: &space.base_change * m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_matrix};

    #[test]
    fn change_basis_identity_and_determinant() {
        let s = QuadSpace::from_int_rows(&[&[2, 1], &[1, -3]]);
        let same = change_basis(&s, &RatMatrix::identity(2), BasisLabel::Standard).unwrap();
        assert_eq!(same.gram, s.gram);
        let m = rat_matrix(&[&[1, 2], &[3, 1]]);
        let t = change_basis(&s, &m, BasisLabel::Custom("m".into())).unwrap();
        assert_eq!(t.determinant(), s.determinant() * rat(25));
        assert_eq!(
            change_basis(&s, &rat_matrix(&[&[1, 2], &[2, 4]]), BasisLabel::Standard),
            Err(Error::SingularMatrix)
        );
    }
}
