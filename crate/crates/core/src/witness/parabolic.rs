//! The stabilizer of an isotropic line `ℚε` and its unipotent radical, which
//! acts on `ε^⊥` by `w ↦ w + φ(w)ε`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::group::{Frame, GroupElement};
use crate::error::{Error, Result};
use crate::linalg::{
    bilinear, primitive, primitive_int, proportionality, to_rat_vec, EchelonBasis, IntMatrix,
    IntVector, Rat, RatMatrix, RatVector,
};

/// Integral basis of `ε^⊥` starting with `ε`, and the remaining `n − 2`
/// vectors, which represent `ε^⊥/ℚε`.
///
/// With `a = Gε` made primitive and `j` the first index of smallest nonzero
/// `|a_j|`, the vectors `a_j e_i − a_i e_j` (`i ≠ j`) span `ε^⊥`; the first one
/// that `ε` depends on is replaced by `ε`.
pub fn orthocomplement(gram: &RatMatrix, eps: &IntVector) -> Result<(Vec<IntVector>, Vec<IntVector>)> {
    let e = to_rat_vec(eps);
    if eps.iter().all(Zero::is_zero) || !bilinear(gram, &e, &e).is_zero() {
        return Err(Error::NotIsotropic);
    }
    let a = primitive(&gram.mul_vec(&e)).ok_or(Error::DegenerateForm)?;
    let n = eps.len();
    let j = (0..n)
        .filter(|&i| !a[i].is_zero())
        .min_by(|&x, &y| a[x].abs().cmp(&a[y].abs()).then(x.cmp(&y)))
        .expect("nonzero");
    let replaced = (0..n).find(|&i| i != j && !eps[i].is_zero()).expect("ε has two nonzero entries");
    let mut quotient = Vec::with_capacity(n - 2);
    for i in (0..n).filter(|&i| i != j && i != replaced) {
        let mut u = vec![Zero::zero(); n];
        u[i] = a[j].clone();
        u[j] = -a[i].clone();
        quotient.push(primitive_int(&u));
    }
    let mut perp = vec![eps.clone()];
    perp.extend(quotient.iter().cloned());
    Ok((perp, quotient))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerTest {
    pub fixes_line: bool,
    pub fixes_vector: bool,
    /// Identity on `ℚε`, on `ε^⊥/ℚε` and on `V/ε^⊥`.
    pub in_unipotent_radical: bool,
    pub trivial: bool,
}

/// Precomputed data for one isotropic vector.
#[derive(Clone, Debug)]
pub struct Parabolic {
    pub eps: IntVector,
    pub perp_basis: Vec<IntVector>,
    pub quotient_basis: Vec<IntVector>,
    gram: RatMatrix,
    quotient_gram_inv: RatMatrix,
    /// A standard basis vector pairing nontrivially with `ε`.
    x0: IntVector,
    /// Inverse of the matrix with columns `ε, q₁, …, q_{n−2}, x0`.
    coords: RatMatrix,
}

impl Parabolic {
    pub fn new(gram: &RatMatrix, eps: &IntVector) -> Result<Self> {
        let (perp_basis, quotient_basis) = orthocomplement(gram, eps)?;
        let n = eps.len();
        let ge = gram.mul_vec(&to_rat_vec(eps));
        let k = (0..n).find(|&i| !ge[i].is_zero()).expect("nondegenerate");
        let x0: IntVector = (0..n).map(|i| ((i == k) as i64).into()).collect();
        let mut cols: Vec<RatVector> = perp_basis.iter().map(|b| to_rat_vec(b)).collect();
        cols.push(to_rat_vec(&x0));
        let coords = RatMatrix::from_columns(&cols)?.inverse()?;
        let qcols: Vec<RatVector> = quotient_basis.iter().map(|b| to_rat_vec(b)).collect();
        let quotient_gram_inv = if qcols.is_empty() {
            RatMatrix::zeros(0, 0)
        } else {
            let q = RatMatrix::from_columns(&qcols)?;
            (&(&q.transpose() * gram) * &q).inverse().map_err(|_| Error::DegenerateForm)?
        };
        Ok(Self { eps: eps.clone(), perp_basis, quotient_basis, gram: gram.clone(), quotient_gram_inv, x0, coords })
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient_basis.len()
    }

    fn product(&self, a: &[Rat], b: &[Rat]) -> Rat {
        bilinear(&self.gram, a, b)
    }

    /// Coordinates of `x ∈ ε^⊥` in the quotient basis (the `ε` component is
    /// dropped).
    pub fn quotient_coords(&self, x: &[Rat]) -> Result<RatVector> {
        let c = self.coords.mul_vec(x);
        let n = c.len();
        if !c[n - 1].is_zero() {
            return Err(Error::Dimension("vector is not orthogonal to ε".into()));
        }
        Ok(c[1..n - 1].to_vec())
    }

    pub fn quotient_coords_int(&self, x: &IntVector) -> Result<RatVector> {
        self.quotient_coords(&to_rat_vec(x))
    }

    pub fn test(&self, g: &IntMatrix) -> StabilizerTest {
        let e = to_rat_vec(&self.eps);
        let ge = to_rat_vec(&g.mul_vec(&self.eps));
        let fixes_line = proportionality(&ge, &e).is_some();
        let fixes_vector = ge == e;
        let trivial = g.is_identity();
        let moves_into_line = |x: &IntVector| {
            let d: RatVector = g.mul_vec(x).iter().zip(x).map(|(a, b)| Rat::from_integer(a - b)).collect();
            d.iter().all(Zero::is_zero) || proportionality(&d, &e).is_some()
        };
        let top_trivial = {
            let d: RatVector =
                g.mul_vec(&self.x0).iter().zip(&self.x0).map(|(a, b)| Rat::from_integer(a - b)).collect();
            self.product(&d, &e).is_zero()
        };
        let in_unipotent_radical =
            fixes_vector && top_trivial && self.quotient_basis.iter().all(moves_into_line);
        StabilizerTest { fixes_line, fixes_vector, in_unipotent_radical, trivial }
    }

    /// `φ(q_i)` from `u q_i = q_i + φ(q_i) ε`, converted to the vector `t` of
    /// `ε^⊥/ℚε` with `φ(w) = w·t`, in quotient coordinates.
    pub fn translation(&self, u: &IntMatrix) -> Result<RatVector> {
        if !self.test(u).in_unipotent_radical {
            return Err(Error::NotUnipotent);
        }
        let e = to_rat_vec(&self.eps);
        let phi: RatVector = self
            .quotient_basis
            .iter()
            .map(|q| {
                let d: RatVector = u.mul_vec(q).iter().zip(q).map(|(a, b)| Rat::from_integer(a - b)).collect();
                proportionality(&d, &e).unwrap_or_else(Rat::zero)
            })
            .collect();
        Ok(self.quotient_gram_inv.mul_vec(&phi))
    }

    /// Matrix of the action of a line-fixing `r` on `ε^⊥/ℚε`.
    pub fn quotient_action(&self, r: &IntMatrix) -> Result<RatMatrix> {
        if !self.test(r).fixes_line {
            return Err(Error::LineNotFixed);
        }
        let cols: Vec<RatVector> = self
            .quotient_basis
            .iter()
            .map(|q| self.quotient_coords_int(&r.mul_vec(q)))
            .collect::<Result<_>>()?;
        if cols.is_empty() {
            return Ok(RatMatrix::zeros(0, 0));
        }
        RatMatrix::from_columns(&cols)
    }

    /// Scalar `λ` with `rε = λε`.
    pub fn line_scalar(&self, r: &IntMatrix) -> Result<Rat> {
        proportionality(&to_rat_vec(&r.mul_vec(&self.eps)), &to_rat_vec(&self.eps)).ok_or(Error::LineNotFixed)
    }

    /// Rank of the translation vectors of `^r u` over products `r` of at
    /// most three of the given reflections (and the empty product).
    pub fn span_rank(&self, u: &GroupElement, reflections: &[GroupElement]) -> Result<(usize, Vec<GroupElement>)> {
        self.span_rank_from(std::slice::from_ref(u), reflections)
    }

    /// Like [`Parabolic::span_rank`] with several unipotents of the same
    /// radical. Returns the rank and unipotents whose translations form a
    /// basis of the span.
    ///
    /// The span at length `L` is spanned by `r̄·s` for `s` in a basis of the
    /// span at length `L − 1`, so only elements that contributed a new basis
    /// vector are extended (on the left). Candidate translations come from
    /// `t(ʳu) = λ·r̄·t(u)`; each kept conjugate is then built as a matrix and
    /// its translation recomputed from it.
    pub fn span_rank_from(
        &self,
        seeds: &[GroupElement],
        reflections: &[GroupElement],
    ) -> Result<(usize, Vec<GroupElement>)> {
        let actions: Vec<(Rat, RatMatrix, GroupElement)> = reflections
            .iter()
            .map(|r| Ok((self.line_scalar(&r.matrix)?, self.quotient_action(&r.matrix)?, r.inverse()?)))
            .collect::<Result<_>>()?;
        let target = self.quotient_dim();
        let mut basis = EchelonBasis::new();
        let mut used = Vec::new();
        let mut frontier: Vec<(GroupElement, RatVector)> = Vec::new();
        for u in seeds {
            let t = self.translation(&u.matrix)?;
            if basis.insert(&t) {
                used.push(u.clone());
                frontier.push((u.clone(), t));
            }
        }
        for _ in 0..3 {
            let mut next = Vec::new();
            for (e, t) in &frontier {
                for (r, (lam, m, r_inv)) in reflections.iter().zip(&actions) {
                    if basis.len() == target {
                        return Ok((basis.len(), used));
                    }
                    let predicted: RatVector = m.mul_vec(t).iter().map(|x| x * lam).collect();
                    if basis.contains(&predicted) {
                        continue;
                    }
                    let conj = r.compose(e).compose(r_inv);
                    let actual = self.translation(&conj.matrix)?;
                    if actual != predicted {
                        return Err(Error::Inconsistency(format!(
                            "translation of {} disagrees with equivariance",
                            conj.word_string()
                        )));
                    }
                    basis.insert(&actual);
                    used.push(conj.clone());
                    next.push((conj, actual));
                }
            }
            frontier = next;
        }
        Ok((basis.len(), used))
    }
}

pub fn line_stabilizer_test(g: &GroupElement, eps: &IntVector, frame: &Frame) -> Result<StabilizerTest> {
    Ok(Parabolic::new(&frame.gram, eps)?.test(&g.matrix))
}

pub fn translation_vector(u: &GroupElement, eps: &IntVector, frame: &Frame) -> Result<RatVector> {
    Parabolic::new(&frame.gram, eps)?.translation(&u.matrix)
}

pub fn span_rank_witness(
    u: &GroupElement,
    reflections: &[GroupElement],
    eps: &IntVector,
    frame: &Frame,
) -> Result<usize> {
    Ok(Parabolic::new(&frame.gram, eps)?.span_rank(u, reflections)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat, vector_rank};
    use crate::witness::group::conjugate;
    use crate::monodromy::build_pair;
    use crate::polycore::parse_poly;
    use crate::witness::group::{reflection_matrix, Letter};

    fn frame() -> Frame {
        let p = build_pair(&parse_poly("(x^5-1)").unwrap(), &parse_poly("(x+1)*(x^2+1)^2").unwrap()).unwrap();
        Frame::cyclic(&p).unwrap()
    }

    /// `C_{A²v} C_v`.
    fn u(f: &Frame) -> GroupElement {
        f.element(vec![Letter::A, Letter::A, Letter::C, Letter::AInv, Letter::AInv, Letter::C]).unwrap()
    }

    #[test]
    fn complement_of_base_epsilon() {
        let f = frame();
        let eps = int_vec(&[1, 0, -1, 0, 0]);
        let (perp, quot) = orthocomplement(&f.gram, &eps).unwrap();
        assert_eq!(perp.len(), 4);
        assert_eq!(quot, vec![int_vec(&[0, 1, 0, 0, 0]), int_vec(&[0, 0, 1, 0, 0]), int_vec(&[0, 0, 0, 1, 1])]);
        let listed = [eps.clone(), int_vec(&[1, 0, 0, 0, 0]), int_vec(&[0, 1, 0, 0, 0]), int_vec(&[-1, 0, 0, 1, 1])];
        let mut rows: Vec<RatVector> = perp.iter().map(|b| to_rat_vec(b)).collect();
        for w in &listed {
            assert!(f.product_int(w, &eps).is_zero());
            rows.push(to_rat_vec(w));
        }
        assert_eq!(vector_rank(&rows), 4);
        assert_eq!(orthocomplement(&f.gram, &int_vec(&[1, 0, 0, 0, 0])), Err(Error::NotIsotropic));
    }

    #[test]
    fn base_unipotent() {
        let f = frame();
        let eps = int_vec(&[-1, 0, 1, 0, 0]);
        let u = u(&f);
        let t = line_stabilizer_test(&u, &eps, &f).unwrap();
        assert!(t.fixes_line && t.fixes_vector && t.in_unipotent_radical && !t.trivial);
        assert_eq!(u.apply(&f.v), int_vec(&[-1, 0, 2, 0, 0]));

        let par = Parabolic::new(&f.gram, &eps).unwrap();
        let tv = par.translation(&u.matrix).unwrap();
        assert_eq!(tv, par.quotient_coords_int(&f.v).unwrap());
    }

    #[test]
    fn reflection_in_v_is_not_unipotent() {
        let f = frame();
        let eps = int_vec(&[-1, 0, 1, 0, 0]);
        let c = f.element(vec![Letter::C]).unwrap();
        let t = line_stabilizer_test(&c, &eps, &f).unwrap();
        assert!(t.fixes_vector && !t.in_unipotent_radical);
        assert_eq!(translation_vector(&c, &eps, &f), Err(Error::NotUnipotent));
        let id = f.identity();
        let t = line_stabilizer_test(&id, &eps, &f).unwrap();
        assert!(t.in_unipotent_radical && t.trivial);
        assert_eq!(translation_vector(&id, &eps, &f).unwrap(), vec![rat(0); 3]);
        assert_eq!(span_rank_witness(&id, &[], &eps, &f).unwrap(), 0);
    }

    #[test]
    fn translation_is_equivariant() {
        let f = frame();
        let eps = int_vec(&[-1, 0, 1, 0, 0]);
        let par = Parabolic::new(&f.gram, &eps).unwrap();
        let u = u(&f);
        let t = par.translation(&u.matrix).unwrap();
        for w in [int_vec(&[0, 1, 0, 0, 0]), int_vec(&[-1, 0, 0, 1, 1])] {
            let r = reflection_matrix(&f, &w).unwrap();
            let lhs = par.translation(&conjugate(&r, &u).unwrap().matrix).unwrap();
            let lam = par.line_scalar(&r.matrix).unwrap();
            let rhs: RatVector = par.quotient_action(&r.matrix).unwrap().mul_vec(&t).iter().map(|x| x * &lam).collect();
            assert_eq!(lhs, rhs);
        }
    }
}
