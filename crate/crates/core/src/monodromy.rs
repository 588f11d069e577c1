//! Monodromy generators `A`, `B`, `C = A⁻¹B` and the reflection vector `v`
//! of a pair of monic polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector, Matrix};
use crate::polycore::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Orthogonal,
    Symplectic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairType {
    pub kind: PairKind,
    /// `f(0)/g(0)`, either `1` or `-1`.
    pub ratio: i8,
}

/// Matrix of multiplication by `x` on `ℚ[x]/(f)` in the basis `1, x, …, x^{n−1}`.
pub fn companion(f: &IntPoly) -> Result<IntMatrix> {
    f.require_monic()?;
    let n = f.degree();
    if n == 0 {
        return Err(Error::Dimension("companion matrix of a constant".into()));
    }
    let mut m = IntMatrix::zeros(n, n);
    for j in 0..n - 1 {
        m[(j + 1, j)] = BigInt::one();
    }
    for i in 0..n {
        m[(i, n - 1)] = -f.coeff(i);
    }
    Ok(m)
}

fn unit_constant(p: &IntPoly) -> Result<i8> {
    let c = p.constant_term();
    if c.is_one() {
        Ok(1)
    } else if (-c.clone()).is_one() {
        Ok(-1)
    } else {
        Err(Error::ConstantNotUnit(c.to_string()))
    }
}

/// Orthogonal when `f(0)/g(0) = −1`, symplectic when it is `+1`.
pub fn classify_type(f: &IntPoly, g: &IntPoly) -> Result<PairType> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch { f: f.degree(), g: g.degree() });
    }
    let ratio = unit_constant(f)? * unit_constant(g)?;
    if ratio == 1 {
        if f.degree() % 2 == 1 {
            return Err(Error::InconsistentSymplectic(f.degree()));
        }
        Ok(PairType { kind: PairKind::Symplectic, ratio })
    } else {
        Ok(PairType { kind: PairKind::Orthogonal, ratio })
    }
}

/// `(−1)^{deg f} f(−x)`, the monic polynomial whose roots are negated.
pub fn scalar_shift(f: &IntPoly) -> IntPoly {
    let s = f.negate_variable();
    if f.degree() % 2 == 1 { -&s } else { s }
}

/// Smallest `d > 1` with `f, g ∈ ℤ[x^d]`. Such a pair is imprimitive; the
/// converse does not hold, so `None` says nothing about primitivity.
pub fn imprimitivity_flag(f: &IntPoly, g: &IntPoly) -> Option<usize> {
    let n = f.degree().max(g.degree());
    (2..=n).find(|&d| f.is_in_power(d) && g.is_in_power(d))
}

/// A validated pair with its monodromy data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperPair {
    pub f: IntPoly,
    pub g: IntPoly,
    pub n: usize,
    pub kind: PairType,
    pub a: IntMatrix,
    pub a_inv: IntMatrix,
    pub b: IntMatrix,
    pub c: IntMatrix,
    /// `A⁻¹(g − f)` in the basis `1, x, …, x^{n−1}`.
    pub v: IntVector,
}

/// Builds an orthogonal pair: monic, equal degree, coprime, `f(0) = −1`,
/// `g(0) = 1`.
pub fn build_pair(f: &IntPoly, g: &IntPoly) -> Result<HyperPair> {
    check_shape(f, g)?;
    let (f0, g0) = (f.constant_term(), g.constant_term());
    let want_f = -BigInt::one();
    if f0 != want_f || !g0.is_one() {
        let n = f.degree();
        let hint = if f0.is_one() && g0 == want_f && n % 2 == 1 {
            "; swap f and g, or apply the scalar shift x -> -x to both".to_string()
        } else if f0.is_one() && g0 == want_f {
            "; swap f and g".to_string()
        } else {
            String::new()
        };
        return Err(Error::ConstantTerms { f0: f0.to_string(), g0: g0.to_string(), hint });
    }
    build_any(f, g)
}

fn check_shape(f: &IntPoly, g: &IntPoly) -> Result<()> {
    f.require_monic()?;
    g.require_monic()?;
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch { f: f.degree(), g: g.degree() });
    }
    if f.degree() == 0 {
        return Err(Error::Dimension("polynomials must be nonconstant".into()));
    }
    let d = f.gcd(g);
    if d.degree() > 0 {
        return Err(Error::NotCoprime(d.to_string()));
    }
    Ok(())
}

/// Builds the monodromy data for a pair of either type.
pub fn build_any(f: &IntPoly, g: &IntPoly) -> Result<HyperPair> {
    check_shape(f, g)?;
    let kind = classify_type(f, g)?;
    let n = f.degree();
    let a = companion(f)?;
    let b = companion(g)?;
    let a_inv = a.unimodular_inverse()?;
    let c = &a_inv * &b;
    let diff = (g - f).coeff_vector(n);
    let v = a_inv.mul_vec(&diff);
    let pair = HyperPair { f: f.clone(), g: g.clone(), n, kind, a, a_inv, b, c, v };
    pair.verify()?;
    Ok(pair)
}

impl HyperPair {
    pub fn is_orthogonal(&self) -> bool {
        self.kind.kind == PairKind::Orthogonal
    }

    /// Re-checks the structural identities; any failure is an internal
    /// inconsistency.
    pub fn verify(&self) -> Result<()> {
        let n = self.n;
        let fail = |what: &str| Err(Error::Inconsistency(what.to_string()));
        if !(&self.a * &self.a_inv).is_identity() {
            return fail("A·A⁻¹ ≠ 1");
        }
        if &self.a * &self.c != self.b {
            return fail("A·C ≠ B");
        }
        let det_a = self.a.determinant()?;
        let det_b = self.b.determinant()?;
        if !det_a.abs().is_one() || !det_b.abs().is_one() {
            return fail("|det A| or |det B| ≠ 1");
        }
        let det_c = self.c.determinant()?;
        if det_c != BigInt::from(self.kind.ratio) {
            return fail("det C ≠ f(0)/g(0)");
        }
        let id = IntMatrix::identity(n);
        let cm1 = &self.c - &id;
        if cm1.to_rational().rank() != 1 {
            return fail("rank(C − 1) ≠ 1");
        }
        let diff = (&self.g - &self.f).coeff_vector(n);
        if self.a.mul_vec(&self.v) != diff {
            return fail("A·v ≠ g − f");
        }
        for j in 0..n - 1 {
            if !cm1.column(j).iter().all(Zero::is_zero) {
                return fail("(C − 1) is nonzero on a lower basis vector");
            }
        }
        let neg_v: IntVector = self.v.iter().map(|x| -x).collect();
        if cm1.column(n - 1) != neg_v {
            return fail("(C − 1)x^{n−1} ≠ −v");
        }
        if self.is_orthogonal() && !(&self.c * &self.c).is_identity() {
            return fail("C² ≠ 1");
        }
        Ok(())
    }

    /// Columns `v, Av, …, A^{n−1}v` in standard coordinates.
    pub fn cyclic_vectors(&self) -> Vec<IntVector> {
        let mut out = Vec::with_capacity(self.n);
        let mut w = self.v.clone();
        for _ in 0..self.n {
            let next = self.a.mul_vec(&w);
            out.push(w);
            w = next;
        }
        out
    }

    /// Base change from the cyclic basis to the standard one.
    pub fn cyclic_basis_matrix(&self) -> IntMatrix {
        Matrix::from_columns(&self.cyclic_vectors()).expect("square")
    }

    /// `A^k v` as a polynomial of degree < n.
    pub fn a_power_v(&self, k: usize) -> IntPoly {
        let mut w = self.v.clone();
        for _ in 0..k {
            w = self.a.mul_vec(&w);
        }
        IntPoly::new(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;
    use crate::polycore::{cyclotomic, parse_poly};

    fn f0() -> IntPoly {
        parse_poly("(x^5-1)").unwrap()
    }

    fn g0() -> IntPoly {
        parse_poly("(x+1)*(x^2+1)^2").unwrap()
    }

    #[test]
    fn companion_examples() {
        let a = companion(&f0()).unwrap();
        assert_eq!(a.column(4), int_vec(&[1, 0, 0, 0, 0]));
        assert_eq!(a.column(1), int_vec(&[0, 0, 1, 0, 0]));
        assert_eq!(companion(&parse_poly("(x-1)").unwrap()).unwrap(), crate::linalg::int_matrix(&[&[1]]));
        let f = parse_poly("(x-1)*(x^2+1)^2").unwrap();
        assert_eq!(companion(&f).unwrap().column(4), int_vec(&[1, -1, 2, -2, 1]));
        assert!(companion(&parse_poly("(2x+1)").unwrap()).is_err());
    }

    #[test]
    fn base_pair() {
        let p = build_pair(&f0(), &g0()).unwrap();
        assert_eq!(IntPoly::new(p.a.mul_vec(&p.v)), parse_poly("(x^4+2x^3+2x^2+x+2)").unwrap());
        assert_eq!(p.v[4], BigInt::from(2));
        assert!(p.is_orthogonal());
    }

    #[test]
    fn second_example_leading_coefficient() {
        let f = parse_poly("(x-1)*(x^2+1)^2").unwrap();
        let g = &parse_poly("(x+1)").unwrap() * &cyclotomic(5);
        let p = build_pair(&f, &g).unwrap();
        assert_eq!(p.a_power_v(1).leading(), BigInt::from(3));
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(matches!(build_pair(&f0(), &f0()), Err(Error::NotCoprime(_))));
        let sh = build_pair(&g0(), &f0()).unwrap_err();
        assert!(matches!(sh, Error::ConstantTerms { ref hint, .. } if hint.contains("swap")));
        let x2 = parse_poly("(x^2+1)").unwrap();
        assert!(matches!(build_pair(&f0(), &x2), Err(Error::DegreeMismatch { f: 5, g: 2 })));
    }

    #[test]
    fn classification() {
        let t = classify_type(&f0(), &g0()).unwrap();
        assert_eq!(t, PairType { kind: PairKind::Orthogonal, ratio: -1 });
        let s = classify_type(&cyclotomic(5), &parse_poly("(x-1)^2*(x+1)^2").unwrap()).unwrap();
        assert_eq!(s.kind, PairKind::Symplectic);
        let odd = classify_type(&parse_poly("(x-1)").unwrap(), &parse_poly("(x-1)").unwrap());
        assert_eq!(odd, Err(Error::InconsistentSymplectic(1)));
        let nonunit = classify_type(&parse_poly("(x-2)").unwrap(), &parse_poly("(x+1)").unwrap());
        assert!(matches!(nonunit, Err(Error::ConstantNotUnit(_))));
    }

    #[test]
    fn symplectic_pair_builds_with_transvection() {
        let p = build_any(&cyclotomic(5), &parse_poly("(x-1)^2*(x+1)^2").unwrap()).unwrap();
        assert!(!p.is_orthogonal());
        assert_eq!(p.c.determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn shifting() {
        assert_eq!(scalar_shift(&parse_poly("(x-1)").unwrap()), parse_poly("(x+1)").unwrap());
        assert_eq!(scalar_shift(&g0()), parse_poly("(x-1)*(x^2+1)^2").unwrap());
        assert_eq!(scalar_shift(&scalar_shift(&g0())), g0());
    }

    #[test]
    fn imprimitivity() {
        let f = parse_poly("(x^2-1)*(x^4+1)").unwrap();
        let g = parse_poly("(x^6+1)").unwrap();
        assert_eq!(imprimitivity_flag(&f, &g), Some(2));
        assert_eq!(imprimitivity_flag(&f0(), &g0()), None);
    }
}
