//! The padding construction `f = f₀·P(x^d)`, `g = g₀·Q(x^d)` and the checks
//! that the span of `v, Av, …, A⁴v` is isometric to the base pair's space.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector, Matrix, Rat, RatMatrix};
use crate::monodromy::{build_pair, HyperPair};
use crate::polycore::{parse_poly, IntPoly};
use crate::quadform::{self, RankCertificate};

/// Degree of the base pair.
pub const BASE_DIM: usize = 5;
/// Search bound used when certifying the base pair's ℚ-rank.
const BASE_RANK_BOUND: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedPair {
    pub f0: IntPoly,
    pub g0: IntPoly,
    pub p: IntPoly,
    pub q: IntPoly,
    pub d: usize,
    pub f: IntPoly,
    pub g: IntPoly,
    pub base: HyperPair,
    pub pair: HyperPair,
    /// `n×5` matrix whose column `k` is `A^k v`; it sends the base vector
    /// `A₀^k v₀` to `A^k v`.
    pub embedding: IntMatrix,
}

impl PaddedPair {
    pub fn m(&self) -> usize {
        self.p.degree()
    }

    pub fn n(&self) -> usize {
        self.pair.n
    }
}

fn hyp(msg: impl Into<String>) -> Error {
    Error::PaddingHypothesis(msg.into())
}

fn standard_base() -> (IntPoly, IntPoly) {
    (parse_poly("(x^5-1)").expect("literal"), parse_poly("(x+1)*(x^2+1)^2").expect("literal"))
}

/// Validates every hypothesis of the construction and builds the padded pair.
pub fn pad_pair(f0: &IntPoly, g0: &IntPoly, p: &IntPoly, q: &IntPoly, d: usize) -> Result<PaddedPair> {
    if f0.degree() != BASE_DIM || g0.degree() != BASE_DIM {
        return Err(hyp(format!("base polynomials must have degree {BASE_DIM}")));
    }
    let base = build_pair(f0, g0)?;
    if d == 0 {
        return Err(hyp("composition exponent d must be positive"));
    }
    if !p.is_monic() || !q.is_monic() {
        return Err(hyp("P and Q must be monic"));
    }
    if p.degree() != q.degree() {
        return Err(hyp(format!("deg P = {} differs from deg Q = {}", p.degree(), q.degree())));
    }
    if !p.constant_term().is_one() || !q.constant_term().is_one() {
        return Err(hyp(format!(
            "P(0) = {} and Q(0) = {} must both equal 1",
            p.constant_term(),
            q.constant_term()
        )));
    }
    let pq = p.gcd(q);
    if pq.degree() > 0 {
        return Err(hyp(format!("P and Q are not coprime (common factor {})", pq.display_in('y'))));
    }
    let f = f0 * &p.compose_power(d);
    let g = g0 * &q.compose_power(d);
    let fg = f.gcd(&g);
    if fg.degree() > 0 {
        return Err(hyp(format!("f and g are not coprime (common factor {fg})")));
    }
    if !base_rank_is_two(&base, f0, g0)? {
        return Err(hyp("base pair does not have certified Q-rank 2"));
    }
    let pair = build_pair(&f, &g)?;
    Ok(assemble(f0, g0, p, q, d, f, g, base, pair))
}

fn base_rank_is_two(base: &HyperPair, f0: &IntPoly, g0: &IntPoly) -> Result<bool> {
    if (f0.clone(), g0.clone()) == standard_base() {
        return Ok(true);
    }
    let cert = quadform::q_rank(base, BASE_RANK_BOUND)?;
    Ok(cert.lo == 2 && cert.hi == 2)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    f0: &IntPoly,
    g0: &IntPoly,
    p: &IntPoly,
    q: &IntPoly,
    d: usize,
    f: IntPoly,
    g: IntPoly,
    base: HyperPair,
    pair: HyperPair,
) -> PaddedPair {
    let cols: Vec<IntVector> = pair.cyclic_vectors().into_iter().take(BASE_DIM).collect();
    let embedding = Matrix::from_columns(&cols).expect("rectangular");
    PaddedPair { f0: f0.clone(), g0: g0.clone(), p: p.clone(), q: q.clone(), d, f, g, base, pair, embedding }
}

/// Builds the padded data without validating `P`, `Q` or the constant terms.
/// Only meant for negative controls; the result need not be a valid pair.
pub fn pad_pair_unchecked(f0: &IntPoly, g0: &IntPoly, p: &IntPoly, q: &IntPoly, d: usize) -> Result<PaddedPair> {
    let base = build_pair(f0, g0)?;
    let f = f0 * &p.compose_power(d);
    let g = g0 * &q.compose_power(d);
    let pair = raw_pair(&f, &g)?;
    Ok(assemble(f0, g0, p, q, d, f, g, base, pair))
}

fn raw_pair(f: &IntPoly, g: &IntPoly) -> Result<HyperPair> {
    use crate::monodromy::{companion, PairKind, PairType};
    let n = f.degree();
    let a = companion(f)?;
    let b = companion(g)?;
    let a_inv = a.unimodular_inverse()?;
    let c = &a_inv * &b;
    let v = a_inv.mul_vec(&(g - f).coeff_vector(n));
    let kind = PairType { kind: PairKind::Orthogonal, ratio: -1 };
    Ok(HyperPair { f: f.clone(), g: g.clone(), n, kind, a, a_inv, b, c, v })
}

/// Coefficient of `x^{deg f − 1}` in `x^k(f − g) mod f`.
fn top_remainder(f: &IntPoly, g: &IntPoly, k: usize) -> Result<num_bigint::BigInt> {
    let r = (f - g).shift(k).rem(f)?;
    Ok(r.coeff(f.degree() - 1))
}

/// For `k = 0..4`, the top remainder coefficients of the padded and base
/// pairs agree.
pub fn remainder_coeff_check(pp: &PaddedPair) -> bool {
    (0..BASE_DIM).all(|k| match (top_remainder(&pp.f, &pp.g, k), top_remainder(&pp.f0, &pp.g0, k)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    })
}

/// Gram of `v, Av, …, A^{k−1}v` using `v·w = ` top coefficient of `w`.
fn leading_gram(pair: &HyperPair, k: usize) -> RatMatrix {
    let vecs = pair.cyclic_vectors();
    let top: Vec<Rat> = vecs.iter().map(|w| Rat::from_integer(w[pair.n - 1].clone())).collect();
    let mut g = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = top[i.abs_diff(j)].clone();
        }
    }
    g
}

/// The 5×5 Gram of `A^k v` in the padded space equals the base Gram, and is
/// nondegenerate.
pub fn isometry_check(pp: &PaddedPair) -> bool {
    let padded = leading_gram(&pp.pair, BASE_DIM);
    let base = leading_gram(&pp.base, BASE_DIM);
    padded == base && !padded.determinant().map(|d| d.is_zero()).unwrap_or(true)
}

/// Same statement through the invariant form: `Eᵀ H E` equals the base
/// cyclic Gram, with `H` solved from `AᵀHA = H`, `BᵀHB = H`.
pub fn isometry_check_invariant(pp: &PaddedPair) -> Result<bool> {
    let h = quadform::gram_invariance(&pp.pair)?.gram;
    let e = pp.embedding.to_rational();
    let restricted = &(&e.transpose() * &h) * &e;
    let base = quadform::gram_remainder(&pp.base)?.gram;
    Ok(restricted == base && !restricted.determinant()?.is_zero())
}

/// ℚ-rank of the padded pair, seeded with the base pair's isotropic vectors
/// carried over by the embedding (cyclic coordinates extend by zeros).
pub fn padded_q_rank(pp: &PaddedPair, bound: u32) -> Result<RankCertificate> {
    let base_cert = quadform::q_rank(&pp.base, bound)?;
    let n = pp.n();
    let seeds: Vec<IntVector> = base_cert
        .isotropic_witnesses
        .iter()
        .map(|w| {
            let mut s = w.clone();
            s.resize(n, Zero::zero());
            s
        })
        .collect();
    let space = quadform::gram_remainder(&pp.pair)?;
    let mut cert = quadform::witt_decompose_from(&space, bound, &seeds);
    if !seeds.is_empty() {
        cert.notes.push(format!("{} witness(es) carried over from the base pair", seeds.len()));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_in;

    fn y(s: &str) -> IntPoly {
        parse_poly_in(s, 'y').unwrap()
    }

    #[test]
    fn first_family() {
        let (f0, g0) = standard_base();
        let pp = pad_pair(&f0, &g0, &y("(y^2+y+1)"), &y("(y^2+1)"), 6).unwrap();
        assert_eq!(pp.f, parse_poly("(x^5-1)*(x^12+x^6+1)").unwrap());
        assert_eq!(pp.g, parse_poly("(x+1)*(x^2+1)^2*(x^12+1)").unwrap());
        assert_eq!(pp.n(), 17);
        assert!(remainder_coeff_check(&pp));
        assert!(isometry_check(&pp));
    }

    #[test]
    fn second_family() {
        let (f0, g0) = standard_base();
        let pp = pad_pair(&f0, &g0, &y("(y^2-y+1)"), &y("(y^2+1)"), 6).unwrap();
        assert_eq!(pp.f, parse_poly("(x^5-1)*(x^12-x^6+1)").unwrap());
        assert!(remainder_coeff_check(&pp));
        assert!(isometry_check(&pp));
    }

    #[test]
    fn trivial_padding() {
        let (f0, g0) = standard_base();
        let pp = pad_pair(&f0, &g0, &IntPoly::one(), &IntPoly::one(), 6).unwrap();
        assert_eq!(pp.pair, pp.base);
        assert!(remainder_coeff_check(&pp));
        assert!(isometry_check(&pp));
        assert!(isometry_check_invariant(&pp).unwrap());
    }

    #[test]
    fn squared_padding() {
        let (f0, g0) = standard_base();
        let pp = pad_pair(&f0, &g0, &y("(y^2+y+1)^2"), &y("(y^2+1)^2"), 6).unwrap();
        assert!(remainder_coeff_check(&pp));
        assert!(isometry_check(&pp));
    }

    #[test]
    fn hypothesis_failures() {
        let (f0, g0) = standard_base();
        let same = pad_pair(&f0, &g0, &y("(y^2+1)"), &y("(y^2+1)"), 6);
        assert!(matches!(same, Err(Error::PaddingHypothesis(ref m)) if m.contains("not coprime")));
        let bad_const = pad_pair(&f0, &g0, &y("(y^2+y+1)"), &y("(y^2+2)"), 6);
        assert!(matches!(bad_const, Err(Error::PaddingHypothesis(ref m)) if m.contains("P(0)")));
        let bad_deg = pad_pair(&f0, &g0, &y("(y^2+y+1)"), &y("(y+1)"), 6);
        assert!(matches!(bad_deg, Err(Error::PaddingHypothesis(_))));
    }

    #[test]
    fn corrupted_constant_fails_isometry() {
        let (f0, g0) = standard_base();
        let pp = pad_pair_unchecked(&f0, &g0, &y("(y^2+y+1)"), &y("(y^2+2)"), 6).unwrap();
        assert!(!isometry_check(&pp));
    }
}
