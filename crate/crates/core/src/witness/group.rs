use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, to_rat_vec, IntMatrix, IntVector, Rat, RatMatrix, RatVector};
use crate::monodromy::{companion, HyperPair};
use crate::quadform::{self, BasisLabel};

/// Generators and the invariant form written in one fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub basis: BasisLabel,
    pub gram: RatMatrix,
    pub a: IntMatrix,
    pub a_inv: IntMatrix,
    pub c: IntMatrix,
    /// The reflection vector `v` in this basis.
    pub v: IntVector,
}

impl Frame {
    /// Basis `v, Av, …, A^{n−1}v`. Here `A` is again the companion matrix of
    /// `f`, `v = e₀`, and `C(w) = w − (w·v)v`.
    pub fn cyclic(pair: &HyperPair) -> Result<Self> {
        let space = quadform::gram_remainder(pair)?;
        let n = pair.n;
        let a = companion(&pair.f)?;
        let a_inv = a.unimodular_inverse()?;
        let mut c = IntMatrix::identity(n);
        for j in 0..n {
            let g0j = space.gram[(0, j)].to_integer();
            c[(0, j)] = &c[(0, j)] - g0j;
        }
        let mut v = vec![Zero::zero(); n];
        v[0] = 1.into();
        let frame = Self { basis: BasisLabel::Cyclic, gram: space.gram, a, a_inv, c, v };
        frame.check_generators()?;
        Ok(frame)
    }

    /// Basis `1, x, …, x^{n−1}` with the form from the invariance equations.
    pub fn standard(pair: &HyperPair) -> Result<Self> {
        let space = quadform::gram_invariance(pair)?;
        let frame = Self {
            basis: BasisLabel::Standard,
            gram: space.gram,
            a: pair.a.clone(),
            a_inv: pair.a_inv.clone(),
            c: pair.c.clone(),
            v: pair.v.clone(),
        };
        frame.check_generators()?;
        Ok(frame)
    }

    fn check_generators(&self) -> Result<()> {
        for m in [&self.a, &self.c] {
            if !self.preserves(m) {
                return Err(Error::Inconsistency("generator does not preserve the form".into()));
            }
        }
        if self.reflection(&self.v)? != self.c {
            return Err(Error::Inconsistency("C is not the reflection in v".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn preserves(&self, m: &IntMatrix) -> bool {
        let r = m.to_rational();
        &(&r.transpose() * &self.gram) * &r == self.gram
    }

    pub fn product(&self, a: &[Rat], b: &[Rat]) -> Rat {
        bilinear(&self.gram, a, b)
    }

    pub fn product_int(&self, a: &IntVector, b: &IntVector) -> Rat {
        self.product(&to_rat_vec(a), &to_rat_vec(b))
    }

    pub fn b(&self) -> IntMatrix {
        &self.a * &self.c
    }

    /// Reflection matrix in `w`, which must be integral:
    /// `I − (2/(w·w))·w·(Hw)ᵀ`.
    pub fn reflection(&self, w: &IntVector) -> Result<IntMatrix> {
        let n = self.dim();
        let wr = to_rat_vec(w);
        let hw = self.gram.mul_vec(&wr);
        let ww = crate::linalg::dot(&wr, &hw);
        if ww.is_zero() {
            return Err(Error::IsotropicReflection);
        }
        let c = Rat::from_integer(2.into()) / ww;
        let scaled: RatVector = wr.iter().map(|x| x * &c).collect();
        let mut m = IntMatrix::identity(n);
        for i in 0..n {
            if scaled[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let e = &scaled[i] * &hw[j];
                if !e.is_integer() {
                    return Err(Error::NonIntegralReflection);
                }
                m[(i, j)] -= e.to_integer();
            }
        }
        Ok(m)
    }

    pub fn letter_matrix(&self, l: &Letter) -> Result<IntMatrix> {
        Ok(match l {
            Letter::A => self.a.clone(),
            Letter::AInv => self.a_inv.clone(),
            Letter::B => self.b(),
            Letter::BInv => &self.c * &self.a_inv,
            Letter::C => self.c.clone(),
            Letter::Reflection(w) => self.reflection(w)?,
        })
    }

    /// Evaluates a word (leftmost letter acts last) and checks the result
    /// preserves the form.
    pub fn element(&self, word: Vec<Letter>) -> Result<GroupElement> {
        let mut m = IntMatrix::identity(self.dim());
        for l in &word {
            m = &m * &self.letter_matrix(l)?;
        }
        if !self.preserves(&m) {
            return Err(Error::NotAnIsometry);
        }
        Ok(GroupElement { matrix: m, word })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { matrix: IntMatrix::identity(self.dim()), word: Vec::new() }
    }

    /// Re-evaluates the word of `g` and compares with its matrix.
    pub fn verify(&self, g: &GroupElement) -> Result<bool> {
        Ok(self.element(g.word.clone())?.matrix == g.matrix && self.preserves(&g.matrix))
    }
}

/// Letters of a word in the monodromy group. `Reflection(w)` is the
/// reflection in an explicit vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
    C,
    Reflection(IntVector),
}

impl Letter {
    pub fn inverse(&self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
            other => other.clone(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::A => f.write_str("A"),
            Letter::AInv => f.write_str("A^-1"),
            Letter::B => f.write_str("B"),
            Letter::BInv => f.write_str("B^-1"),
            Letter::C => f.write_str("C"),
            Letter::Reflection(w) => {
                let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
                write!(f, "C[{}]", parts.join(","))
            }
        }
    }
}

impl FromStr for Letter {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "A" => Letter::A,
            "A^-1" => Letter::AInv,
            "B" => Letter::B,
            "B^-1" => Letter::BInv,
            "C" => Letter::C,
            _ => {
                let inner = s
                    .strip_prefix("C[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| format!("unknown letter {s:?}"))?;
                let w = inner
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| format!("bad coefficient in {s:?}")))
                    .collect::<std::result::Result<_, _>>()?;
                Letter::Reflection(w)
            }
        })
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub fn word_string(word: &[Letter]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// An element of the group with the word that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub matrix: IntMatrix,
    pub word: Vec<Letter>,
}

impl GroupElement {
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        GroupElement { matrix: &self.matrix * &other.matrix, word }
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        let matrix = self.matrix.unimodular_inverse()?;
        let word = self.word.iter().rev().map(Letter::inverse).collect();
        Ok(GroupElement { matrix, word })
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn apply(&self, x: &IntVector) -> IntVector {
        self.matrix.mul_vec(x)
    }

    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }
}

/// `x − (2(x·w)/(w·w))·w`.
pub fn reflect(gram: &RatMatrix, w: &[Rat], x: &[Rat]) -> Result<RatVector> {
    let ww = bilinear(gram, w, w);
    if ww.is_zero() {
        return Err(Error::IsotropicReflection);
    }
    let c = Rat::from_integer(2.into()) * bilinear(gram, x, w) / ww;
    Ok(x.iter().zip(w).map(|(xi, wi)| xi - &c * wi).collect())
}

/// The reflection in `w` as a group element with word `[C_w]`.
pub fn reflection_matrix(frame: &Frame, w: &IntVector) -> Result<GroupElement> {
    let matrix = frame.reflection(w)?;
    Ok(GroupElement { matrix, word: vec![Letter::Reflection(w.clone())] })
}

/// `C_{g·v} = g·C·g⁻¹` for `w = g·v`, with the matrix computed directly from
/// `w`. Callers that need certainty re-evaluate the word with
/// [`Frame::verify`].
pub fn orbit_reflection(frame: &Frame, w: &IntVector, g_word: &[Letter]) -> Result<GroupElement> {
    let mut word = g_word.to_vec();
    word.push(Letter::C);
    word.extend(g_word.iter().rev().map(Letter::inverse));
    Ok(GroupElement { matrix: frame.reflection(w)?, word })
}

/// Verified orbit reflections keyed by vector, shared across searches.
#[derive(Debug)]
pub struct ReflectionCache<'a> {
    frame: &'a Frame,
    map: HashMap<IntVector, GroupElement>,
}

impl<'a> ReflectionCache<'a> {
    pub fn new(frame: &'a Frame) -> Self {
        ReflectionCache { frame, map: HashMap::new() }
    }

    /// `C_w` with word `g C g⁻¹` for `w = g·v`; the word is re-evaluated the
    /// first time `w` is seen.
    pub fn get(&mut self, w: &IntVector, g_word: &[Letter]) -> Result<GroupElement> {
        if let Some(e) = self.map.get(w) {
            return Ok(e.clone());
        }
        let e = orbit_reflection(self.frame, w, g_word)?;
        if !self.frame.verify(&e)? {
            return Err(Error::Inconsistency(format!("word {} does not give C_w", e.word_string())));
        }
        self.map.insert(w.clone(), e.clone());
        Ok(e)
    }
}

/// `g·h·g⁻¹`.
pub fn conjugate(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    Ok(g.compose(h).compose(&g.inverse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;
    use crate::monodromy::build_pair;
    use crate::polycore::parse_poly;

    fn base() -> HyperPair {
        build_pair(&parse_poly("(x^5-1)").unwrap(), &parse_poly("(x+1)*(x^2+1)^2").unwrap()).unwrap()
    }

    fn e(i: usize) -> IntVector {
        (0..5).map(|j| ((i == j) as i64).into()).collect()
    }

    #[test]
    fn orbit_reflection_matches_conjugate() {
        let f = Frame::cyclic(&base()).unwrap();
        let g = f.element(vec![Letter::A, Letter::C, Letter::A]).unwrap();
        let c = f.element(vec![Letter::C]).unwrap();
        let r = orbit_reflection(&f, &g.apply(&f.v), &g.word).unwrap();
        assert_eq!(r, conjugate(&g, &c).unwrap());
        assert!(f.verify(&r).unwrap());
    }

    #[test]
    fn reflection_in_v_is_c() {
        for frame in [Frame::cyclic(&base()).unwrap(), Frame::standard(&base()).unwrap()] {
            assert_eq!(reflection_matrix(&frame, &frame.v).unwrap().matrix, frame.c);
            let v = to_rat_vec(&frame.v);
            let neg: RatVector = v.iter().map(|x| -x).collect();
            assert_eq!(reflect(&frame.gram, &v, &v).unwrap(), neg);
        }
    }

    #[test]
    fn reflection_in_av_is_conjugate() {
        let f = Frame::cyclic(&base()).unwrap();
        let ca = reflection_matrix(&f, &e(1)).unwrap();
        let a = f.element(vec![Letter::A]).unwrap();
        let c = f.element(vec![Letter::C]).unwrap();
        assert_eq!(conjugate(&a, &c).unwrap().matrix, ca.matrix);
    }

    #[test]
    fn reflecting_twice_is_identity() {
        let f = Frame::cyclic(&base()).unwrap();
        let eps = int_vec(&[1, 0, -1, 0, 0]);
        assert_eq!(reflection_matrix(&f, &eps), Err(Error::IsotropicReflection));
        let r = reflection_matrix(&f, &e(2)).unwrap();
        assert!(r.compose(&r).is_identity());
    }

    #[test]
    fn non_integral_reflection_rejected() {
        let f = Frame::cyclic(&base()).unwrap();
        // v + Av has norm 6 and pairs to 4 with A³v, so 2·4/6 appears.
        assert_eq!(reflection_matrix(&f, &int_vec(&[1, 1, 0, 0, 0])), Err(Error::NonIntegralReflection));
    }

    #[test]
    fn words_evaluate_and_invert() {
        let f = Frame::cyclic(&base()).unwrap();
        let g = f.element(vec![Letter::A, Letter::C, Letter::AInv, Letter::B]).unwrap();
        assert!(f.verify(&g).unwrap());
        let gi = g.inverse().unwrap();
        assert!(f.verify(&gi).unwrap());
        assert!(g.compose(&gi).is_identity());
        assert_eq!(f.element(vec![Letter::B, Letter::BInv]).unwrap().matrix, IntMatrix::identity(5));
        assert!(conjugate(&g, &f.identity()).unwrap().is_identity());
    }

    #[test]
    fn letters_round_trip_through_text() {
        for l in [Letter::A, Letter::AInv, Letter::BInv, Letter::C, Letter::Reflection(int_vec(&[1, -1, 0]))] {
            assert_eq!(l.to_string().parse::<Letter>().unwrap(), l);
        }
    }
}
