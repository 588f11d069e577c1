//! Unipotent elements built from two reflections.
//!
//! If `w = g·v` has `w·w = 2` and `w·v = 2s` with `s = ±1`, then
//! `d = s·w − v` is isotropic and `θ = C_w·C_v` acts on `d^⊥` by
//! `x ↦ x + (x·v)d`. The search walks the orbit of `v` under `A^{±1}` and `C`
//! in shortest-word order.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};

use super::group::{conjugate, Frame, GroupElement, Letter, ReflectionCache};
use super::parabolic::Parabolic;
use crate::error::Result;
use crate::linalg::{proportionality, to_rat_vec, IntVector, Rat};

/// Hard cap on orbit size, independent of the word bound.
const ORBIT_LIMIT: usize = 50_000;

const ALPHABET: [Letter; 3] = [Letter::A, Letter::AInv, Letter::C];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub vector: IntVector,
    /// `vector = word · v`.
    pub word: Vec<Letter>,
}

/// Breadth-first orbit of `v`, each new point `letter · node`, deduplicated
/// by vector. Points are listed in the order first reached.
pub fn orbit(frame: &Frame, word_bound: usize) -> Vec<OrbitPoint> {
    let mats: Vec<_> = ALPHABET.iter().map(|l| frame.letter_matrix(l).expect("generator")).collect();
    let mut seen: HashSet<IntVector> = HashSet::new();
    let mut out = vec![OrbitPoint { vector: frame.v.clone(), word: Vec::new() }];
    seen.insert(frame.v.clone());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if out[i].word.len() >= word_bound {
            continue;
        }
        for (l, m) in ALPHABET.iter().zip(&mats) {
            if out.len() >= ORBIT_LIMIT {
                return out;
            }
            let w = m.mul_vec(&out[i].vector);
            if seen.insert(w.clone()) {
                let mut word = vec![l.clone()];
                word.extend(out[i].word.iter().cloned());
                out.push(OrbitPoint { vector: w, word });
                queue.push_back(out.len() - 1);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentWitness {
    /// `g` with `g·v` the second reflection vector.
    pub g: GroupElement,
    pub gv: IntVector,
    /// `s` in `ε = s·gv − v`.
    pub sign: i8,
    pub eps: IntVector,
    /// `C_{gv}·C_v`, with word `g C g⁻¹ C`.
    pub u: GroupElement,
    /// Translation vector of `u` in the quotient basis of `ε^⊥/ℚε`.
    pub translation: Vec<Rat>,
}

/// First orbit point giving a nontrivial unipotent. With `eps` given, only
/// isotropic vectors proportional to it are accepted.
pub fn unipotent_from_reflections(
    frame: &Frame,
    eps: Option<&IntVector>,
    word_bound: usize,
) -> Result<Option<UnipotentWitness>> {
    let points = orbit(frame, word_bound);
    unipotent_in_orbit(frame, &points, eps)
}

pub(crate) fn unipotent_in_orbit(
    frame: &Frame,
    points: &[OrbitPoint],
    eps: Option<&IntVector>,
) -> Result<Option<UnipotentWitness>> {
    Ok(unipotent_candidates(frame, points, eps, 1)?.pop())
}

/// Up to `limit` witnesses, in orbit order.
pub(crate) fn unipotent_candidates(
    frame: &Frame,
    points: &[OrbitPoint],
    eps: Option<&IntVector>,
    limit: usize,
) -> Result<Vec<UnipotentWitness>> {
    let mut found = Vec::new();
    let two = Rat::from_integer(2.into());
    let c = frame.element(vec![Letter::C])?;
    for p in points {
        let pv = frame.product_int(&p.vector, &frame.v);
        if pv.abs() != two {
            continue;
        }
        let sign: i8 = if pv.is_positive() { 1 } else { -1 };
        let d: IntVector =
            p.vector.iter().zip(&frame.v).map(|(w, v)| if sign > 0 { w - v } else { -w - v }).collect();
        if d.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(e) = eps {
            if proportionality(&to_rat_vec(&d), &to_rat_vec(e)).is_none() {
                continue;
            }
        }
        let g = frame.element(p.word.clone())?;
        let u = conjugate(&g, &c)?.compose(&c);
        let par = Parabolic::new(&frame.gram, &d)?;
        let test = par.test(&u.matrix);
        if !test.in_unipotent_radical || test.trivial {
            continue;
        }
        let translation = par.translation(&u.matrix)?;
        if translation.iter().all(Zero::is_zero) {
            continue;
        }
        found.push(UnipotentWitness { g, gv: p.vector.clone(), sign, eps: d, u, translation });
        if found.len() >= limit {
            break;
        }
    }
    Ok(found)
}

/// Further nontrivial unipotents `C_{w₂}·C_{w₁}` of the radical at `par.eps`,
/// from orbit points `w₁ ⊥ ε` such that `±(w₁ + kε)` (`k = ±1, ±2`) is also
/// an orbit point `w₂`. The translation of such an element is `k·w̄₁`. At
/// most one element per direction of `w̄₁` is kept, and at most `limit`.
pub fn radical_unipotents(
    frame: &Frame,
    cache: &mut ReflectionCache,
    par: &Parabolic,
    points: &[OrbitPoint],
    limit: usize,
) -> Result<Vec<GroupElement>> {
    let index: HashMap<&IntVector, usize> = points.iter().enumerate().map(|(i, p)| (&p.vector, i)).collect();
    let eps = &par.eps;
    let mut out = Vec::new();
    let mut directions: Vec<Vec<Rat>> = Vec::new();
    for p1 in points {
        if out.len() >= limit {
            break;
        }
        if !frame.product_int(&p1.vector, eps).is_zero() {
            continue;
        }
        let img = par.quotient_coords_int(&p1.vector)?;
        if img.iter().all(Zero::is_zero) || directions.iter().any(|d| proportionality(d, &img).is_some()) {
            continue;
        }
        for k in [1i64, -1, 2, -2] {
            let cand: IntVector = p1.vector.iter().zip(eps).map(|(w, e)| w + e * k).collect();
            let neg: IntVector = cand.iter().map(|x| -x).collect();
            let Some(&j) = index.get(&cand).or_else(|| index.get(&neg)) else {
                continue;
            };
            let r1 = cache.get(&p1.vector, &p1.word)?;
            let r2 = cache.get(&points[j].vector, &points[j].word)?;
            let theta = r2.compose(&r1);
            let test = par.test(&theta.matrix);
            if test.in_unipotent_radical && !test.trivial {
                directions.push(img);
                out.push(theta);
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;
    use crate::monodromy::build_pair;
    use crate::polycore::parse_poly;

    fn frame(f: &str, g: &str) -> Frame {
        Frame::cyclic(&build_pair(&parse_poly(f).unwrap(), &parse_poly(g).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn base_pair_uses_a_squared() {
        let f = frame("(x^5-1)", "(x+1)*(x^2+1)^2");
        let w = unipotent_from_reflections(&f, None, 8).unwrap().unwrap();
        assert_eq!(w.g.word, vec![Letter::A, Letter::A]);
        assert_eq!(w.eps, int_vec(&[-1, 0, 1, 0, 0]));
        assert_eq!(w.u.apply(&f.v), int_vec(&[-1, 0, 2, 0, 0]));
        assert!(f.verify(&w.u).unwrap());
        let opposite = int_vec(&[1, 0, -1, 0, 0]);
        assert_eq!(unipotent_from_reflections(&f, Some(&opposite), 8).unwrap().unwrap().u, w.u);
    }

    #[test]
    fn orbit_contains_v_prime() {
        let f = frame("(x^5-1)", "(x+1)*(x^2+1)^2");
        let pts = orbit(&f, 8);
        let vp = int_vec(&[-1, 0, 0, 1, 1]);
        let p = pts.iter().find(|p| p.vector == vp).unwrap();
        assert_eq!(f.element(p.word.clone()).unwrap().apply(&f.v), vp);
        assert!(pts.windows(2).all(|w| w[0].word.len() <= w[1].word.len()));
    }

    #[test]
    fn definite_pair_has_none() {
        let f = frame("(x-1)", "(x+1)");
        assert_eq!(unipotent_from_reflections(&f, None, 8).unwrap(), None);
    }
}
