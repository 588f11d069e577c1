use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::search::{SearchPlan, SmallGram};
use super::{diagonalize, signature_of_diagonal, BasisLabel, QuadSpace};
use crate::error::Result;
use crate::linalg::{primitive, to_rat_vec, vector_rank, IntVector, Matrix, Rat, RatVector};
use crate::monodromy::HyperPair;

/// Largest modulus `p^k` tried by [`certify_anisotropic`].
pub const MODULUS_BUDGET: u64 = 10_000;
const MAX_PRIME: u64 = 97;
const MAX_EXPONENT: u32 = 3;
/// How far past the requested bound the residual search may go.
const ESCALATION_STEPS: u32 = 2;

/// "The diagonal form has no primitive zero modulo `p^k`."
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub p: u64,
    pub k: u32,
    pub statement: String,
}

/// Interval for the ℚ-rank (Witt index) with the evidence for both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub lo: usize,
    pub hi: usize,
    /// Pairwise orthogonal isotropic vectors spanning a totally isotropic
    /// subspace of dimension `lo`, in the coordinates of the searched space.
    pub isotropic_witnesses: Vec<IntVector>,
    /// Diagonalization of `W^⊥/W` for the witness span `W`.
    pub residual_diagonal: Vec<Rat>,
    pub obstructions: Vec<Obstruction>,
    pub signature: (usize, usize),
    pub search: String,
    pub notes: Vec<String>,
}

/// Witt index of the cyclic-basis form of an orthogonal pair.
pub fn q_rank(pair: &HyperPair, bound: u32) -> Result<RankCertificate> {
    let space = super::gram_remainder(pair)?;
    Ok(witt_decompose(&space, bound))
}

pub fn witt_decompose(space: &QuadSpace, bound: u32) -> RankCertificate {
    witt_decompose_from(space, bound, &[])
}

/// Grows a totally isotropic subspace greedily: every candidate (seeds
/// first, then the bounded search in its fixed order) is kept when it is
/// isotropic, orthogonal to the vectors kept so far, and independent of them.
/// Each kept vector splits off one hyperbolic plane, so the count is a lower
/// bound for the Witt index; the residual `W^⊥/W` carries the rest.
pub fn witt_decompose_from(space: &QuadSpace, bound: u32, seeds: &[IntVector]) -> RankCertificate {
    let (diag, _) = diagonalize(space);
    let nonzero: Vec<Rat> = diag.iter().filter(|x| !x.is_zero()).cloned().collect();
    let (p, q) = signature_of_diagonal(&nonzero).expect("zeros removed");
    let max_rank = p.min(q);
    let plan = SearchPlan::new(space.dim, bound as i64);
    let mut notes = Vec::new();
    if nonzero.len() < diag.len() {
        notes.push("form is degenerate; bounds refer to its nondegenerate part".into());
    }

    let mut chosen: Vec<IntVector> = Vec::new();
    let accept = |chosen: &[IntVector], w: &IntVector| -> bool {
        let wr = to_rat_vec(w);
        if !space.product(&wr, &wr).is_zero() {
            return false;
        }
        if chosen.iter().any(|c| !space.product(&to_rat_vec(c), &wr).is_zero()) {
            return false;
        }
        let mut rows: Vec<RatVector> = chosen.iter().map(|c| to_rat_vec(c)).collect();
        rows.push(wr);
        vector_rank(&rows) == chosen.len() + 1
    };
    for s in seeds {
        if chosen.len() < max_rank && accept(&chosen, s) {
            chosen.push(s.clone());
        }
    }
    if let Some(g) = SmallGram::new(&space.gram) {
        if chosen.len() < max_rank {
            g.for_each_isotropic(&plan, |w| {
                let w: IntVector = w.iter().map(|&x| x.into()).collect();
                if accept(&chosen, &w) {
                    chosen.push(w);
                }
                if chosen.len() == max_rank { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
            });
        }
    } else {
        notes.push("Gram entries too large for the bounded search".into());
    }

    // A nondegenerate indefinite form in five or more variables is isotropic
    // over ℚ (Hasse–Minkowski), so a witness exists; look harder in W^⊥/W.
    let mut residual = residual_space(space, &chosen);
    loop {
        let (rdiag, _) = diagonalize(&residual.1);
        let Ok((rp, rq)) = signature_of_diagonal(&rdiag) else { break };
        if residual.1.dim < 5 || rp == 0 || rq == 0 || chosen.len() >= max_rank {
            break;
        }
        let Some(lifted) = escalate(&residual, bound) else {
            notes.push(format!(
                "residual form of dimension {} is indefinite, hence isotropic over Q; \
                 no witness found within coefficient bound {}",
                residual.1.dim,
                bound + ESCALATION_STEPS
            ));
            break;
        };
        notes.push(format!(
            "witness {} found by the escalated search in the residual form",
            chosen.len() + 1
        ));
        chosen.push(lifted);
        residual = residual_space(space, &chosen);
    }

    let lo = chosen.len();
    let (rdiag, _) = diagonalize(&residual.1);
    let mut obstructions = Vec::new();
    let hi = match signature_of_diagonal(&rdiag) {
        Ok((rp, rq)) if rp == 0 || rq == 0 => lo,
        Ok(_) if rdiag.len() <= 4 => match certify_anisotropic(&rdiag) {
            Some(ob) => {
                obstructions.push(ob);
                lo
            }
            None => max_rank,
        },
        _ => max_rank,
    };
    RankCertificate {
        lo,
        hi: hi.max(lo),
        isotropic_witnesses: chosen,
        residual_diagonal: rdiag,
        obstructions,
        signature: (p, q),
        search: plan.describe(),
        notes,
    }
}

/// Basis of a complement of `W` in `W^⊥` (as integer vectors of the ambient
/// space) and the Gram of `W^⊥/W` on it.
pub(crate) fn residual_space(space: &QuadSpace, w: &[IntVector]) -> (Vec<IntVector>, QuadSpace) {
    let n = space.dim;
    let basis: Vec<IntVector> = if w.is_empty() {
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
    } else {
        let rows: Vec<RatVector> = w.iter().map(|c| space.gram.mul_vec(&to_rat_vec(c))).collect();
        let perp = Matrix::from_rows(rows).expect("rectangular").nullspace();
        let mut span: Vec<RatVector> = w.iter().map(|c| to_rat_vec(c)).collect();
        let mut out = Vec::new();
        for b in perp {
            let before = vector_rank(&span);
            span.push(b.clone());
            if vector_rank(&span) > before {
                out.push(primitive(&b).expect("nonzero kernel vector"));
            } else {
                span.pop();
            }
        }
        out
    };
    let cols: Vec<RatVector> = basis.iter().map(|b| to_rat_vec(b)).collect();
    let m = Matrix::from_columns(&cols).expect("rectangular");
    let gram = if basis.is_empty() {
        Matrix::zeros(0, 0)
    } else {
        &(&m.transpose() * &space.gram) * &m
    };
    let q = QuadSpace::new(gram, BasisLabel::Custom("residual".into())).expect("symmetric");
    (basis, q)
}

fn escalate(residual: &(Vec<IntVector>, QuadSpace), bound: u32) -> Option<IntVector> {
    let g = SmallGram::new(&residual.1.gram)?;
    for extra in 1..=ESCALATION_STEPS {
        let plan = SearchPlan::new(residual.1.dim, (bound + extra) as i64);
        let mut hit: Option<Vec<i64>> = None;
        g.for_each_isotropic(&plan, |z| {
            hit = Some(z.to_vec());
            ControlFlow::Break(())
        });
        if let Some(z) = hit {
            let n = residual.0.first()?.len();
            let lifted: RatVector = (0..n)
                .map(|i| {
                    let s: BigInt = z.iter().zip(&residual.0).map(|(&c, b)| &b[i] * c).sum();
                    Rat::from_integer(s)
                })
                .collect();
            return primitive(&lifted);
        }
    }
    None
}

/// Scales each entry to an integer in the same square class (`a/b ↦ ab`)
/// and strips square factors found by trial division.
pub fn squarefree_integral(diag: &[Rat]) -> Vec<BigInt> {
    diag.iter()
        .map(|x| {
            let mut y = x.numer() * x.denom();
            let mut d = BigInt::from(2);
            let limit = BigInt::from(100_000);
            while &d * &d <= y.abs() && d <= limit {
                let dd = &d * &d;
                while (&y % &dd).is_zero() {
                    y /= &dd;
                }
                d += 1;
            }
            y
        })
        .collect()
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// Tries primes `p ≤ 97` and `k ≤ 3` with `p^k ≤ 10⁴`, odd primes dividing a
/// coefficient first, then 2, then the rest. For three or more
/// variables an odd prime dividing no coefficient cannot obstruct (the
/// form is isotropic over ℚ_p), so those are skipped.
pub fn certify_anisotropic(diag: &[Rat]) -> Option<Obstruction> {
    if diag.is_empty() || diag.iter().any(Zero::is_zero) {
        return None;
    }
    let ints = squarefree_integral(diag);
    let divides_some = |p: u64| ints.iter().any(|a| (a % BigInt::from(p)).is_zero());
    // Odd primes dividing a coefficient are the likely obstructions; try them
    // before 2 and before the rest.
    let (mut order, rest): (Vec<u64>, Vec<u64>) =
        primes_up_to(MAX_PRIME).into_iter().partition(|&p| p != 2 && divides_some(p));
    order.push(2);
    order.extend(rest.into_iter().filter(|&p| p != 2));
    for p in order {
        if ints.len() >= 3 && p != 2 && !divides_some(p) {
            continue;
        }
        for k in 1..=MAX_EXPONENT {
            if p.pow(k) > MODULUS_BUDGET {
                break;
            }
            if let Some(ob) = anisotropy_certificate(&ints, p, k) {
                return Some(ob);
            }
        }
    }
    None
}

/// Exhaustively decides whether `Σ aᵢxᵢ²` has a zero modulo `p^k` with some
/// `xᵢ` a unit. If not, the form has no nontrivial rational zero: clearing
/// denominators of a rational zero gives a primitive integral one, whose
/// reduction would be such a zero.
pub fn anisotropy_certificate(diagonal: &[BigInt], p: u64, k: u32) -> Option<Obstruction> {
    let m = p.checked_pow(k)?;
    if diagonal.is_empty() || m > MODULUS_BUDGET * 100 {
        return None;
    }
    let m_big = BigInt::from(m);
    let coeffs: Vec<u64> = diagonal
        .iter()
        .map(|a| a.mod_floor(&m_big).to_u64().expect("reduced"))
        .collect();
    let m = m as usize;
    // r0: values reachable with every coordinate divisible by p so far;
    // r1: values reachable with at least one unit coordinate.
    let mut r0 = Bits::new(m);
    r0.set(0);
    let mut r1 = Bits::new(m);
    for &a in &coeffs {
        let (mut s0, mut s1) = (Bits::new(m), Bits::new(m));
        for x in 0..m as u64 {
            let val = (a as u128 * (x as u128 * x as u128) % m as u128) as usize;
            if x % p == 0 { s0.set(val) } else { s1.set(val) }
        }
        let s0: Vec<usize> = s0.ones().collect();
        let s1: Vec<usize> = s1.ones().collect();
        let mut n0 = Bits::new(m);
        let mut n1 = Bits::new(m);
        for &s in &s0 {
            n0.or_rotated(&r0, s);
            n1.or_rotated(&r1, s);
        }
        for &s in &s1 {
            n1.or_rotated(&r1, s);
            n1.or_rotated(&r0, s);
        }
        r0 = n0;
        r1 = n1;
    }
    if r1.get(0) {
        return None;
    }
    let form: Vec<String> = diagonal.iter().map(|a| a.to_string()).collect();
    Some(Obstruction {
        p,
        k,
        statement: format!("no primitive zero mod {} of diag({})", m, form.join(", ")),
    })
}

/// Fixed-length bitset over `Z/m`.
struct Bits {
    words: Vec<u64>,
    m: usize,
}

impl Bits {
    fn new(m: usize) -> Self {
        Self { words: vec![0; m.div_ceil(64)], m }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(|&i| self.get(i))
    }

    /// ORs `nbits` low bits of `bits` in at position `pos`; no wraparound.
    fn or_at(&mut self, pos: usize, bits: u64, nbits: usize) {
        if nbits == 0 {
            return;
        }
        let bits = if nbits == 64 { bits } else { bits & ((1u64 << nbits) - 1) };
        let (w, off) = (pos / 64, pos % 64);
        self.words[w] |= bits << off;
        if off > 0 && off + nbits > 64 {
            self.words[w + 1] |= bits >> (64 - off);
        }
    }

    /// `self |= src + s (mod m)`.
    fn or_rotated(&mut self, src: &Bits, s: usize) {
        for (w, &bits) in src.words.iter().enumerate() {
            if bits == 0 {
                continue;
            }
            let base = w * 64;
            let valid = 64.min(self.m - base);
            let t = (base + s) % self.m;
            let first = valid.min(self.m - t);
            self.or_at(t, bits, first);
            if valid > first {
                self.or_at(0, bits >> first, valid - first);
            }
        }
    }
}
