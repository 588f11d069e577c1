use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{change_basis, BasisLabel, QuadSpace};
use crate::error::{Error, Result};
use crate::linalg::{rat, IntMatrix, Rat, RatMatrix};
use crate::monodromy::HyperPair;

fn require_orthogonal(pair: &HyperPair) -> Result<()> {
    if pair.is_orthogonal() { Ok(()) } else { Err(Error::Symplectic) }
}

/// Gram matrix in the cyclic basis `v, Av, …, A^{n−1}v`, read off from
/// remainders: `v·w` is the coefficient of `x^{n−1}` in `w`, and
/// `A^k v = x^{k−1}(g − f) mod f` for `k ≥ 1`.
pub fn gram_remainder(pair: &HyperPair) -> Result<QuadSpace> {
    require_orthogonal(pair)?;
    let n = pair.n;
    let diff = &pair.g - &pair.f;
    let mut row = Vec::with_capacity(n);
    let top_v = pair.v[n - 1].clone();
    if top_v != 2.into() {
        return Err(Error::Inconsistency(format!("v·v = {top_v}, expected 2")));
    }
    row.push(Rat::from_integer(top_v));
    for k in 1..n {
        let r = diff.shift(k - 1).rem(&pair.f)?;
        row.push(Rat::from_integer(r.coeff(n - 1)));
    }
    let mut gram = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = row[i.abs_diff(j)].clone();
        }
    }
    let mut space = QuadSpace::new(gram, BasisLabel::Cyclic)?;
    space.base_change = pair.cyclic_basis_matrix().to_rational();
    Ok(space)
}

/// Symmetric unknown index for `i ≤ j` in an `n×n` matrix.
fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

type SparseRow = BTreeMap<usize, Rat>;

/// Equations `(MᵀHM)_{ij} − H_{ij} = 0` for `i ≤ j`, in the symmetric unknowns.
fn invariance_equations(m: &IntMatrix, out: &mut Vec<SparseRow>) {
    let n = m.nrows();
    let cols: Vec<Vec<(usize, Rat)>> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&k| !m[(k, j)].is_zero())
                .map(|k| (k, Rat::from_integer(m[(k, j)].clone())))
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in i..n {
            let mut row = SparseRow::new();
            for (k, a) in &cols[i] {
                for (l, b) in &cols[j] {
                    *row.entry(sym_index(n, *k, *l)).or_insert_with(Rat::zero) += a * b;
                }
            }
            *row.entry(sym_index(n, i, j)).or_insert_with(Rat::zero) -= Rat::one();
            row.retain(|_, c| !c.is_zero());
            if !row.is_empty() {
                out.push(row);
            }
        }
    }
}

/// Incremental echelon form over sparse rows; pivot rows are normalized.
struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    fn insert(&mut self, mut row: SparseRow) -> bool {
        while let Some((&p, c)) = row.iter().next() {
            let Some(prow) = self.pivots.get(&p) else {
                let inv = c.recip();
                row.values_mut().for_each(|x| *x *= &inv);
                self.pivots.insert(p, row);
                return true;
            };
            let c = c.clone();
            for (k, x) in prow {
                let e = row.entry(*k).or_insert_with(Rat::zero);
                *e -= &c * x;
                if e.is_zero() {
                    row.remove(k);
                }
            }
        }
        false
    }

    /// The kernel vector when exactly one unknown is free.
    fn kernel_vector(&self, unknowns: usize) -> Vec<Rat> {
        let free = (0..unknowns).find(|i| !self.pivots.contains_key(i)).expect("one free unknown");
        let mut x = vec![Rat::zero(); unknowns];
        x[free] = Rat::one();
        for (&p, row) in self.pivots.iter().rev() {
            let mut s = Rat::zero();
            for (k, c) in row.iter().skip(1) {
                if !x[*k].is_zero() {
                    s += c * &x[*k];
                }
            }
            x[p] = -s;
        }
        x
    }
}

/// The form preserved by `A` and `B`, normalized by `v·v = 2`, in the
/// standard basis. Solved directly from the invariance equations, without
/// using the remainder formula.
pub fn invariant_form(pair: &HyperPair) -> Result<RatMatrix> {
    require_orthogonal(pair)?;
    let n = pair.n;
    let unknowns = n * (n + 1) / 2;
    let mut eqs = Vec::new();
    invariance_equations(&pair.a, &mut eqs);
    invariance_equations(&pair.b, &mut eqs);
    let mut ech = Echelon { pivots: BTreeMap::new() };
    let mut tried_at = None;
    for row in eqs {
        ech.insert(row);
        if ech.pivots.len() == unknowns {
            return Err(Error::SolutionSpace(0));
        }
        // Once the rank allows a one-dimensional kernel, test the candidate
        // against the full system; most equations are redundant.
        if ech.pivots.len() + 1 == unknowns && tried_at != Some(ech.pivots.len()) {
            tried_at = Some(ech.pivots.len());
            if let Some(h) = candidate(pair, &ech.kernel_vector(unknowns))? {
                return Ok(h);
            }
        }
    }
    if ech.pivots.len() + 1 == unknowns && tried_at != Some(ech.pivots.len()) {
        if let Some(h) = candidate(pair, &ech.kernel_vector(unknowns))? {
            return Ok(h);
        }
    }
    Err(Error::SolutionSpace(unknowns - ech.pivots.len()))
}

fn candidate(pair: &HyperPair, x: &[Rat]) -> Result<Option<RatMatrix>> {
    let n = pair.n;
    let mut h = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = x[sym_index(n, i, j)].clone();
        }
    }
    let a = pair.a.to_rational();
    let b = pair.b.to_rational();
    let preserved = |m: &RatMatrix| &(&m.transpose() * &h) * m == h;
    if !preserved(&a) || !preserved(&b) {
        return Ok(None);
    }
    let v: Vec<Rat> = pair.v.iter().map(|c| Rat::from_integer(c.clone())).collect();
    let vv = crate::linalg::bilinear(&h, &v, &v);
    if vv.is_zero() {
        return Err(Error::Inconsistency("invariant form vanishes on v".into()));
    }
    let scale = rat(2) / vv;
    Ok(Some(h.scale(&scale)))
}

/// Standard-basis Gram from the invariance equations. Also checks that
/// `Hv = e_{n−1}`, i.e. `v·w` is the top coefficient of `w`.
pub fn gram_invariance(pair: &HyperPair) -> Result<QuadSpace> {
    let h = invariant_form(pair)?;
    let v: Vec<Rat> = pair.v.iter().map(|c| Rat::from_integer(c.clone())).collect();
    let hv = h.mul_vec(&v);
    let n = pair.n;
    let expected: Vec<Rat> = (0..n).map(|i| if i == n - 1 { Rat::one() } else { Rat::zero() }).collect();
    if hv != expected {
        return Err(Error::Inconsistency("H·v ≠ e_{n−1}".into()));
    }
    QuadSpace::new(h, BasisLabel::Standard)
}

/// Runs both constructions and checks `Mᵀ H M = G` with `M = [v | Av | …]`.
pub fn cross_checked(pair: &HyperPair) -> Result<(QuadSpace, QuadSpace)> {
    let cyc = gram_remainder(pair)?;
    let std = gram_invariance(pair)?;
    let m = pair.cyclic_basis_matrix().to_rational();
    let moved = change_basis(&std, &m, BasisLabel::Cyclic)?;
    if moved.gram != cyc.gram {
        return Err(Error::Inconsistency("remainder and invariance Gram matrices disagree".into()));
    }
    Ok((cyc, std))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::monodromy::{build_any, build_pair};
    use crate::polycore::{cyclotomic, parse_poly};

    fn base() -> HyperPair {
        build_pair(&parse_poly("(x^5-1)").unwrap(), &parse_poly("(x+1)*(x^2+1)^2").unwrap()).unwrap()
    }

    fn first_row(s: &QuadSpace) -> Vec<Rat> {
        s.gram.row(0).to_vec()
    }

    #[test]
    fn base_pair_circulant() {
        let g = gram_remainder(&base()).unwrap();
        assert_eq!(first_row(&g), [2, 1, 2, 2, 1].map(rat).to_vec());
        assert_eq!(g.gram.row(1).to_vec(), [1, 2, 1, 2, 2].map(rat).to_vec());
    }

    #[test]
    fn second_example_true_values() {
        let f = parse_poly("(x-1)*(x^2+1)^2").unwrap();
        let g = &parse_poly("(x+1)").unwrap() * &cyclotomic(5);
        let p = build_pair(&f, &g).unwrap();
        let s = gram_remainder(&p).unwrap();
        assert_eq!(first_row(&s), [2, 3, 3, 1, 2].map(rat).to_vec());
        assert_eq!(s.determinant(), rat(40));
    }

    #[test]
    fn oracle_equivalence() {
        let (cyc, std) = cross_checked(&base()).unwrap();
        assert_eq!(cyc.gram[(0, 0)], rat(2));
        let p = base();
        let a = p.a.to_rational();
        assert_eq!(&(&a.transpose() * &std.gram) * &a, std.gram);
    }

    #[test]
    fn symplectic_rejected() {
        let p = build_any(&cyclotomic(5), &parse_poly("(x-1)^2*(x+1)^2").unwrap()).unwrap();
        assert_eq!(gram_remainder(&p), Err(Error::Symplectic));
        assert_eq!(gram_invariance(&p), Err(Error::Symplectic));
    }
}
