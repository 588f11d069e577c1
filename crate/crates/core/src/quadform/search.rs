//! Bounded enumeration of isotropic integer vectors.
//!
//! Candidates are primitive, with first nonzero coordinate positive (one per
//! ±pair). When the full box `[−b, b]^n` is small enough it is enumerated in
//! lexicographic order; otherwise only vectors of small support are tried,
//! ordered by support size, then support (lexicographic), then values.

use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::QuadSpace;
use crate::linalg::{IntVector, RatMatrix};

/// Upper limit on candidate vectors visited by one search.
pub const SEARCH_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchPlan {
    pub bound: i64,
    /// Maximum number of nonzero coordinates; equal to the dimension when the
    /// search is exhaustive.
    pub max_support: usize,
    pub exhaustive: bool,
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..k as u64 {
        acc = acc.saturating_mul(n as u64 - i) / (i + 1);
    }
    acc
}

impl SearchPlan {
    pub fn new(dim: usize, bound: i64) -> Self {
        let side = (2 * bound + 1) as u64;
        let full = (0..dim).try_fold(1u64, |acc, _| acc.checked_mul(side).filter(|&x| x <= SEARCH_BUDGET));
        if full.is_some() {
            return Self { bound, max_support: dim, exhaustive: true };
        }
        let per_value = (2 * bound) as u64;
        let mut s = 1;
        while s < dim {
            let cost = binomial(dim, s + 1).saturating_mul(per_value.saturating_pow(s as u32 + 1));
            if cost > SEARCH_BUDGET {
                break;
            }
            s += 1;
        }
        Self { bound, max_support: s, exhaustive: false }
    }

    pub fn describe(&self) -> String {
        if self.exhaustive {
            format!("exhaustive over coefficients in [-{b}, {b}]", b = self.bound)
        } else {
            format!(
                "vectors with at most {} nonzero coefficients in [-{b}, {b}]",
                self.max_support,
                b = self.bound
            )
        }
    }
}

/// Gram scaled to integers, as machine integers for the inner loop.
pub(crate) struct SmallGram {
    g: Vec<Vec<i128>>,
}

impl SmallGram {
    pub(crate) fn new(gram: &RatMatrix) -> Option<Self> {
        let lcm = (0..gram.nrows())
            .flat_map(|i| gram.row(i).iter().map(|x| x.denom().clone()))
            .fold(num_bigint::BigInt::from(1), |acc, d| acc.lcm(&d));
        let g = (0..gram.nrows())
            .map(|i| {
                gram.row(i)
                    .iter()
                    .map(|x| (x.numer() * (&lcm / x.denom())).to_i64().map(i128::from))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self { g })
    }

    pub(crate) fn dim(&self) -> usize {
        self.g.len()
    }

    /// `wᵀGw` over the given support.
    fn norm_on(&self, w: &[i64], support: &[usize]) -> i128 {
        let mut acc = 0i128;
        for &i in support {
            let wi = w[i] as i128;
            let row = &self.g[i];
            let mut s = 0i128;
            for &j in support {
                s += row[j] * w[j] as i128;
            }
            acc += wi * s;
        }
        acc
    }

    /// Visits isotropic candidates in plan order until `visit` breaks.
    pub(crate) fn for_each_isotropic(
        &self,
        plan: &SearchPlan,
        mut visit: impl FnMut(&[i64]) -> ControlFlow<()>,
    ) {
        let n = self.dim();
        let mut w = vec![0i64; n];
        if plan.exhaustive {
            let all: Vec<usize> = (0..n).collect();
            let _ = self.box_rec(&mut w, 0, false, plan.bound, &all, &mut visit);
            return;
        }
        for s in 1..=plan.max_support.min(n) {
            let mut support: Vec<usize> = (0..s).collect();
            loop {
                w.iter_mut().for_each(|x| *x = 0);
                if self.support_rec(&mut w, &support, 0, plan.bound, &mut visit).is_break() {
                    return;
                }
                if !next_combination(&mut support, n) {
                    break;
                }
            }
        }
    }

    fn box_rec(
        &self,
        w: &mut [i64],
        i: usize,
        started: bool,
        b: i64,
        all: &[usize],
        visit: &mut impl FnMut(&[i64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == w.len() {
            if started && is_primitive(w) && self.norm_on(w, all) == 0 {
                return visit(w);
            }
            return ControlFlow::Continue(());
        }
        let lo = if started { -b } else { 0 };
        for x in lo..=b {
            w[i] = x;
            self.box_rec(w, i + 1, started || x != 0, b, all, visit)?;
        }
        w[i] = 0;
        ControlFlow::Continue(())
    }

    fn support_rec(
        &self,
        w: &mut [i64],
        support: &[usize],
        k: usize,
        b: i64,
        visit: &mut impl FnMut(&[i64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == support.len() {
            if is_primitive(w) && self.norm_on(w, support) == 0 {
                return visit(w);
            }
            return ControlFlow::Continue(());
        }
        let lo = if k == 0 { 1 } else { -b };
        for x in (lo..=b).filter(|&x| x != 0) {
            w[support[k]] = x;
            self.support_rec(w, support, k + 1, b, visit)?;
        }
        w[support[k]] = 0;
        ControlFlow::Continue(())
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn is_primitive(w: &[i64]) -> bool {
    w.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
}

/// All isotropic vectors found by the bounded search, in search order. For
/// small dimensions this is every primitive isotropic vector with
/// coefficients in `[−bound, bound]`, one per ± pair, lexicographically.
pub fn isotropic_search(space: &QuadSpace, bound: u32) -> Vec<IntVector> {
    let Some(g) = SmallGram::new(&space.gram) else {
        return Vec::new();
    };
    let plan = SearchPlan::new(space.dim, bound as i64);
    let mut out = Vec::new();
    g.for_each_isotropic(&plan, |w| {
        out.push(w.iter().map(|&x| x.into()).collect());
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn circulant_contains_known_vector() {
        let rows: Vec<Vec<i64>> = (0..5)
            .map(|i| (0..5).map(|j| [2, 1, 2, 2, 1][(j + 5 - i) % 5]).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let s = QuadSpace::from_int_rows(&refs);
        let found = isotropic_search(&s, 2);
        assert!(found.contains(&int_vec(&[1, 0, -1, 0, 0])));
        let mut sorted = found.clone();
        sorted.sort();
        assert_eq!(sorted, found);
    }

    #[test]
    fn definite_form_has_none() {
        let s = QuadSpace::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert!(isotropic_search(&s, 3).is_empty());
    }

    #[test]
    fn hyperbolic_plane() {
        let s = QuadSpace::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(isotropic_search(&s, 2), vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn plan_switches_to_sparse() {
        let p = SearchPlan::new(17, 3);
        assert!(!p.exhaustive);
        assert_eq!(p.max_support, 3);
        assert!(SearchPlan::new(5, 3).exhaustive);
    }
}
