use num_traits::{Signed, Zero};

use super::QuadSpace;
use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix};
use crate::polycore::ParameterList;

/// Symmetric Gaussian elimination. Returns the diagonal and a transform `T`
/// with `Tᵀ·gram·T` diagonal.
///
/// Pivot rule: the first nonzero diagonal entry at or after the current
/// position. When every remaining diagonal entry is zero but some
/// off-diagonal `(i, j)` is not, replace `e_i` by `e_i + e_j` first.
pub fn diagonalize(space: &QuadSpace) -> (Vec<Rat>, RatMatrix) {
    let n = space.dim;
    let mut w = space.gram.clone();
    let mut t = RatMatrix::identity(n);
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !w[(i, i)].is_zero()).or_else(|| {
            let (i, j) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && !w[(i, j)].is_zero())?;
            add_basis_vector(&mut w, &mut t, i, j);
            Some(i)
        });
        let Some(p) = pivot else {
            diag.extend(std::iter::repeat_with(Rat::zero).take(n - k));
            break;
        };
        swap_basis_vectors(&mut w, &mut t, p, k);
        let d = w[(k, k)].clone();
        for j in k + 1..n {
            if w[(k, j)].is_zero() {
                continue;
            }
            let c = &w[(k, j)] / &d;
            // e_j ↦ e_j − c·e_k
            for r in 0..n {
                let wk = w[(r, k)].clone();
                if !wk.is_zero() {
                    w[(r, j)] = &w[(r, j)] - &c * wk;
                }
                let tk = t[(r, k)].clone();
                if !tk.is_zero() {
                    t[(r, j)] = &t[(r, j)] - &c * tk;
                }
            }
            for r in 0..n {
                let wk = w[(k, r)].clone();
                if !wk.is_zero() {
                    w[(j, r)] = &w[(j, r)] - &c * wk;
                }
            }
        }
        diag.push(d);
    }
    (diag, t)
}

fn add_basis_vector(w: &mut RatMatrix, t: &mut RatMatrix, i: usize, j: usize) {
    let n = w.nrows();
    for r in 0..n {
        w[(r, i)] = &w[(r, i)] + &w[(r, j)];
        t[(r, i)] = &t[(r, i)] + &t[(r, j)];
    }
    for r in 0..n {
        w[(i, r)] = &w[(i, r)] + &w[(j, r)];
    }
}

fn swap_basis_vectors(w: &mut RatMatrix, t: &mut RatMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = w.nrows();
    for r in 0..n {
        let x = w[(r, a)].clone();
        w[(r, a)] = w[(r, b)].clone();
        w[(r, b)] = x;
        let y = t[(r, a)].clone();
        t[(r, a)] = t[(r, b)].clone();
        t[(r, b)] = y;
    }
    for r in 0..n {
        let x = w[(a, r)].clone();
        w[(a, r)] = w[(b, r)].clone();
        w[(b, r)] = x;
    }
}

/// `(positive, negative)` counts of a diagonal; errors on a zero entry.
pub fn signature_of_diagonal(diag: &[Rat]) -> Result<(usize, usize)> {
    if diag.iter().any(Zero::is_zero) {
        return Err(Error::DegenerateForm);
    }
    let p = diag.iter().filter(|x| x.is_positive()).count();
    Ok((p, diag.len() - p))
}

pub fn signature(space: &QuadSpace) -> Result<(usize, usize)> {
    signature_of_diagonal(&diagonalize(space).0)
}

/// `|Σ_j (−1)^{j+m_j}|` with `m_j = #{k : β_k < α_j}`, which equals `|p − q|`.
pub fn signature_interlace(alpha: &ParameterList, beta: &ParameterList) -> Result<usize> {
    if alpha.len() != beta.len() {
        return Err(Error::Dimension("alpha and beta differ in length".into()));
    }
    if let Some(x) = alpha.values.iter().find(|a| beta.values.contains(a)) {
        return Err(Error::SharedParameter(crate::linalg::fmt_rat(x)));
    }
    let mut sum: i64 = 0;
    for (idx, a) in alpha.values.iter().enumerate() {
        let j = idx + 1;
        let m = beta.values.iter().filter(|b| *b < a).count();
        sum += if (j + m) % 2 == 0 { 1 } else { -1 };
    }
    Ok(sum.unsigned_abs() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::polycore::{parameters_of, parse_poly};

    fn check_diagonal(space: &QuadSpace) -> Vec<Rat> {
        let (d, t) = diagonalize(space);
        let m = &(&t.transpose() * &space.gram) * &t;
        for i in 0..space.dim {
            for j in 0..space.dim {
                let want = if i == j { d[i].clone() } else { Rat::zero() };
                assert_eq!(m[(i, j)], want);
            }
        }
        d
    }

    #[test]
    fn printed_ternary_signs() {
        let s = QuadSpace::from_int_rows(&[&[2, 3, -3], &[3, 2, 3], &[-3, 3, 2]]);
        let d = check_diagonal(&s);
        let signs: Vec<bool> = d.iter().map(|x| x.is_positive()).collect();
        assert_eq!(signs, vec![true, false, true]);
        assert_eq!(signature(&s).unwrap(), (2, 1));
    }

    #[test]
    fn identity_and_hyperbolic() {
        let id = QuadSpace::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(check_diagonal(&id), vec![rat(1); 3]);
        assert_eq!(signature(&id).unwrap(), (3, 0));
        let h = QuadSpace::from_int_rows(&[&[0, 1], &[1, 0]]);
        check_diagonal(&h);
        assert_eq!(signature(&h).unwrap(), (1, 1));
        let z = QuadSpace::from_int_rows(&[&[0, 0], &[0, 0]]);
        assert_eq!(signature(&z), Err(Error::DegenerateForm));
    }

    #[test]
    fn interlacing_examples() {
        let a = parameters_of(&parse_poly("(x^5-1)").unwrap()).unwrap();
        let b = parameters_of(&parse_poly("(x+1)*(x^2+1)^2").unwrap()).unwrap();
        assert_eq!(signature_interlace(&a, &b).unwrap(), 1);
        let a = parameters_of(&parse_poly("(x-1)").unwrap()).unwrap();
        let b = parameters_of(&parse_poly("(x+1)").unwrap()).unwrap();
        assert_eq!(signature_interlace(&a, &b).unwrap(), 1);
        let a = parameters_of(&parse_poly("(x-1)*(x^2+1)^2").unwrap()).unwrap();
        let b = parameters_of(&parse_poly("(x+1)*(x^4+x^3+x^2+x+1)").unwrap()).unwrap();
        assert_eq!(signature_interlace(&a, &b).unwrap(), 1);
        assert!(matches!(signature_interlace(&a, &a), Err(Error::SharedParameter(_))));
    }
}
