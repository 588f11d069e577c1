use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::IntPoly;
use crate::error::{Error, Result};

pub fn totient(n: u64) -> u64 {
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn mobius(n: u64) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The d-th cyclotomic polynomial, from `Φ_d = Π_{e|d} (x^e − 1)^{μ(d/e)}`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for e in divisors(d) {
        match mobius(d / e) {
            1 => num = &num * &IntPoly::x_pow_minus_one(e as usize),
            -1 => den = &den * &IntPoly::x_pow_minus_one(e as usize),
            _ => {}
        }
    }
    num.exact_div(&den).expect("cyclotomic quotient is exact")
}

/// Factorization into cyclotomic polynomials by trial division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloFactorization {
    /// `(d, multiplicity)` with `d` strictly increasing.
    pub factors: Vec<(u64, u32)>,
    pub remainder_is_one: bool,
    /// What is left after dividing out every cyclotomic factor found.
    pub remainder: IntPoly,
}

impl CycloFactorization {
    pub fn product(&self) -> IntPoly {
        let base: IntPoly =
            self.factors.iter().map(|&(d, m)| cyclotomic(d).pow(m)).product();
        &base * &self.remainder
    }
}

/// Divides out `Φ_d` greedily for every `d` with `φ(d) ≤ deg f`.
pub fn cyclo_factor(f: &IntPoly) -> CycloFactorization {
    let deg = f.degree() as u64;
    let mut rest = f.clone();
    let mut factors = Vec::new();
    // φ(d) ≥ √(d/2), so every candidate index is at most 2·deg².
    for d in 1..=(2 * deg * deg).max(2) {
        let phi = totient(d);
        if phi > rest.degree() as u64 {
            continue;
        }
        let c = cyclotomic(d);
        let mut mult = 0;
        while rest.degree() >= c.degree() {
            match rest.divrem(&c) {
                Ok((q, r)) if r.is_zero() => {
                    rest = q;
                    mult += 1;
                }
                _ => break,
            }
        }
        if mult > 0 {
            factors.push((d, mult));
        }
    }
    let remainder_is_one = rest == IntPoly::one();
    CycloFactorization { factors, remainder_is_one, remainder: rest }
}

/// Sorted multiset of exponents `α` with roots `e^{2πiα}`, `0 ≤ α < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterList {
    pub values: Vec<BigRational>,
}

impl ParameterList {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn root_parameters(fac: &CycloFactorization) -> Result<ParameterList> {
    if !fac.remainder_is_one {
        return Err(Error::IncompleteFactorization);
    }
    let mut values = Vec::new();
    for &(d, m) in &fac.factors {
        for a in (0..d).filter(|a| a.gcd(&d).is_one()) {
            for _ in 0..m {
                values.push(BigRational::new(BigInt::from(a), BigInt::from(d)));
            }
        }
    }
    values.sort();
    Ok(ParameterList { values })
}

/// Convenience: factor and extract parameters in one step.
pub fn parameters_of(f: &IntPoly) -> Result<ParameterList> {
    root_parameters(&cyclo_factor(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(5), p(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn divisor_product_is_x_pow_minus_one() {
        for d in 1..=60u64 {
            let prod: IntPoly = divisors(d).into_iter().map(cyclotomic).product();
            assert_eq!(prod, IntPoly::x_pow_minus_one(d as usize), "d = {d}");
        }
    }

    #[test]
    fn factor_examples() {
        let f = cyclo_factor(&IntPoly::x_pow_minus_one(5));
        assert_eq!(f.factors, vec![(1, 1), (5, 1)]);
        assert!(f.remainder_is_one);

        let g = &p(&[1, 1]) * &p(&[1, 0, 1]).pow(2);
        assert_eq!(cyclo_factor(&g).factors, vec![(2, 1), (4, 2)]);

        let bad = cyclo_factor(&p(&[-2, 0, 1]));
        assert!(!bad.remainder_is_one);
        assert_eq!(bad.product(), p(&[-2, 0, 1]));
    }

    #[test]
    fn parameters() {
        let fac = cyclo_factor(&IntPoly::x_pow_minus_one(5));
        let vals = root_parameters(&fac).unwrap().values;
        assert_eq!(vals, vec![q(0, 1), q(1, 5), q(2, 5), q(3, 5), q(4, 5)]);

        let fac = CycloFactorization {
            factors: vec![(2, 1), (4, 2)],
            remainder_is_one: true,
            remainder: IntPoly::one(),
        };
        let vals = root_parameters(&fac).unwrap().values;
        assert_eq!(vals, vec![q(1, 4), q(1, 4), q(1, 2), q(3, 4), q(3, 4)]);

        let fac = CycloFactorization {
            factors: vec![(1, 2)],
            remainder_is_one: true,
            remainder: IntPoly::one(),
        };
        assert_eq!(root_parameters(&fac).unwrap().values, vec![q(0, 1), q(0, 1)]);

        assert_eq!(parameters_of(&p(&[-2, 0, 1])), Err(Error::IncompleteFactorization));
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(totient(12), 4);
        assert_eq!(totient(1), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(1), 1);
    }
}
