use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense polynomial with integer coefficients, ascending degree.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial is
/// the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`
    pub fn monomial(k: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x^k − 1`
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[0] = -BigInt::one();
        coeffs[k] += BigInt::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero above the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Coefficients of `1, x, …, x^{n−1}`, zero padded. Panics if the
    /// polynomial does not fit.
    pub fn coeff_vector(&self, n: usize) -> Vec<BigInt> {
        assert!(self.coeffs.len() <= n, "degree {} does not fit in dimension {n}", self.degree());
        (0..n).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn require_monic(&self) -> Result<()> {
        if self.is_monic() { Ok(()) } else { Err(Error::NonMonic(self.to_string())) }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `p(x^d)`
    pub fn compose_power(&self, d: usize) -> Self {
        assert!(d >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.degree() * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * d] = c.clone();
        }
        Self::new(coeffs)
    }

    /// `p(−x)`
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Division by a monic polynomial. The quotient and remainder stay
    /// integral because no leading coefficient is ever inverted.
    pub fn divrem(&self, b: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if b.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        b.require_monic()?;
        let db = b.degree();
        if self.coeffs.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = std::mem::take(&mut r[k + db]);
            if c.is_zero() {
                continue;
            }
            for (i, bc) in b.coeffs[..db].iter().enumerate() {
                if !bc.is_zero() {
                    r[k + i] -= &c * bc;
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem(&self, b: &IntPoly) -> Result<IntPoly> {
        Ok(self.divrem(b)?.1)
    }

    /// Exact division over the integers; `None` when `b` does not divide
    /// `self` in ℤ[x]. The divisor need not be monic.
    pub fn exact_div(&self, b: &IntPoly) -> Option<IntPoly> {
        if b.is_zero() {
            return None;
        }
        let db = b.degree();
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() <= db {
            return None;
        }
        let lead = b.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let top = std::mem::take(&mut r[k + db]);
            if top.is_zero() {
                continue;
            }
            let (c, rest) = top.div_rem(&lead);
            if !rest.is_zero() {
                return None;
            }
            for (i, bc) in b.coeffs[..db].iter().enumerate() {
                if !bc.is_zero() {
                    r[k + i] -= &c * bc;
                }
            }
            q[k] = c;
        }
        r[..db].iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Greatest common divisor over ℚ, returned as a primitive integer
    /// polynomial with positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Pseudo-remainder: `lc(b)^k · a mod b` computed without fractions.
    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree();
        let lead = b.leading();
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let top = r.leading();
            r = &r.scale(&lead) - &b.scale(&top).shift(shift);
        }
        r
    }

    /// True when every nonzero coefficient sits at a multiple of `d`.
    pub fn is_in_power(&self, d: usize) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| c.is_zero() || i % d == 0)
    }

    /// Human-readable form in the variable `var`, highest degree first.
    pub fn display_in(&self, var: char) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push(if c.is_negative() { '-' } else { '+' });
            }
            if k == 0 || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            match k {
                0 => {}
                1 => out.push(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }

    /// Canonical text accepted by the polynomial parser: the expanded sum in
    /// parentheses, e.g. `(x^5-1)`.
    pub fn render(&self) -> String {
        self.render_in('x')
    }

    pub fn render_in(&self, var: char) -> String {
        format!("({})", self.display_in(var))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in('x'))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> IntPoly {
        iter.fold(IntPoly::one(), |acc, p| &acc * &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn divrem_examples() {
        let x5 = IntPoly::monomial(5, BigInt::one());
        let f0 = IntPoly::x_pow_minus_one(5);
        assert_eq!(x5.divrem(&f0).unwrap(), (IntPoly::one(), IntPoly::one()));
        assert_eq!(f0.divrem(&f0).unwrap(), (IntPoly::one(), IntPoly::zero()));

        let g0 = &p(&[1, 1]) * &p(&[1, 0, 1]).pow(2);
        let r = (&g0 - &f0).shift(1).rem(&f0).unwrap();
        assert_eq!(r, p(&[1, 2, 1, 2, 2]));
    }

    #[test]
    fn divrem_rejects_non_monic() {
        assert!(matches!(p(&[1, 1]).divrem(&p(&[1, 2])), Err(Error::NonMonic(_))));
        assert_eq!(p(&[1]).divrem(&IntPoly::zero()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn gcd_examples() {
        let f0 = IntPoly::x_pow_minus_one(5);
        let g0 = &p(&[1, 1]) * &p(&[1, 0, 1]).pow(2);
        assert_eq!(f0.gcd(&g0), IntPoly::one());
        assert_eq!(f0.gcd(&f0), f0);
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
    }

    #[test]
    fn exact_division() {
        let f = IntPoly::x_pow_minus_one(5);
        assert_eq!(f.exact_div(&p(&[-1, 1])), Some(p(&[1, 1, 1, 1, 1])));
        assert_eq!(f.exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[2, 2]).exact_div(&p(&[2])), Some(p(&[1, 1])));
    }

    #[test]
    fn rendering() {
        assert_eq!(IntPoly::x_pow_minus_one(5).render(), "(x^5-1)");
        assert_eq!(p(&[1, -2, 0, 3]).to_string(), "3x^3-2x+1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(IntPoly::zero().render(), "(0)");
    }
}
