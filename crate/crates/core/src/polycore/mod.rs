//! Integer polynomials, cyclotomic factorization and the input parser.

mod cyclo;
mod parse;
mod poly;

pub use cyclo::{
    cyclo_factor, cyclotomic, divisors, mobius, parameters_of, root_parameters, totient,
    CycloFactorization, ParameterList,
};
pub use parse::{parse_poly, parse_poly_in};
pub use poly::IntPoly;

/// `(q, r)` with `a = q·b + r`, `deg r < deg b`; `b` must be monic.
pub fn divrem(a: &IntPoly, b: &IntPoly) -> crate::error::Result<(IntPoly, IntPoly)> {
    a.divrem(b)
}

/// Monic gcd over ℚ in primitive integer form.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a.gcd(b)
}
