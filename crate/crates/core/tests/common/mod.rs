#![allow(dead_code)]

use orthomono::monodromy::{build_pair, HyperPair};
use orthomono::polycore::{cyclotomic, totient, IntPoly};
use rand::Rng;

pub const BASE_F: &str = "(x^5-1)";
pub const BASE_G: &str = "(x+1)*(x^2+1)^2";

/// The ten worked examples, in order.
pub const EXAMPLES: [(&str, &str); 10] = [
    ("(x-1)*(x^2+1)^2", "(x+1)*(x^2-x+1)^2"),
    ("(x-1)*(x^2+1)^2", "(x+1)*(x^4+x^3+x^2+x+1)"),
    ("(x-1)*(x^2+x+1)^2", "(x+1)*(x^4+x^3+x^2+x+1)"),
    ("(x-1)*(x^2+1)*(x^2+x+1)", "(x+1)*(x^4+x^3+x^2+x+1)"),
    ("(x^5-1)", "(x+1)*(x^2-x+1)^2"),
    ("(x^5-1)", "(x+1)^3*(x^2-x+1)"),
    ("(x-1)*(x^2+x+1)^2", "(x+1)*(x^2-x+1)^2"),
    ("(x-1)*(x^2+x+1)^2", "(x+1)*(x^4-x^2+1)"),
    ("(x^5-1)", "(x+1)*(x^4-x^2+1)"),
    ("(x-1)*(x^2+1)^2", "(x+1)*(x^4-x^2+1)"),
];

fn fill<R: Rng>(rng: &mut R, mut rem: usize, forbid: &[u64], out: &mut Vec<u64>) -> bool {
    while rem > 0 {
        let choices: Vec<u64> =
            (2..=60).filter(|&d| totient(d) as usize <= rem && !forbid.contains(&d)).collect();
        if choices.is_empty() {
            return false;
        }
        let d = choices[rng.random_range(0..choices.len())];
        rem -= totient(d) as usize;
        out.push(d);
    }
    true
}

fn product(ds: &[u64]) -> IntPoly {
    ds.iter().fold(IntPoly::one(), |acc, &d| &acc * &cyclotomic(d))
}

/// Coprime products of cyclotomic polynomials of equal degree `≤ max_deg`
/// with `f(0) = −1`, `g(0) = 1`: `f` carries an odd power of `x − 1`, `g`
/// none.
pub fn random_pair<R: Rng>(rng: &mut R, max_deg: usize) -> HyperPair {
    loop {
        let n = rng.random_range(1..=max_deg);
        let e1 = 2 * rng.random_range(0..=(n - 1).min(4) / 2) + 1;
        let mut fd = vec![1; e1];
        if !fill(rng, n - e1, &[], &mut fd) {
            continue;
        }
        let mut gd = Vec::new();
        if !fill(rng, n, &fd, &mut gd) {
            continue;
        }
        if let Ok(p) = build_pair(&product(&fd), &product(&gd)) {
            return p;
        }
    }
}
