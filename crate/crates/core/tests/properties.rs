//! Randomized invariants of every module, driven by proptest.

mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use orthomono::cli::commands::{analyze, exit_code, Options, EXIT_INVALID};
use orthomono::linalg::{bilinear, to_rat_vec, IntMatrix, IntVector, Rat, RatVector};
use orthomono::monodromy::HyperPair;
use orthomono::padtower::{isometry_check, pad_pair, padded_q_rank, remainder_coeff_check};
use orthomono::polycore::{cyclo_factor, cyclotomic, divisors, parameters_of, parse_poly, IntPoly};
use orthomono::quadform::{
    change_basis, cross_checked, diagonalize, gram_remainder, isotropic_search, q_rank, signature,
    signature_interlace, signature_of_diagonal, BasisLabel,
};
use orthomono::witness::{
    conjugate, orbit, translation_vector, unipotent_from_reflections, Frame, GroupElement, Letter, Parabolic,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair_from_seed(seed: u64) -> HyperPair {
    common::random_pair(&mut ChaCha8Rng::seed_from_u64(seed), 12)
}

fn monic(coeffs: Vec<i64>) -> IntPoly {
    let mut c = coeffs;
    c.push(1);
    IntPoly::from_i64(&c)
}

fn rat_vec_scaled(m: &IntMatrix, x: &[Rat]) -> RatVector {
    m.to_rational().mul_vec(x)
}

prop_compose! {
    fn word()(letters in prop::collection::vec(0u8..3, 0..=4)) -> Vec<Letter> {
        letters.into_iter().map(|l| match l { 0 => Letter::A, 1 => Letter::AInv, _ => Letter::C }).collect()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn divrem_reconstructs(a in prop::collection::vec(-9i64..=9, 0..10), b in prop::collection::vec(-9i64..=9, 0..5)) {
        let (a, b) = (monic(a), monic(b));
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn render_round_trips(c in prop::collection::vec(-20i64..=20, 0..12)) {
        let p = IntPoly::from_i64(&c);
        prop_assert_eq!(parse_poly(&p.render()).unwrap(), p);
    }

    #[test]
    fn factorization_round_trips(c in prop::collection::vec(-3i64..=3, 0..7), ds in prop::collection::vec(1u64..=30, 0..4)) {
        let f = ds.iter().fold(monic(c), |acc, &d| &acc * &cyclotomic(d));
        let fac = cyclo_factor(&f);
        prop_assert_eq!(fac.product(), f.clone());
        if fac.remainder_is_one {
            prop_assert_eq!(parameters_of(&f).unwrap().len(), f.degree());
        }
    }
}

#[test]
fn cyclotomic_products_give_x_d_minus_1() {
    for d in 1..=60u64 {
        let prod = divisors(d).iter().fold(IntPoly::one(), |acc, &e| &acc * &cyclotomic(e));
        assert_eq!(prod, IntPoly::x_pow_minus_one(d as usize), "d = {d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn monodromy_invariants(seed in any::<u64>()) {
        let p = pair_from_seed(seed);
        let n = p.n;
        prop_assert_eq!(&p.a * &p.c, p.b.clone());
        prop_assert!((&p.c * &p.c).is_identity());
        prop_assert_eq!(p.a.determinant().unwrap().magnitude().clone(), One::one());
        prop_assert_eq!(p.b.determinant().unwrap().magnitude().clone(), One::one());
        prop_assert_eq!(p.c.determinant().unwrap(), BigInt::from(-1));
        // (C − 1)ℤⁿ = ℤv: every column is a multiple of v, with coprime multiples.
        let cm1 = &p.c - &IntMatrix::identity(n);
        prop_assert_eq!(cm1.to_rational().rank(), 1);
        let k = p.v.iter().position(|x| !x.is_zero()).unwrap();
        let mut g = BigInt::zero();
        for j in 0..n {
            let col = cm1.column(j);
            let m = &col[k] / &p.v[k];
            prop_assert_eq!(col.clone(), p.v.iter().map(|x| x * &m).collect::<IntVector>());
            g = num_integer::Integer::gcd(&g, &m);
        }
        prop_assert!(g.is_one());
        let diff = &p.g - &p.f;
        prop_assert_eq!(p.a.mul_vec(&p.v), diff.coeff_vector(n));
        prop_assert_eq!(p.cyclic_basis_matrix().to_rational().rank(), n);
    }

    #[test]
    fn quadform_invariants(seed in any::<u64>()) {
        let p = pair_from_seed(seed);
        let (cyc, std) = cross_checked(&p).unwrap();
        for m in [&p.a, &p.b] {
            let m = m.to_rational();
            prop_assert_eq!(&(&m.transpose() * &std.gram) * &m, std.gram.clone());
        }
        let v = to_rat_vec(&p.v);
        prop_assert_eq!(bilinear(&std.gram, &v, &v), Rat::from_integer(2.into()));
        let (diag, _) = diagonalize(&cyc);
        let (sp, sq) = signature_of_diagonal(&diag).unwrap();
        let inter = signature_interlace(&parameters_of(&p.f).unwrap(), &parameters_of(&p.g).unwrap()).unwrap();
        prop_assert_eq!(inter, sp.abs_diff(sq));
        // Two distinct repeated roots force real rank ≥ 2.
        let repeated: u64 = cyclo_factor(&p.f)
            .factors
            .iter()
            .filter(|(_, e)| *e >= 2)
            .map(|(d, _)| orthomono::polycore::totient(*d))
            .sum();
        if repeated >= 2 {
            prop_assert!(sp.abs_diff(sq) + 4 <= p.n);
        }
        for w in isotropic_search(&cyc, 2) {
            let w = to_rat_vec(&w);
            prop_assert!(cyc.product(&w, &w).is_zero());
        }
        let cert = q_rank(&p, 2).unwrap();
        prop_assert!(cert.lo <= cert.hi && cert.hi <= sp.min(sq));
        let ws: Vec<RatVector> = cert.isotropic_witnesses.iter().map(|w| to_rat_vec(w)).collect();
        for a in &ws {
            for b in &ws {
                prop_assert!(cyc.product(a, b).is_zero());
            }
        }
    }

    #[test]
    fn sylvester_stability(seed in any::<u64>(), entries in prop::collection::vec(-2i64..=2, 144)) {
        let p = pair_from_seed(seed);
        let cyc = gram_remainder(&p).unwrap();
        let n = p.n;
        let mut l = IntMatrix::identity(n);
        let mut u = IntMatrix::identity(n);
        let mut it = entries.into_iter();
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = it.next().unwrap_or(0).into();
                u[(j, i)] = it.next().unwrap_or(0).into();
            }
        }
        let m = (&l * &u).to_rational();
        let moved = change_basis(&cyc, &m, BasisLabel::Custom("LU".into())).unwrap();
        prop_assert_eq!(signature(&moved).unwrap(), signature(&cyc).unwrap());
    }

    #[test]
    fn words_are_isometries_and_conjugate_reflections(seed in any::<u64>(), m in word(), k in 0usize..12) {
        let p = pair_from_seed(seed);
        let frame = Frame::cyclic(&p).unwrap();
        let g = frame.element(m).unwrap();
        prop_assert!(frame.preserves(&g.matrix));
        let w = frame.element(vec![Letter::A; k % p.n]).unwrap().apply(&frame.v);
        let c_w = GroupElement { matrix: frame.reflection(&w).unwrap(), word: vec![Letter::Reflection(w.clone())] };
        let lhs = conjugate(&g, &c_w).unwrap();
        prop_assert_eq!(lhs.matrix, frame.reflection(&g.apply(&w)).unwrap());
    }

    #[test]
    fn unipotent_witnesses(seed in any::<u64>()) {
        let p = pair_from_seed(seed);
        let frame = Frame::cyclic(&p).unwrap();
        if let Some(w) = unipotent_from_reflections(&frame, None, 6).unwrap() {
            let par = Parabolic::new(&frame.gram, &w.eps).unwrap();
            let t = par.test(&w.u.matrix);
            prop_assert!(t.fixes_vector && t.in_unipotent_radical && !t.trivial);
            prop_assert!(w.translation.iter().any(|x| !x.is_zero()));
            prop_assert!(frame.verify(&w.u).unwrap());
            let tr = translation_vector(&w.u, &w.eps, &frame).unwrap();
            // Equivariance under reflections in orbit points orthogonal to ε.
            for pt in orbit(&frame, 3).iter().filter(|pt| frame.product_int(&pt.vector, &w.eps).is_zero()).take(6) {
                let Ok(r) = frame.reflection(&pt.vector) else { continue };
                let r = GroupElement { matrix: r, word: vec![Letter::Reflection(pt.vector.clone())] };
                let conj = conjugate(&r, &w.u).unwrap();
                let lam = par.line_scalar(&r.matrix).unwrap();
                let expected: RatVector = par.quotient_action(&r.matrix).unwrap().mul_vec(&tr).iter().map(|x| x * &lam).collect();
                prop_assert_eq!(translation_vector(&conj, &w.eps, &frame).unwrap(), expected);
            }
        }
    }
}

fn cyclo_product_in_y(ds: &[u64]) -> IntPoly {
    ds.iter().fold(IntPoly::one(), |acc, &d| &acc * &cyclotomic(d))
}

/// `Φ_d` with `d ≥ 2` and `φ(d) ≤ 3`, so `P(0) = 1` and `deg P ≤ 3` per factor.
fn small_cyclo() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 6])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn padding_checks_hold(ps in prop::collection::vec(small_cyclo(), 0..=3), qs in prop::collection::vec(small_cyclo(), 0..=3)) {
        let (p, q) = (cyclo_product_in_y(&ps), cyclo_product_in_y(&qs));
        prop_assume!(p.degree() == q.degree() && p.degree() <= 3);
        let f0 = parse_poly(common::BASE_F).unwrap();
        let g0 = parse_poly(common::BASE_G).unwrap();
        let Ok(pp) = pad_pair(&f0, &g0, &p, &q, 6) else {
            // Shared factors are rejected by validation; nothing to check.
            return Ok(());
        };
        prop_assert!(remainder_coeff_check(&pp));
        prop_assert!(isometry_check(&pp));
        prop_assert!(padded_q_rank(&pp, 2).unwrap().lo >= 2);
        let scaled = rat_vec_scaled(&pp.embedding, &to_rat_vec(&pp.base.v));
        prop_assert_eq!(scaled.len(), pp.n());
    }

    #[test]
    fn malformed_input_exits_2(s in "[-+*/^()x0-9 yPhi]{0,16}") {
        if let Err(e) = analyze(&s, "(x+1)", &Options::default()) {
            prop_assert_eq!(exit_code(&e), EXIT_INVALID, "{:?} -> {:?}", s, e);
        }
    }
}
