use proptest::prelude::*;

use liesys::aut::{apply_aut, compose_aut, tau, AutPresentation};
use liesys::base::{fmt_rational, parse_rational};
use liesys::cli::format::{emit_aut, emit_operator, parse_aut, parse_operator, Operator};
use liesys::finitary::{act_tensor, bracket, TensorElement};
use liesys::gen;
use liesys::mackey::dense_approx;
use liesys::{FinVec, FinitaryOp, MackeyOp};

fn mackey_from(seed: u64) -> MackeyOp {
    gen::mackey(&mut gen::rng(seed), 5, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(n in -1000i64..1000, d in 1i64..50) {
        let r = liesys::base::frac(n, d);
        prop_assert_eq!(parse_rational(&fmt_rational(&r)), Some(r));
    }

    #[test]
    fn finvec_is_canonical(seed: u64) {
        let mut g = gen::rng(seed);
        let v = gen::finvec(&mut g, 8, 6);
        let w = gen::finvec(&mut g, 8, 6);
        let s = &v - &w;
        prop_assert!(s.iter().all(|(_, c)| *c != liesys::base::rat(0)));
        prop_assert_eq!(&(&s + &w), &v);
        prop_assert_eq!(s.to_string().parse::<FinVec>().unwrap(), s);
    }

    #[test]
    fn operator_text_round_trip(seed: u64) {
        let mut g = gen::rng(seed);
        for op in [Operator::Finitary(gen::finitary(&mut g, 9, 7)), Operator::Mackey(gen::mackey(&mut g, 5, 6))] {
            let text = emit_operator(&op);
            let parsed = parse_operator(&text).unwrap();
            prop_assert!(parsed.warnings.is_empty());
            prop_assert_eq!(emit_operator(&parsed.value), text);
            prop_assert_eq!(parsed.value, op);
        }
    }

    #[test]
    fn aut_text_round_trip(seed: u64, eps: bool) {
        let h = gen::presentation(&mut gen::rng(seed), eps);
        let text = emit_aut(&h);
        let parsed = parse_aut(&text).unwrap();
        prop_assert!(parsed.warnings.is_empty());
        prop_assert_eq!(parsed.value, h);
    }

    #[test]
    fn mackey_product_is_associative(s1: u64, s2: u64, s3: u64) {
        let (a, b, c) = (mackey_from(s1), mackey_from(s2), mackey_from(s3));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn product_acts_by_composition(s1: u64, s2: u64) {
        let (a, b) = (mackey_from(s1), mackey_from(s2));
        let v = gen::finvec(&mut gen::rng(s1 ^ s2), 10, 4);
        prop_assert_eq!(a.mul(&b).apply(&v), a.apply(&b.apply(&v)));
    }

    #[test]
    fn transpose_is_an_involution(seed: u64) {
        let a = mackey_from(seed);
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        prop_assert_eq!(tau(&tau(&a)), a);
    }

    #[test]
    fn finitary_embedding_is_a_homomorphism(seed: u64) {
        let mut g = gen::rng(seed);
        let (a, b) = (gen::finitary(&mut g, 7, 6), gen::finitary(&mut g, 7, 6));
        let m = |x: &FinitaryOp| MackeyOp::from_finitary(x);
        prop_assert_eq!(m(&a.mul(&b)), m(&a).mul(&m(&b)));
        prop_assert_eq!(m(&bracket(&a, &b)), m(&a).bracket(&m(&b)));
        prop_assert_eq!(m(&a).to_finitary(), Some(a));
    }

    #[test]
    fn tensor_action_is_a_derivation(seed: u64) {
        let mut g = gen::rng(seed);
        let a = gen::finitary(&mut g, 6, 4);
        let v = gen::finvec(&mut g, 6, 3);
        let w = gen::finvec(&mut g, 6, 3);
        let one = liesys::base::rat(1);
        let t = TensorElement::from_terms(1, 1, &[(one.clone(), vec![v.clone()], vec![w.clone()])]).unwrap();
        let lhs = act_tensor(&a, &t);
        let rhs = TensorElement::from_terms(
            1,
            1,
            &[
                (one.clone(), vec![liesys::finitary::act_v(&a, &v)], vec![w.clone()]),
                (one, vec![v], vec![liesys::finitary::act_vstar(&a, &w)]),
            ],
        )
        .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn automorphisms_fix_or_negate_identity(seed: u64, eps: bool) {
        let h = gen::presentation(&mut gen::rng(seed), eps);
        let id = MackeyOp::identity();
        let want = if eps { id.neg() } else { id.clone() };
        prop_assert_eq!(apply_aut(&h, &id), want);
        let back = compose_aut(&h, &AutPresentation::tau_only());
        prop_assert_eq!(back.eps, !eps);
    }

    #[test]
    fn approximation_interpolates(seed: u64) {
        let mut g = gen::rng(seed);
        let a = gen::mackey(&mut g, 5, 6);
        let rs: Vec<FinVec> = (0..3).map(|_| gen::nonzero_finvec(&mut g, 9, 3)).collect();
        let psi = dense_approx(&a, &rs).unwrap();
        prop_assert_eq!(psi.trace(), liesys::base::rat(0));
        for r in &rs {
            prop_assert_eq!(MackeyOp::from_finitary(&psi).apply(r), a.apply(r));
        }
    }
}
