use super::*;
use crate::curve::{Curve, Place};
use crate::error::Error;
use crate::fixtures::{cube_root_field, curve, cyclotomic_field, generic_point_tower, rational_place_over};
use crate::rr::DEFAULT_MAX_TAU;

fn bundle(c: &Curve, divisors: Vec<Divisor>) -> SplitBundle {
    SplitBundle::new(c.clone(), divisors).unwrap()
}

fn pinf(k: i64) -> Divisor {
    Divisor::from_pairs([(Place::Infinity, k)])
}

fn generic_curve() -> (Curve, Place) {
    let k = generic_point_tower();
    let c = Curve::new(3, 1, 1, k.clone()).unwrap();
    let p = c.finite_place(k.t().unwrap(), k.u().unwrap()).unwrap();
    (c, p)
}

#[test]
fn pullback_of_structure_sheaf_is_trivial() {
    let c = curve(2, 1, 0).unwrap();
    let w = assemble_parabolic(&bundle(&c, vec![Divisor::zero()]), 1).unwrap();
    let u = parabolic_pullback(&w, &c).unwrap();
    assert_eq!(u.rank(), 2);
    assert_eq!(u.degree(), 0);
    let m = class_decompose(&u, &[Divisor::zero(), Divisor::zero()], 1).unwrap();
    assert!(m.matched);
    let wrong = class_decompose(&u, &[pinf(1), Divisor::zero()], 1);
    assert!(matches!(wrong, Err(Error::Math(_))));
}

#[test]
fn incompatible_weights_are_rejected() {
    let c = curve(2, 1, 0).unwrap();
    let w = assemble_parabolic(&bundle(&c, vec![Divisor::zero()]), 1).unwrap();
    let err = parabolic_pullback(&w, &curve(3, 1, 1).unwrap()).unwrap_err();
    assert!(err.to_string().contains("weight 1/2"), "{err}");
}

#[test]
fn pullback_of_split_sum_is_split() {
    let c = curve(2, 1, 0).unwrap();
    let e = bundle(&c, vec![Divisor::zero(), pinf(-2)]);
    assert!(verify_pullback_splits(&e, 3).unwrap());
}

#[test]
fn galois_translates_match() {
    let c = curve(3, 1, 1).unwrap();
    let branch = Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)]);
    assert!(verify_pullback_splits(&bundle(&c, vec![branch]), 2).unwrap());
    let c = Curve::new(3, 1, 1, cube_root_field()).unwrap();
    let q = rational_place_over(&c, 4).unwrap();
    let d = Divisor::from_pairs([(q.clone(), 1), (Place::Infinity, -1)]);
    let translates: std::collections::BTreeSet<Divisor> = (0..3).map(|g| c.galois_translate(&d, g)).collect();
    assert_eq!(translates.len(), 3);
    assert!(verify_pullback_splits(&bundle(&c, vec![d]), 2).unwrap());
}

#[test]
fn matching_is_order_independent() {
    let c = curve(3, 1, 1).unwrap();
    let d = Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)]);
    let e = bundle(&c, vec![d, pinf(-1)]);
    let w = assemble_parabolic(&e, 5).unwrap();
    let u = parabolic_pullback(&w, &c).unwrap();
    let mut cands = translate_candidates(&c, &e, 0..3);
    let first = class_decompose(&u, &cands, 5).unwrap();
    assert!(first.matched);
    cands.reverse();
    let second = class_decompose(&u, &cands, 9).unwrap();
    assert!(second.matched);
    assert_eq!(first.classes, second.classes);
}

#[test]
fn transversals() {
    let k = cyclotomic_field(4);
    let t = TowerSpec::new(4, 2, 1, 2, k).unwrap();
    assert_eq!(invariants_transversal(&t).unwrap(), (vec![0, 1], 0));
    let t = TowerSpec::new(6, 1, 0, 3, cyclotomic_field(6)).unwrap();
    assert_eq!(invariants_transversal(&t).unwrap().0, vec![0, 1, 2]);
    assert!(TowerSpec::new(6, 1, 1, 3, cyclotomic_field(6)).is_err());
    assert!(TowerSpec::new(4, 2, 1, 3, cyclotomic_field(4)).is_err());
}

#[test]
fn tower_pullbacks() {
    let t = TowerSpec::new(4, 2, 1, 2, cyclotomic_field(4)).unwrap();
    assert!(t.check_composition().unwrap());
    for p in t.middle.places_over(&crate::curve::LinePoint::Zero).unwrap() {
        assert_eq!(t.pullback_place(&p).unwrap().degree(), 2);
    }
    let e = bundle(&t.middle, vec![Divisor::zero()]);
    let check = verify_invariant_subbundle(&t, &e, 4).unwrap();
    assert!(check.holds);
    assert!(check.invariant_candidates);
    let e = bundle(&t.middle, vec![Divisor::from_pairs([(Place::One(0), 1), (Place::Infinity, -1)])]);
    assert!(verify_invariant_subbundle(&t, &e, 4).unwrap().holds);
}

#[test]
fn pushdown_rejects_inconsistent_labels() {
    let c = curve(2, 1, 0).unwrap();
    let e = bundle(&c, vec![Divisor::zero()]);
    let w = assemble_parabolic(&e, 1).unwrap();
    let u = parabolic_pullback(&w, &c).unwrap();
    let labeled: Vec<Labeled> = (0..2).map(|g| Labeled { divisor: Divisor::zero(), shift: g, summand: 0 }).collect();
    let m = class_decompose(&u, &[Divisor::zero(), Divisor::zero()], 1).unwrap();
    let back = pushdown_extract(&e, &labeled, &m, &[0, 1], 0).unwrap();
    assert_eq!(back.divisors, e.divisors);
    let bad: Vec<Labeled> = (0..2).map(|_| Labeled { divisor: Divisor::zero(), shift: 0, summand: 0 }).collect();
    assert!(matches!(pushdown_extract(&e, &bad, &m, &[0, 1], 0), Err(Error::Internal(_))));
}

#[test]
fn endomorphism_algebras() {
    let c = curve(3, 1, 1).unwrap();
    let line = end_algebra(&bundle(&c, vec![pinf(2)])).unwrap();
    assert_eq!(line.dim(), 1);
    assert!(indecomposable_test(&line));

    let sum = end_algebra_line(&[0, -1]).unwrap();
    assert_eq!(sum.dim(), 4);
    assert!(!indecomposable_test(&sum));

    let trivial = end_algebra(&bundle(&c, vec![Divisor::zero(), Divisor::zero()])).unwrap();
    assert_eq!(trivial.dim(), 4);
    assert!(!indecomposable_test(&trivial));

    let mixed = end_algebra(&bundle(&c, vec![Divisor::zero(), pinf(-1)])).unwrap();
    assert_eq!(mixed.dim(), 3);
    assert!(!indecomposable_test(&mixed));
}

#[test]
fn endomorphisms_of_a_pullback() {
    let c = curve(2, 1, 0).unwrap();
    let w = assemble_parabolic(&bundle(&c, vec![Divisor::zero()]), 1).unwrap();
    let u = parabolic_pullback(&w, &c).unwrap();
    let m = class_decompose(&u, &[Divisor::zero(), Divisor::zero()], 1).unwrap();
    let alg = end_algebra_constrained(&u, &m).unwrap();
    assert_eq!(alg.dim(), 4);
    assert!(!indecomposable_test(&alg));
}

#[test]
fn verdicts() {
    let (c, p) = generic_curve();
    let free = Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)]);
    let v = descent_verdict(&bundle(&c, vec![free]), 1, DEFAULT_MAX_TAU).unwrap();
    assert_eq!(v.name(), "DefinedOverF");

    let d = Divisor::from_pairs([(p.clone(), 1), (Place::Infinity, -1)]);
    match descent_verdict(&bundle(&c, vec![d]), 1, DEFAULT_MAX_TAU).unwrap() {
        Verdict::NotDefined { summand, witness } => {
            assert_eq!(summand, 0);
            assert_eq!(witness.ell, 0);
        }
        other => panic!("expected NotDefined, got {other:?}"),
    }

    let mut orbit = pinf(-3);
    for i in 0..3 {
        orbit.add_at(c.translate_place(&p, i), 1);
    }
    match descent_verdict(&bundle(&c, vec![orbit]), 1, DEFAULT_MAX_TAU).unwrap() {
        Verdict::DefinedOverF { certificates, .. } => assert!(certificates[0].is_some()),
        other => panic!("expected DefinedOverF, got {other:?}"),
    }
}

#[test]
fn wrong_classes_of_the_right_degree_fail() {
    let c = curve(3, 1, 1).unwrap();
    let w = assemble_parabolic(&bundle(&c, vec![Divisor::zero()]), 1).unwrap();
    let u = parabolic_pullback(&w, &c).unwrap();
    let p0 = Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)]);
    let m = class_decompose(&u, &[p0.clone(), p0.scale(-1), Divisor::zero()], 1).unwrap();
    assert!(!m.matched);
    assert!(m.failure.is_some());
    let m = class_decompose(&u, &[pinf(-1), pinf(-1), pinf(2)], 1).unwrap();
    assert!(!m.matched);
}
