use super::*;
use crate::curve::LinePoint;
use crate::field::Rat;
use crate::fixtures::curve;
use num_traits::Zero;

fn bundle(n: u64, a: u64, b: u64, divisors: Vec<Divisor>) -> SplitBundle {
    SplitBundle::new(curve(n, a, b).unwrap(), divisors).unwrap()
}

fn structure_sheaf(n: u64, a: u64, b: u64) -> SplitBundle {
    bundle(n, a, b, vec![Divisor::zero()])
}

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

#[test]
fn splitting_types() {
    assert_eq!(pushforward_splitting_type(&structure_sheaf(2, 1, 0)).unwrap(), vec![0, -1]);
    assert_eq!(pushforward_splitting_type(&structure_sheaf(3, 1, 1)).unwrap(), vec![0, -1, -2]);
    let pulled = bundle(2, 1, 0, vec![Divisor::from_pairs([(Place::Infinity, 2)])]);
    assert_eq!(pushforward_splitting_type(&pulled).unwrap(), vec![1, 0]);
    let e = bundle(3, 1, 1, vec![Divisor::zero(), Divisor::from_pairs([(Place::Infinity, 1)])]);
    let s = pushforward_splitting_type(&e).unwrap();
    assert_eq!(s.iter().sum::<i64>(), e.expected_pushforward_degree());
}

#[test]
fn fiber_models() {
    let m = fiber_decomposition(&structure_sheaf(2, 1, 0), &LinePoint::Zero).unwrap();
    assert_eq!((m.dim(), m.places.len()), (2, 1));
    let e = bundle(3, 1, 1, vec![Divisor::zero(), Divisor::from_pairs([(Place::Infinity, 1)])]);
    let m = fiber_decomposition(&e, &LinePoint::One).unwrap();
    assert_eq!((m.dim(), m.places.len()), (6, 1));
    let m = fiber_decomposition(&structure_sheaf(4, 2, 1), &LinePoint::Zero).unwrap();
    assert_eq!(m.places.len(), 2);
    assert_eq!((m.block(0).len(), m.block(1).len()), (2, 2));
}

#[test]
fn structure_sheaf_degree_two() {
    let e = structure_sheaf(2, 1, 0);
    let w = assemble_parabolic(&e, 0).unwrap();
    assert_eq!(w.splitting, vec![0, -1]);
    for y in [LinePoint::Zero, LinePoint::Infinity] {
        let ws = w.weight_multiset(&y);
        assert_eq!(ws.into_iter().collect::<Vec<_>>(), vec![(rat(0, 1), 1), (rat(1, 2), 1)]);
        let flag = &w.fiber(&y).unwrap().flags[0];
        assert_eq!(flag.dim(2), 0);
    }
    // the O(-1) summand is spanned by y
    let s = &w.maps.sections[1];
    assert_eq!(s.m, -1);
    assert!(s.parts[0].coeff(1).as_constant().is_some_and(|c| !c.is_zero()));
}

#[test]
fn structure_sheaf_genus_one() {
    let e = structure_sheaf(3, 1, 1);
    let w = assemble_parabolic(&e, 3).unwrap();
    assert_eq!(w.splitting, vec![0, -1, -2]);
    for y in BRANCH_VALUES {
        let ws: Vec<_> = w.weight_multiset(&y).into_iter().collect();
        assert_eq!(ws, vec![(rat(0, 1), 1), (rat(1, 3), 1), (rat(2, 3), 1)]);
    }
}

#[test]
fn jet_flags_are_twisted_images() {
    let cases = vec![
        structure_sheaf(2, 1, 0),
        structure_sheaf(3, 1, 1),
        bundle(3, 1, 1, vec![Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)])]),
        structure_sheaf(4, 2, 1),
    ];
    for e in cases {
        for y in BRANCH_VALUES {
            let (model, flags) = parabolic_filtration(&e, &y).unwrap();
            for (pi, flag) in flags.iter().enumerate() {
                for k in 0..=flag.ramification {
                    let direct = twisted_pushforward_image(&e, &model, pi, k).unwrap();
                    assert_eq!(direct.rref(), flag.subspaces[k].rref(), "{y:?} place {pi} k {k}");
                }
            }
        }
    }
}

#[test]
fn flags_change_by_the_change_of_basis() {
    let e = bundle(3, 1, 1, vec![Divisor::zero(), Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)])]);
    let w1 = assemble_parabolic(&e, 1).unwrap();
    let w2 = assemble_parabolic(&e, 2).unwrap();
    assert_eq!(w1.splitting, w2.splitting);
    for (f1, f2) in w1.fibers.iter().zip(&w2.fibers) {
        // coordinates in frame 2 = frame2^-1 frame1 (coordinates in frame 1)
        let change = f2.frame.inverse().unwrap().mul(&f1.frame);
        for (a, b) in f1.flags.iter().zip(&f2.flags) {
            for (s1, s2) in a.subspaces.iter().zip(&b.subspaces) {
                let moved = change.mul(&s1.transpose()).transpose().rref();
                assert_eq!(&moved, s2);
            }
        }
    }
}

#[test]
fn dependent_sections_are_rejected() {
    let e = structure_sheaf(2, 1, 0);
    let maps = compute_splitting_maps(&e, 0).unwrap();
    let mut bad = maps.sections.clone();
    bad[1] = Section { m: -1, parts: vec![e.curve.x_function().scale(&e.curve.k(0))] };
    bad[1].parts[0] = crate::curve::Function::zero(2);
    assert!(SplittingMaps::from_sections(&e, bad).is_err());
    assert!(SplittingMaps::from_sections(&e, maps.sections).is_ok());
}

#[test]
fn prop1_on_t_free_bundles() {
    let e = bundle(3, 1, 1, vec![Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)])]);
    assert!(verify_algebraic_direct_image(&e, 0).unwrap());
    let e = bundle(2, 1, 0, vec![Divisor::zero(), Divisor::from_pairs([(Place::Zero(0), 1)])]);
    assert!(verify_algebraic_direct_image(&e, 0).unwrap());
    let k = crate::fixtures::generic_point_tower();
    let c = crate::curve::Curve::new(3, 1, 1, k.clone()).unwrap();
    let p = c.finite_place(k.t().unwrap(), k.u().unwrap()).unwrap();
    let e = SplitBundle::new(c, vec![Divisor::from_pairs([(p, 1), (Place::Infinity, -1)])]).unwrap();
    assert!(verify_algebraic_direct_image(&e, 0).is_err());
}

#[test]
fn corrupted_weight_is_detected() {
    let e = structure_sheaf(2, 1, 0);
    let mut w = assemble_parabolic(&e, 0).unwrap();
    w.fibers[0].flags[0].weights[1] = rat(1, 3);
    let err = w.check_invariants(1).unwrap_err();
    assert!(err.to_string().contains("weight"), "{err}");
}
