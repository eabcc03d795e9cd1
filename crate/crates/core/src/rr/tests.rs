use super::*;
use crate::curve::LinePoint;
use crate::fixtures::{curve, generic_point_tower};
use proptest::prelude::*;

fn pinf(k: i64) -> Divisor {
    Divisor::from_pairs([(Place::Infinity, k)])
}

#[test]
fn small_spaces() {
    let c = curve(3, 1, 1).unwrap();
    let b1 = rr_space(&c, &pinf(1)).unwrap();
    assert_eq!(b1.dim(), 1);
    assert_eq!(b1.functions[0].as_constant(), Some(FieldElem::one()));
    assert_eq!(ell(&c, &pinf(3)).unwrap(), 3);
    let c2 = curve(2, 1, 0).unwrap();
    assert_eq!(ell(&c2, &Divisor::zero()).unwrap(), 1);
    assert_eq!(ell(&c2, &pinf(-1)).unwrap(), 0);
}

#[test]
fn basis_elements_lie_in_the_space() {
    let c = curve(3, 1, 1).unwrap();
    let d = Divisor::from_pairs([(Place::Zero(0), 2), (Place::One(0), 1), (Place::Infinity, 2)]);
    let b = rr_space(&c, &d).unwrap();
    assert_eq!(b.dim(), 5);
    for f in &b.functions {
        assert!(c.in_l_space(f, &d).unwrap());
    }
}

#[test]
fn linear_equivalence_examples() {
    let c = curve(2, 1, 0).unwrap();
    let d = Divisor::from_pairs([(Place::Zero(0), 2), (Place::Infinity, -2)]);
    let r = lin_equiv(&c, &Divisor::zero(), &d).unwrap();
    assert!(r.equivalent);
    assert_eq!(r.witness.unwrap(), c.x_function());
    let same = lin_equiv(&c, &d, &d).unwrap();
    assert_eq!(same.witness.unwrap().as_constant(), Some(FieldElem::one()));

    let e = curve(3, 1, 1).unwrap();
    let p0 = Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)]);
    assert!(!lin_equiv(&e, &p0, &Divisor::zero()).unwrap().equivalent);
    // 3 P0 - 3 Pinf = div(x)
    assert!(lin_equiv(&e, &p0.scale(3), &Divisor::zero()).unwrap().equivalent);
}

#[test]
fn hom_spaces() {
    let c = curve(2, 1, 0).unwrap();
    // O(-1) on the line pulls back to O(-2 Pinf)
    let minus = pinf(-2);
    assert_eq!(hom_space(&c, &minus, &Divisor::zero()).unwrap().dim(), 3);
    let e = curve(3, 1, 1).unwrap();
    let d = Divisor::from_pairs([(Place::Zero(0), 1), (Place::One(0), -1)]);
    let h = hom_space(&e, &d, &d).unwrap();
    assert_eq!(h.dim(), 1);
    assert!(hom_space(&e, &Divisor::zero(), &pinf(-1)).unwrap().functions.is_empty());
}

fn places_of(c: &Curve, extra: &[(i64, i64)]) -> Vec<Place> {
    let mut ps = vec![Place::Infinity];
    ps.extend(c.places_over(&LinePoint::Zero).unwrap());
    ps.extend(c.places_over(&LinePoint::One).unwrap());
    for &(x, y) in extra {
        ps.push(c.finite_place(c.k(x), c.k(y)).unwrap());
    }
    ps
}

fn rr_identity_holds(c: &Curve, ps: &[Place], coeffs: &[i64]) {
    let d = Divisor::from_pairs(ps.iter().cloned().zip(coeffs.iter().copied()));
    let k = c.canonical_divisor();
    let lhs = ell(c, &d).unwrap() as i64 - ell(c, &(&k - &d)).unwrap() as i64;
    assert_eq!(lhs, d.degree() + 1 - c.genus() as i64, "{d:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn riemann_roch_genus_0(cs in proptest::collection::vec(-2i64..=3, 4)) {
        let c = curve(2, 1, 0).unwrap();
        rr_identity_holds(&c, &places_of(&c, &[(4, 2)]), &cs);
    }

    #[test]
    fn riemann_roch_genus_1(cs in proptest::collection::vec(-2i64..=3, 7)) {
        let c = curve(3, 1, 1).unwrap();
        let mut ps = places_of(&c, &[]);
        let z = c.tower().alpha();
        ps.push(c.finite_place(-z.clone(), c.k(-1)).unwrap());
        rr_identity_holds(&c, &ps, &cs);
    }
}

#[test]
fn generic_point_is_not_equivalent_to_infinity() {
    let k = generic_point_tower();
    let c = Curve::new(3, 1, 1, k.clone()).unwrap();
    let p = c.finite_place(k.t().unwrap(), k.u().unwrap()).unwrap();
    let d = Divisor::from_pairs([(p, 1), (Place::Infinity, -1)]);
    assert!(!lin_equiv(&c, &d, &Divisor::zero()).unwrap().equivalent);
    let d3 = Divisor::from_pairs([(Place::Infinity, 3)]);
    assert_eq!(ell(&c, &d3).unwrap(), 3);
}

#[test]
fn riemann_roch_genus_2() {
    let c = curve(5, 1, 1).unwrap();
    let ps = places_of(&c, &[]);
    for cs in [[0, 0, 0, 0], [1, 0, 0, 0], [3, 1, -1, 0], [-1, 2, 2, 1], [2, 2, 2, 2], [5, -1, 0, 1]] {
        rr_identity_holds(&c, &ps, &cs);
    }
}

#[test]
fn oracle_verdicts() {
    let k = generic_point_tower();
    let c = Curve::new(3, 1, 1, k.clone()).unwrap();
    let free = Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, -1)]);
    assert!(line_descent_oracle(&c, &free, DEFAULT_MAX_TAU).unwrap().descends());

    let p = c.finite_place(k.t().unwrap(), k.u().unwrap()).unwrap();
    let d = Divisor::from_pairs([(p.clone(), 1), (Place::Infinity, -1)]);
    match line_descent_oracle(&c, &d, DEFAULT_MAX_TAU).unwrap() {
        LineDescent::Fails(w) => {
            assert_eq!(w.ell, 0);
            assert!(w.tower.transcendental().is_some());
        }
        other => panic!("expected failure, got {other:?}"),
    }

    let mut orbit = Divisor::from_pairs([(Place::Infinity, -3)]);
    for i in 0..3 {
        orbit.add_at(c.translate_place(&p, i), 1);
    }
    match line_descent_oracle(&c, &orbit, DEFAULT_MAX_TAU).unwrap() {
        LineDescent::Descends { certificate, tau, tower, .. } => {
            let tau = tower.nf(tau.unwrap());
            let f = certificate.unwrap();
            // (x - tau) / (x - t) up to the orientation div(f) = D(tau) - D
            let expected =
                Function::from_x(Kx::new(c.x_minus(&tau).num().clone(), c.x_minus(&k.t().unwrap()).num().clone()), 3);
            // equal up to a constant factor
            assert!(f.coeffs()[1..].iter().all(|r| r.is_zero()));
            let (g, h) = (f.coeff(0), expected.coeff(0));
            assert_eq!(g.den(), h.den());
            assert_eq!(g.num().monic(), h.num().monic());
        }
        other => panic!("expected descent, got {other:?}"),
    }
}
