use super::*;
use crate::fixtures::{curve, generic_point_tower};

fn genus(n: u64, a: u64, b: u64) -> u64 {
    curve(n, a, b).unwrap().genus()
}

#[test]
fn genus_by_riemann_hurwitz() {
    assert_eq!(genus(2, 1, 0), 0);
    assert_eq!(genus(3, 1, 1), 1);
    assert_eq!(genus(5, 1, 1), 2);
    assert_eq!(genus(4, 2, 1), 1);
}

#[test]
fn rejects_bad_parameters() {
    assert!(curve(4, 2, 2).is_err());
    assert!(curve(6, 1, 1).is_err());
    // zeta_3 missing from Q
    assert!(Curve::new(3, 1, 1, FieldTower::rational()).is_err());
}

#[test]
fn fiber_sizes() {
    let c = curve(4, 2, 1).unwrap();
    let over0 = c.places_over(&LinePoint::Zero).unwrap();
    assert_eq!(over0.len(), 2);
    assert!(over0.iter().all(|p| c.ramification(p) == 2));
    let over1 = c.places_over(&LinePoint::One).unwrap();
    assert_eq!(over1.len(), 1);
    assert_eq!(c.ramification(&over1[0]), 4);
    let c2 = curve(2, 1, 0).unwrap();
    let fib = c2.places_over(&LinePoint::Value(c2.k(4))).unwrap();
    assert_eq!(fib.len(), 2);
    assert!(fib.contains(&Place::Finite { x: c2.k(4), y: c2.k(2) }));
    assert!(fib.contains(&Place::Finite { x: c2.k(4), y: c2.k(-2) }));
    assert!(c2.places_over(&LinePoint::Value(c2.k(0))).is_err());
}

#[test]
fn parametrizations_satisfy_equation() {
    for (n, a, b) in [(2, 1, 0), (3, 1, 1), (4, 2, 1), (5, 1, 1), (3, 2, 0)] {
        let c = curve(n, a, b).unwrap();
        let mut places = vec![Place::Infinity];
        places.extend(c.places_over(&LinePoint::Zero).unwrap());
        places.extend(c.places_over(&LinePoint::One).unwrap());
        for p in places {
            let prec = 20;
            let (x, y) = c.parametrization(&p, c.y_valuation(&p) + prec);
            let lhs = y.powi(n as i64).unwrap();
            let xm1 = x.clone() - Laurent::constant(FieldElem::one(), EXACT);
            let rhs = x.powi(a as i64).unwrap() * xm1.powi(b as i64).unwrap();
            let diff = lhs.clone() - rhs;
            assert!(diff.valuation().is_none(), "{n},{a},{b} at {p:?}");
            assert!(diff.prec() >= lhs.start() + prec);
        }
    }
}

#[test]
fn valuations_at_branch_places() {
    let c = curve(3, 1, 1).unwrap();
    let p0 = Place::Zero(0);
    assert_eq!(c.valuation(&c.x_function(), &p0).unwrap(), 3);
    assert_eq!(c.valuation(&c.y_function(), &p0).unwrap(), 1);
    let xm1 = c.x_function().sub(&c.one_fn());
    assert_eq!(c.valuation(&xm1, &Place::One(0)).unwrap(), 3);
    assert_eq!(c.valuation(&c.y_function(), &Place::Infinity).unwrap(), -2);
}

#[test]
fn translation_is_an_action() {
    let c = curve(3, 1, 1).unwrap();
    let p = c.finite_place(-c.tower().alpha(), c.k(-1)).unwrap();
    let d = Divisor::from_pairs([(p.clone(), 2), (Place::Zero(0), -1), (Place::Infinity, 1)]);
    for i in 0..3 {
        for j in 0..3 {
            let lhs = c.galois_translate(&c.galois_translate(&d, i), j);
            assert_eq!(lhs, c.galois_translate(&d, (i + j) % 3));
        }
    }
    assert_eq!(c.galois_translate(&d, 0), d);
    assert_ne!(c.galois_translate(&d, 1), d);
    let c2 = curve(2, 1, 0).unwrap();
    let q = Place::Finite { x: c2.k(4), y: c2.k(2) };
    let moved = c2.translate_place(&q, 1);
    assert_eq!(moved, Place::Finite { x: c2.k(4), y: c2.k(-2) });
}

#[test]
fn canonical_degrees() {
    for (n, a, b, g) in [(2, 1, 0, 0), (3, 1, 1, 1), (5, 1, 1, 2)] {
        let c = curve(n, a, b).unwrap();
        assert_eq!(c.canonical_divisor().degree(), 2 * g - 2);
    }
}

#[test]
fn products_add_valuations() {
    let c = curve(3, 1, 1).unwrap();
    let x = c.x_function();
    let y = c.y_function();
    let f = x.add(&y).add(&c.one_fn());
    let g = y.mul(&y, &c).sub(&x);
    let fg = f.mul(&g, &c);
    let p = c.finite_place(-c.tower().alpha(), c.k(-1)).unwrap();
    for place in [Place::Zero(0), Place::One(0), Place::Infinity, p] {
        let vf = c.valuation(&f, &place).unwrap();
        let vg = c.valuation(&g, &place).unwrap();
        assert_eq!(c.valuation(&fg, &place).unwrap(), vf + vg, "{place:?}");
    }
}

#[test]
fn generic_point_lies_on_curve() {
    let k = generic_point_tower();
    let c = Curve::new(3, 1, 1, k.clone()).unwrap();
    let p = c.finite_place(k.t().unwrap(), k.u().unwrap()).unwrap();
    assert_eq!(c.fiber_containing(&p).len(), 3);
    // x - t vanishes to order 1 at (t, u)
    let f = c.x_function().sub(&Function::constant(k.t().unwrap(), 3));
    assert_eq!(c.valuation(&f, &p).unwrap(), 1);
}
