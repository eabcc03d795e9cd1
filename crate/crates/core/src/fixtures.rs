//! Standard towers and curves used by the examples, tests and self test.

use num_traits::{One, Zero};

use crate::curve::Curve;
use crate::field::factor::cyclotomic;
use crate::field::{Poly, Rat, Scalar};
use crate::{FieldTower, Ft, Result};

/// `Q(zeta_n)` presented by the `n`-th cyclotomic polynomial (`Q` for `n <= 2`).
pub fn cyclotomic_field(n: u64) -> FieldTower {
    if n <= 2 {
        return FieldTower::rational();
    }
    FieldTower::number_field(cyclotomic(n)).expect("cyclotomic polynomials are irreducible")
}

/// `Q(zeta_3)(t)(u)` with `u^3 = t^2 - t`: the generic point `(t, u)` of the
/// curve `y^3 = x (x - 1)`.
pub fn generic_point_tower() -> FieldTower {
    let t = Ft::var();
    let ext = Poly::new(vec![t.clone() - t.clone() * t, Ft::zero(), Ft::zero(), Ft::one()]);
    FieldTower::new(cyclotomic(3), vec!["t".into()], Some(ext)).expect("valid tower")
}

/// `Q(zeta_n)(t)` with no algebraic generator.
pub fn transcendental_tower(n: u64) -> FieldTower {
    let base = if n <= 2 { Poly::x() } else { cyclotomic(n) };
    FieldTower::new(base, vec!["t".into()], None).expect("valid tower")
}

/// The curve `(N, a, b)` over `Q(zeta_N)`.
pub fn curve(n: u64, a: u64, b: u64) -> Result<Curve> {
    Curve::new(n, a, b, cyclotomic_field(n))
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::from_i64(p) / Rat::from_i64(q)
}

/// `Q(sqrt(-3), 12^(1/3))`, over which `y^3 = x (x - 1)` has places over
/// `x = 4` with three distinct Galois translates.
pub fn cube_root_field() -> FieldTower {
    let coeffs = [171, 216, 27, -24, 9, 0, 1];
    FieldTower::number_field(Poly::new(coeffs.iter().map(|&c| Rat::from_i64(c)).collect())).expect("irreducible sextic")
}

/// A place of `c` over `x = x0` with `y` in the constant field, if any.
pub fn rational_place_over(c: &Curve, x0: i64) -> Option<crate::curve::Place> {
    let k = c.tower();
    let rhs = k.as_nf(&c.rhs(&c.k(x0)))?;
    let root = k.nth_roots(&rhs, c.n()).ok()?.into_iter().next()?;
    c.finite_place(c.k(x0), k.nf(root)).ok()
}
