//! The superelliptic cover `X: y^N = x^a (x-1)^b` with its projection
//! `f = x` to the line.
//!
//! Places are described by explicit local parametrizations in a uniformizer
//! `s`:
//!
//! * over `0`, index `k mod r0`: `x = g s^e0`, `y = z^k d s^(a/r0) (1 - g s^e0)^(b/N)`
//!   with `d^N = g^a (-1)^b`,
//! * over `1`, index `k mod r1`: `x = 1 + s^e1`, `y = z^k s^(b/r1) (1 + s^e1)^(a/N)`,
//! * at infinity: `x = s^-N`, `y = s^-(a+b) (1 - s^N)^(b/N)`,
//! * at a finite unramified place `(x0, y0)`:
//!   `x = x0 + s`, `y = y0 (1 + s/x0)^(a/N) (1 + s/(x0-1))^(b/N)`,
//!
//! where `z` is the chosen primitive `N`-th root of unity of `F`.

mod divisor;
mod function;

pub use divisor::Divisor;
pub use function::{Function, Kx};

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{math, Error, Result};
use crate::field::factor::Nf;
use crate::field::parse::format_elem;
use crate::field::{Rat, Scalar};
use crate::series::{Laurent, EXACT};
use crate::{FieldElem, FieldTower};

/// A place of the curve.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// The `k`-th place over `x = 0`.
    Zero(u64),
    /// The `k`-th place over `x = 1`.
    One(u64),
    Infinity,
    /// An unramified place with coordinates in `K`.
    Finite {
        x: FieldElem,
        y: FieldElem,
    },
}

/// A point of the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinePoint {
    Zero,
    One,
    Infinity,
    Value(FieldElem),
}

#[derive(Clone, Debug)]
pub struct Curve {
    n: u64,
    a: u64,
    b: u64,
    tower: FieldTower,
    zeta: FieldElem,
    r0: u64,
    r1: u64,
    genus: u64,
    gamma: FieldElem,
    delta: FieldElem,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.a, self.b) == (other.n, other.a, other.b) && self.tower == other.tower
    }
}

impl Eq for Curve {}

/// `sum_k C(q,k) c^k s^(e k)` with absolute precision `prec`.
fn binomial_monomial(q: &Rat, c: &FieldElem, e: i64, prec: i64) -> Laurent<FieldElem> {
    let mut coeffs = Vec::new();
    let mut ck = FieldElem::one();
    let mut k = 0usize;
    while (k as i64) * e < prec {
        if k > 0 {
            ck = ck * c.clone();
        }
        let bin = crate::field::binomial(q, k);
        let mut slot = vec![FieldElem::zero(); if k == 0 { 1 } else { e as usize }];
        *slot.last_mut().unwrap() = FieldElem::from_rat(&bin) * ck.clone();
        coeffs.extend(slot);
        k += 1;
        if c.is_zero() {
            break;
        }
    }
    Laurent::new(0, coeffs, prec.max(0))
}

impl Curve {
    /// Builds the curve `y^N = x^a (x-1)^b` over the tower.
    pub fn new(n: u64, a: u64, b: u64, tower: FieldTower) -> Result<Self> {
        if n < 2 {
            return math("N must be at least 2");
        }
        if a < 1 {
            return math("a must be at least 1");
        }
        if n.gcd(&a).gcd(&b) != 1 {
            return math(format!("gcd(N, a, b) = {} must be 1", n.gcd(&a).gcd(&b)));
        }
        let rinf = n.gcd(&(a + b));
        if rinf != 1 {
            return math(format!("gcd(N, a + b) = {rinf}: more than one place at infinity is not supported"));
        }
        let zeta_nf = tower.zeta(n)?;
        let zeta = tower.nf(zeta_nf);
        let r0 = n.gcd(&a);
        let r1 = n.gcd(&b);
        let (e0, e1) = (n / r0, n / r1);
        let twice = r0 * (e0 - 1) + r1 * (e1 - 1) + (n - 1);
        // 2g - 2 = -2N + sum (e - 1)
        let genus = (twice + 2 - 2 * n) / 2;
        debug_assert_eq!(twice + 2, 2 * n + 2 * genus);
        let (gamma, delta) = Self::choose_gamma_delta(&tower, n, a, b)?;
        Ok(Curve { n, a, b, zeta, r0, r1, genus, gamma: tower.nf(gamma), delta: tower.nf(delta), tower })
    }

    /// Finds `g, d` in `F` with `d^N = g^a (-1)^b`, trying `2N`-th roots of
    /// unity and small integers for `g`.
    fn choose_gamma_delta(tower: &FieldTower, n: u64, a: u64, b: u64) -> Result<(Nf, Nf)> {
        let zeta = tower.zeta(n)?;
        let mut gammas = vec![Nf::one(), -Nf::one()];
        for j in 1..n {
            for z in [zeta.pow(j), -zeta.pow(j)] {
                if !gammas.contains(&z) {
                    gammas.push(z);
                }
            }
        }
        for k in 2..=5 {
            gammas.push(Nf::from_i64(k));
            gammas.push(Nf::from_i64(-k));
        }
        let sign = if b.is_multiple_of(2) { Nf::one() } else { -Nf::one() };
        for g in gammas {
            let target = g.pow(a) * sign.clone();
            if let Some(d) = tower.nth_roots(&target, n)?.into_iter().next() {
                return Ok((g, d));
            }
        }
        math("no suitable local parametrization over x = 0 with constants in F; enlarge F")
    }

    /// The same curve over a larger tower, keeping the chosen constants so
    /// that branch place indices keep their meaning.
    pub fn base_change<E: Fn(&FieldElem) -> FieldElem>(&self, tower: FieldTower, embed: E) -> Curve {
        Curve { zeta: embed(&self.zeta), gamma: embed(&self.gamma), delta: embed(&self.delta), tower, ..self.clone() }
    }

    /// Maps a place along an embedding of the constants.
    pub fn map_place<E: Fn(&FieldElem) -> FieldElem>(p: &Place, embed: E) -> Place {
        match p {
            Place::Finite { x, y } => Place::Finite { x: embed(x), y: embed(y) },
            other => other.clone(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// The chosen primitive `N`-th root of unity.
    pub fn zeta(&self) -> &FieldElem {
        &self.zeta
    }

    /// Number of places over `0`.
    pub fn r0(&self) -> u64 {
        self.r0
    }

    /// Number of places over `1`.
    pub fn r1(&self) -> u64 {
        self.r1
    }

    pub fn e0(&self) -> u64 {
        self.n / self.r0
    }

    pub fn e1(&self) -> u64 {
        self.n / self.r1
    }

    /// `x^a (x-1)^b` at `x0`.
    pub fn rhs(&self, x0: &FieldElem) -> FieldElem {
        x0.pow(self.a) * (x0.clone() - FieldElem::one()).pow(self.b)
    }

    pub fn k(&self, n: i64) -> FieldElem {
        self.tower.int(n)
    }

    /// Validated finite place `(x0, y0)` with `x0` not in `{0, 1}`.
    pub fn finite_place(&self, x0: FieldElem, y0: FieldElem) -> Result<Place> {
        let x0 = self.tower.normalize(&x0);
        let y0 = self.tower.normalize(&y0);
        if x0.is_zero() || x0 == FieldElem::one() {
            return math("a finite place must not lie over 0 or 1; use a branch place");
        }
        if y0.pow(self.n) != self.rhs(&x0) {
            return math(format!(
                "({}, {}) does not lie on the curve",
                format_elem(&self.tower, &x0),
                format_elem(&self.tower, &y0)
            ));
        }
        Ok(Place::Finite { x: x0, y: y0 })
    }

    pub fn check_place(&self, p: &Place) -> Result<()> {
        match p {
            Place::Zero(k) if *k >= self.r0 => math(format!("branch index {k} over 0 out of range")),
            Place::One(k) if *k >= self.r1 => math(format!("branch index {k} over 1 out of range")),
            Place::Finite { x, y } => self.finite_place(x.clone(), y.clone()).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Ramification index (multiplicity of `f` at the place).
    pub fn ramification(&self, p: &Place) -> u64 {
        match p {
            Place::Zero(_) => self.e0(),
            Place::One(_) => self.e1(),
            Place::Infinity => self.n,
            Place::Finite { .. } => 1,
        }
    }

    /// Image of the place on the line.
    pub fn image(&self, p: &Place) -> LinePoint {
        match p {
            Place::Zero(_) => LinePoint::Zero,
            Place::One(_) => LinePoint::One,
            Place::Infinity => LinePoint::Infinity,
            Place::Finite { x, .. } => LinePoint::Value(x.clone()),
        }
    }

    /// `x(P)` for places not at infinity.
    pub fn x_value(&self, p: &Place) -> Option<FieldElem> {
        match p {
            Place::Zero(_) => Some(FieldElem::zero()),
            Place::One(_) => Some(FieldElem::one()),
            Place::Infinity => None,
            Place::Finite { x, .. } => Some(x.clone()),
        }
    }

    /// The fiber of `f` over a point of the line.
    pub fn places_over(&self, y: &LinePoint) -> Result<Vec<Place>> {
        match y {
            LinePoint::Zero => Ok((0..self.r0).map(Place::Zero).collect()),
            LinePoint::One => Ok((0..self.r1).map(Place::One).collect()),
            LinePoint::Infinity => Ok(vec![Place::Infinity]),
            LinePoint::Value(c) => {
                let c = self.tower.normalize(c);
                if c.is_zero() || c == FieldElem::one() {
                    return math("a branch value was passed as a generic point");
                }
                let rhs = self.rhs(&c);
                let Some(v) = self.tower.as_nf(&rhs) else {
                    return Err(Error::Unsupported(
                        "fibers over non-constant points need an explicit y-coordinate".into(),
                    ));
                };
                let Some(y0) = self.tower.nth_roots(&v, self.n)?.into_iter().next() else {
                    return math(format!(
                        "the fiber over x = {} is not rational over F; enlarge F",
                        format_elem(&self.tower, &c)
                    ));
                };
                Ok(self.fiber_of(&c, &self.tower.nf(y0)))
            }
        }
    }

    /// The fiber `{(x0, z^k y0)}` containing a finite place.
    pub fn fiber_of(&self, x0: &FieldElem, y0: &FieldElem) -> Vec<Place> {
        let mut out: Vec<Place> =
            (0..self.n).map(|k| Place::Finite { x: x0.clone(), y: self.zeta.pow(k) * y0.clone() }).collect();
        out.sort();
        out
    }

    /// All places over the image of `p`.
    pub fn fiber_containing(&self, p: &Place) -> Vec<Place> {
        match p {
            Place::Finite { x, y } => self.fiber_of(x, y),
            other => self.places_over(&self.image(other)).expect("branch fibers always exist"),
        }
    }

    /// Image of a place under `y -> z^-i y`.
    pub fn translate_place(&self, p: &Place, i: i64) -> Place {
        let n = self.n as i64;
        match p {
            Place::Zero(k) => Place::Zero((*k as i64 - i).rem_euclid(self.r0 as i64) as u64),
            Place::One(k) => Place::One((*k as i64 - i).rem_euclid(self.r1 as i64) as u64),
            Place::Infinity => Place::Infinity,
            Place::Finite { x, y } => {
                let e = (-i).rem_euclid(n) as u64;
                Place::Finite { x: x.clone(), y: self.zeta.pow(e) * y.clone() }
            }
        }
    }

    pub fn galois_translate(&self, d: &Divisor, i: i64) -> Divisor {
        d.map_places(|p| self.translate_place(p, i))
    }

    pub fn canonical_divisor(&self) -> Divisor {
        let mut d = Divisor::zero();
        d.add_at(Place::Infinity, -2 * self.n as i64 + (self.n as i64 - 1));
        for k in 0..self.r0 {
            d.add_at(Place::Zero(k), self.e0() as i64 - 1);
        }
        for k in 0..self.r1 {
            d.add_at(Place::One(k), self.e1() as i64 - 1);
        }
        d
    }

    /// `f^* (infinity) = N P_inf`.
    pub fn fiber_at_infinity(&self) -> Divisor {
        Divisor::from_pairs([(Place::Infinity, self.n as i64)])
    }

    /// Valuation of `y` at the place.
    pub fn y_valuation(&self, p: &Place) -> i64 {
        match p {
            Place::Zero(_) => (self.a / self.r0) as i64,
            Place::One(_) => (self.b / self.r1) as i64,
            Place::Infinity => -((self.a + self.b) as i64),
            Place::Finite { .. } => 0,
        }
    }

    /// Valuation of `x - x(P)` (of `x` at infinity).
    pub fn x_valuation(&self, p: &Place) -> i64 {
        match p {
            Place::Infinity => -(self.n as i64),
            other => self.ramification(other) as i64,
        }
    }

    /// Local parametrization `(x(s), y(s))`; `x` is exact, `y` is known to
    /// absolute precision `prec`.
    pub fn parametrization(&self, p: &Place, prec: i64) -> (Laurent<FieldElem>, Laurent<FieldElem>) {
        let n = self.n as i64;
        let qa = Rat::new((self.a as i64).into(), n.into());
        let qb = Rat::new((self.b as i64).into(), n.into());
        let one = FieldElem::one();
        match p {
            Place::Zero(k) => {
                let e0 = self.e0() as i64;
                let ap = (self.a / self.r0) as i64;
                let x = Laurent::monomial(self.gamma.clone(), e0, EXACT);
                let c = self.zeta.pow(*k) * self.delta.clone();
                let u = binomial_monomial(&qb, &(-self.gamma.clone()), e0, prec - ap);
                (x, u.shift(ap).scale(&c))
            }
            Place::One(k) => {
                let e1 = self.e1() as i64;
                let bp = (self.b / self.r1) as i64;
                let x = Laurent::new(0, vec![one.clone()], EXACT) + Laurent::monomial(one.clone(), e1, EXACT);
                let u = binomial_monomial(&qa, &one, e1, prec - bp);
                (x, u.shift(bp).scale(&self.zeta.pow(*k)))
            }
            Place::Infinity => {
                let ab = (self.a + self.b) as i64;
                let x = Laurent::monomial(one.clone(), -n, EXACT);
                let u = binomial_monomial(&qb, &(-one), n, prec + ab);
                (x, u.shift(-ab))
            }
            Place::Finite { x: x0, y: y0 } => {
                let x = Laurent::new(0, vec![x0.clone(), one.clone()], EXACT);
                let ia = x0.inv().expect("x0 nonzero");
                let mut u = binomial_monomial(&qa, &ia, 1, prec);
                if self.b > 0 {
                    let ib = (x0.clone() - one).inv().expect("x0 != 1");
                    u = u * binomial_monomial(&qb, &ib, 1, prec);
                }
                (x, u.scale(y0))
            }
        }
    }

    pub fn format_place(&self, p: &Place) -> String {
        match p {
            Place::Zero(k) => format!("P0[{k}]"),
            Place::One(k) => format!("P1[{k}]"),
            Place::Infinity => "Pinf".into(),
            Place::Finite { x, y } => format!("({}, {})", format_elem(&self.tower, x), format_elem(&self.tower, y)),
        }
    }
}

fn wrap(s: String) -> String {
    if s.trim_start_matches('-').contains(['+', '-', '/']) {
        format!("({s})")
    } else {
        s
    }
}

impl Curve {
    /// A polynomial in `x` over `K`, highest power first.
    pub fn format_x_poly(&self, p: &crate::field::Poly<FieldElem>) -> String {
        let mut terms = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = format_elem(&self.tower, c);
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            terms.push(match (coeff.as_str(), mono.is_empty()) {
                (_, true) => wrap(coeff),
                ("1", false) => mono,
                ("-1", false) => format!("-{mono}"),
                _ => format!("{}*{mono}", wrap(coeff)),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        }
    }

    /// `sum_j r_j(x) y^j` with each `r_j` as `(num)/(den)`.
    pub fn format_function(&self, f: &Function) -> String {
        let mut terms = Vec::new();
        for (j, r) in f.coeffs().iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let y = match j {
                0 => String::new(),
                1 => "y".to_string(),
                _ => format!("y^{j}"),
            };
            if j > 0 && r.is_one() {
                terms.push(y);
                continue;
            }
            let mut t = wrap(self.format_x_poly(r.num()));
            if !r.den().is_one() {
                t = format!("{t}/({})", self.format_x_poly(r.den()));
            }
            if j > 0 {
                t = format!("{t}*{y}");
            }
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^{} = x^{} (x - 1)^{}", self.n, self.a, self.b)
    }
}

#[cfg(test)]
mod tests;
