use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{Curve, Divisor, Place};
use crate::error::{Error, Result};
use crate::field::{Poly, RatFunc};
use crate::series::{Laurent, EXACT};
use crate::FieldElem;

/// Rational functions in `x` over `K`.
pub type Kx = RatFunc<FieldElem>;

/// Largest working precision used by local expansions.
pub const MAX_WORKING_PRECISION: i64 = 1 << 10;

/// A rational function on the curve, `sum_{j<N} r_j(x) y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Function {
    coeffs: Vec<Kx>,
}

impl Function {
    pub fn new(mut coeffs: Vec<Kx>, n: u64) -> Self {
        assert!(coeffs.len() <= n as usize, "too many y-coefficients");
        coeffs.resize(n as usize, Kx::zero());
        Function { coeffs }
    }

    pub fn zero(n: u64) -> Self {
        Function::new(Vec::new(), n)
    }

    pub fn constant(c: FieldElem, n: u64) -> Self {
        Function::new(vec![Kx::constant(c)], n)
    }

    pub fn from_x(r: Kx, n: u64) -> Self {
        Function::new(vec![r], n)
    }

    /// `c x^k y^j` with `j < N`.
    pub fn monomial(c: FieldElem, k: usize, j: usize, n: u64) -> Self {
        let mut v = vec![Kx::zero(); j + 1];
        v[j] = Kx::from_poly(Poly::monomial(c, k));
        Function::new(v, n)
    }

    pub fn coeffs(&self) -> &[Kx] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Kx {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value when the function is constant.
    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.coeffs[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        self.coeffs[0].as_constant()
    }

    pub fn add(&self, other: &Self) -> Self {
        Function { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Function { coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let c = Kx::constant(c.clone());
        Function { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn scale_x(&self, r: &Kx) -> Self {
        Function { coeffs: self.coeffs.iter().map(|a| a.clone() * r.clone()).collect() }
    }

    /// Product, reduced with `y^N = x^a (x-1)^b`.
    pub fn mul(&self, other: &Self, curve: &Curve) -> Self {
        let n = self.coeffs.len();
        let h = Kx::from_poly(curve.h_poly());
        let mut out = vec![Kx::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut term = a.clone() * b.clone();
                let mut k = i + j;
                if k >= n {
                    k -= n;
                    term = term * h.clone();
                }
                out[k] = out[k].clone() + term;
            }
        }
        Function { coeffs: out }
    }

    pub fn map<F: Fn(&FieldElem) -> FieldElem>(&self, f: F) -> Self {
        Function { coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect() }
    }
}

impl Curve {
    /// `x^a (x-1)^b` as a polynomial over `K`.
    pub fn h_poly(&self) -> Poly<FieldElem> {
        let one = FieldElem::one();
        Poly::x().pow(self.a as u32) * Poly::new(vec![-one.clone(), one]).pow(self.b as u32)
    }

    pub fn x_function(&self) -> Function {
        Function::from_x(Kx::var(), self.n)
    }

    pub fn y_function(&self) -> Function {
        Function::monomial(FieldElem::one(), 0, 1, self.n)
    }

    /// Expansion of `f` at `p` with working relative precision `w` for the
    /// inexact factors.
    fn expand_working(&self, f: &Function, p: &Place, w: i64) -> Laurent<FieldElem> {
        let vy = self.y_valuation(p);
        let (x, y) = self.parametrization(p, vy + w);
        let mut total = Laurent::zero(EXACT);
        let mut ypow = Laurent::constant(FieldElem::one(), EXACT);
        for (j, r) in f.coeffs.iter().enumerate() {
            if j > 0 {
                ypow = ypow * y.clone();
            }
            if r.is_zero() {
                continue;
            }
            let num = Laurent::eval_poly(r.num().coeffs(), &x, |c| c.clone());
            let den = Laurent::eval_poly(r.den().coeffs(), &x, |c| c.clone());
            let inv = den.inv_to(w as usize).expect("denominator is a nonzero polynomial");
            total = total + num * inv * ypow.clone();
        }
        total
    }

    /// Expansion of `f` at `p` with at least `rel` coefficients known from its
    /// valuation on. The zero function expands to the exact zero series.
    pub fn expand(&self, f: &Function, p: &Place, rel: i64) -> Result<Laurent<FieldElem>> {
        if f.is_zero() {
            return Ok(Laurent::zero(EXACT));
        }
        let mut w = rel.max(2 * self.n as i64);
        loop {
            let s = self.expand_working(f, p, w);
            if let Some(v) = s.valuation() {
                if s.prec() - v >= rel {
                    return Ok(s.truncate(v + rel));
                }
            }
            if w >= MAX_WORKING_PRECISION {
                return Err(Error::Unsupported(format!(
                    "local expansion at {} exceeded {} coefficients",
                    self.format_place(p),
                    MAX_WORKING_PRECISION
                )));
            }
            w *= 2;
        }
    }

    /// Expansion of `f` at `p` known at least up to `s^abs` (exclusive).
    pub fn expand_to(&self, f: &Function, p: &Place, abs: i64) -> Result<Laurent<FieldElem>> {
        if f.is_zero() {
            return Ok(Laurent::zero(EXACT));
        }
        let mut w = 2 * self.n as i64;
        loop {
            let s = self.expand_working(f, p, w);
            if s.prec() >= abs {
                return Ok(s.truncate(abs));
            }
            if w >= MAX_WORKING_PRECISION {
                return Err(Error::Unsupported(format!(
                    "local expansion at {} exceeded {} coefficients",
                    self.format_place(p),
                    MAX_WORKING_PRECISION
                )));
            }
            w = (2 * w).max(abs - s.prec() + w);
        }
    }

    /// Valuation of a nonzero function at a place.
    pub fn valuation(&self, f: &Function, p: &Place) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::Math("the zero function has no valuation".into()));
        }
        let s = self.expand(f, p, 1)?;
        Ok(s.valuation().expect("nonzero expansion"))
    }

    /// True iff `div(f) + d >= 0`.
    ///
    /// Away from `x = 0, 1` and the `x`-values of `supp(d)` every place is
    /// unramified with a full fiber, and the `y^j`-coefficients of a function
    /// regular on such a fiber are regular there (the fiber values determine
    /// them through an invertible Vandermonde system). So it suffices to check that the
    /// coefficient denominators vanish only at those `x`-values and then test
    /// valuations on their fibers and at infinity.
    pub fn in_l_space(&self, f: &Function, d: &Divisor) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let mut fibers: BTreeSet<Place> = BTreeSet::new();
        let mut xs: Vec<FieldElem> = vec![FieldElem::zero(), FieldElem::one()];
        fibers.extend(self.fiber_containing(&Place::Zero(0)));
        fibers.extend(self.fiber_containing(&Place::One(0)));
        for p in d.support() {
            if *p == Place::Infinity {
                continue;
            }
            let c = self.x_value(p).unwrap();
            if !xs.contains(&c) {
                xs.push(c);
                fibers.extend(self.fiber_containing(p));
            }
        }
        for r in f.coeffs() {
            let mut den = r.den().clone();
            for c in &xs {
                let lin = Poly::linear_root(c.clone());
                while let Some(q) = den.exact_div(&lin) {
                    den = q;
                }
            }
            if !den.is_constant() {
                return Ok(false);
            }
        }
        fibers.insert(Place::Infinity);
        for p in &fibers {
            let bound = -d.coeff(p);
            let s = self.expand_to(f, p, bound)?;
            if s.valuation().is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The divisor of `f`, restricted to the places over the given
    /// `x`-values and infinity.
    pub fn divisor_on(&self, f: &Function, places: &[Place]) -> Result<Divisor> {
        let mut d = Divisor::zero();
        for p in places {
            d.add_at(p.clone(), self.valuation(f, p)?);
        }
        Ok(d)
    }

    pub fn one_fn(&self) -> Function {
        Function::constant(FieldElem::one(), self.n)
    }

    /// The function `(x - c)` as an element of `K(x)`.
    pub fn x_minus(&self, c: &FieldElem) -> Kx {
        Kx::from_poly(Poly::linear_root(c.clone()))
    }
}
