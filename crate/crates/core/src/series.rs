//! Truncated Laurent series in one uniformizer with tracked absolute
//! precision.
//!
//! A series `s^v (c_0 + c_1 s + ...) + O(s^prec)` is stored from its first
//! nonzero known coefficient. A series with no nonzero known coefficient is
//! stored with `start == prec`: its valuation is only known to be `>= prec`.
//! Exact finite series use precision [`EXACT`]; coefficients past the stored
//! ones are zero.

use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{binomial, Rat, Scalar};

/// Precision of exact (finite) series.
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent<S> {
    start: i64,
    coeffs: Vec<S>,
    prec: i64,
}

impl<S: Scalar> Laurent<S> {
    /// Series with coefficients `coeffs[k]` at `s^(start + k)`, known up to `prec`.
    pub fn new(start: i64, coeffs: Vec<S>, prec: i64) -> Self {
        let mut coeffs = coeffs;
        let keep = (prec - start).max(0) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Laurent { start: prec, coeffs: Vec::new(), prec },
            Some(i) => {
                let mut c = coeffs.split_off(i);
                while c.last().is_some_and(|x| x.is_zero()) {
                    c.pop();
                }
                Laurent { start: start + i as i64, coeffs: c, prec }
            }
        }
    }

    pub fn zero(prec: i64) -> Self {
        Laurent { start: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(c: S, prec: i64) -> Self {
        Laurent::new(0, vec![c], prec)
    }

    pub fn monomial(c: S, k: i64, prec: i64) -> Self {
        Laurent::new(k, vec![c], prec)
    }

    /// Valuation, `None` when no known coefficient is nonzero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// A lower bound for the valuation.
    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of known coefficients from the valuation on.
    pub fn rel_prec(&self) -> i64 {
        self.prec - self.start
    }

    /// Coefficient of `s^k`; `k` must be below the precision.
    pub fn coeff(&self, k: i64) -> S {
        assert!(k < self.prec, "coefficient s^{k} beyond precision {}", self.prec);
        if k < self.start {
            S::zero()
        } else {
            self.coeffs.get((k - self.start) as usize).cloned().unwrap_or_else(S::zero)
        }
    }

    pub fn lead(&self) -> Option<S> {
        self.coeffs.first().cloned()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Laurent::new(self.start, self.coeffs.clone(), prec)
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent { start: self.start + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn scale(&self, c: &S) -> Self {
        Laurent::new(self.start, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(), self.prec)
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Laurent<T> {
        Laurent::new(self.start, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Multiplicative inverse; `None` when the leading coefficient is unknown.
    /// Exact series must be truncated first (see [`Laurent::inv_to`]).
    pub fn inv(&self) -> Option<Self> {
        assert!(self.rel_prec() < 1 << 20, "inverse of an exact series needs a precision");
        self.inv_to(self.rel_prec() as usize)
    }

    /// Inverse with at most `rel` known coefficients.
    pub fn inv_to(&self, rel: usize) -> Option<Self> {
        let a0 = self.lead()?;
        let b0 = a0.inv()?;
        let n = rel.min(self.rel_prec() as usize);
        let mut b: Vec<S> = Vec::with_capacity(n);
        b.push(b0.clone());
        for k in 1..n {
            let mut acc = S::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                let ai = &self.coeffs[i];
                if !ai.is_zero() {
                    acc = acc + ai.clone() * b[k - i].clone();
                }
            }
            b.push(-(b0.clone() * acc));
        }
        let start = -self.start;
        Some(Laurent::new(start, b, start + n as i64))
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Laurent::constant(S::one(), EXACT);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            k >>= 1;
            if k > 0 {
                b = b.clone() * b;
            }
        }
        Some(acc)
    }

    /// `(1 + z)^q` for `z` of positive valuation, as a series with the
    /// precision of `z`.
    pub fn binomial_series(q: &Rat, z: &Self) -> Self {
        let prec = z.prec.max(0);
        assert!(z.start >= 1, "binomial series needs a positive-valuation argument");
        let mut acc = Laurent::constant(S::one(), prec);
        let mut zk = Laurent::constant(S::one(), prec);
        let mut k = 1usize;
        loop {
            zk = zk * z.clone();
            if zk.start >= prec {
                break;
            }
            let c = S::from_rat(&binomial(q, k));
            acc = acc + zk.scale(&c);
            k += 1;
        }
        acc
    }

    /// Evaluates a polynomial (ascending coefficients) at `x`.
    pub fn eval_poly<T, F: Fn(&T) -> S>(coeffs: &[T], x: &Self, lift: F) -> Self {
        let mut acc = Laurent::zero(EXACT);
        for c in coeffs.iter().rev() {
            acc = acc * x.clone() + Laurent::constant(lift(c), EXACT);
        }
        acc
    }
}

impl<S: Scalar> Add for Laurent<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let start = self.start.min(rhs.start);
        if start >= prec {
            return Laurent::zero(prec);
        }
        let extent = |x: &Self| if x.coeffs.is_empty() { i64::MIN } else { x.start + x.coeffs.len() as i64 };
        let end = extent(&self).max(extent(&rhs));
        let n = (prec.min(end) - start).max(0) as usize;
        let mut v = vec![S::zero(); n];
        for (i, slot) in v.iter_mut().enumerate() {
            let k = start + i as i64;
            let a = if k >= self.start { self.coeffs.get((k - self.start) as usize) } else { None };
            let b = if k >= rhs.start { rhs.coeffs.get((k - rhs.start) as usize) } else { None };
            *slot = match (a, b) {
                (Some(x), Some(y)) => x.clone() + y.clone(),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => S::zero(),
            };
        }
        Laurent::new(start, v, prec)
    }
}

impl<S: Scalar> Neg for Laurent<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent { start: self.start, coeffs: self.coeffs.into_iter().map(|c| -c).collect(), prec: self.prec }
    }
}

impl<S: Scalar> Sub for Laurent<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Mul for Laurent<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let prec = (self.start.saturating_add(rhs.prec)).min(rhs.start.saturating_add(self.prec));
        let start = self.start.saturating_add(rhs.start);
        if start >= prec || self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Laurent::zero(prec);
        }
        let n = ((prec - start) as usize).min(self.coeffs.len() + rhs.coeffs.len() - 1);
        let mut v = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Laurent::new(start, v, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rat {
        Rat::from_i64(n)
    }

    fn ser(start: i64, v: &[i64], prec: i64) -> Laurent<Rat> {
        Laurent::new(start, v.iter().map(|&c| r(c)).collect(), prec)
    }

    #[test]
    fn inverse_of_one_minus_s() {
        let a = ser(0, &[1, -1], 6);
        let b = a.inv().unwrap();
        assert_eq!(b, ser(0, &[1, 1, 1, 1, 1, 1], 6));
        let c = ser(2, &[3], 5).inv().unwrap();
        assert_eq!(c.valuation(), Some(-2));
        assert_eq!(c.prec(), 1);
    }

    #[test]
    fn sqrt_series_squares_back() {
        let z = ser(1, &[1], 8);
        let h = Rat::new(1.into(), 2.into());
        let s = Laurent::binomial_series(&h, &z);
        let sq = s.clone() * s;
        assert_eq!(sq, ser(0, &[1, 1], 8));
    }

    #[test]
    fn cancellation_loses_valuation_only() {
        let a = ser(0, &[1, 2], 4);
        let d = a.clone() - a;
        assert_eq!(d.valuation(), None);
        assert_eq!(d.prec(), 4);
    }

    proptest! {
        #[test]
        fn valuation_is_additive(
            a in prop::collection::vec(-5i64..5, 1..6),
            b in prop::collection::vec(-5i64..5, 1..6),
            sa in -3i64..3, sb in -3i64..3,
        ) {
            let x = ser(sa, &a, sa + 8);
            let y = ser(sb, &b, sb + 8);
            let p = x.clone() * y.clone();
            if let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) {
                prop_assert_eq!(p.valuation(), Some(vx + vy));
                let q = p * y.inv().unwrap();
                prop_assert_eq!(q.valuation(), Some(vx));
                for k in q.start()..q.prec() {
                    prop_assert_eq!(q.coeff(k), x.coeff(k));
                }
            }
        }
    }
}
