//! Dense univariate polynomials over a [`Scalar`] field.
//!
//! Coefficients are stored in ascending degree order with no trailing
//! zeros; the zero polynomial has an empty coefficient vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate.
    pub fn x() -> Self {
        Poly::new(vec![S::zero(), S::one()])
    }

    pub fn monomial(c: S, deg: usize) -> Self {
        let mut v = vec![S::zero(); deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    /// `x - c`
    pub fn linear_root(c: S) -> Self {
        Poly::new(vec![-c, S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![S::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        self.scale(&inv)
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Evaluates at an element of an algebra over `S` given a coefficient map.
    pub fn eval_with<T, F>(&self, x: &T, lift: F) -> T
    where
        T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
        F: Fn(&S) -> T,
    {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + lift(c);
        }
        acc
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * S::from_i64(i as i64)).collect())
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * other.clone() + Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Euclidean division: `(q, r)` with `self = q * d + r`, `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.lead().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0 - q.clone() * s1.clone();
            s0 = std::mem::replace(&mut s1, s);
            let t = t0 - q * t1.clone();
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv().expect("nonzero lead");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Multiplicity of the root `c`.
    pub fn root_multiplicity(&self, c: &S) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::linear_root(c.clone());
        let mut p = self.clone();
        let mut m = 0;
        while let Some(q) = p.exact_div(&lin) {
            p = q;
            m += 1;
        }
        m
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) =
            if self.coeffs.len() >= rhs.coeffs.len() { (self.coeffs, rhs.coeffs) } else { (rhs.coeffs, self.coeffs) };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for Poly<S> {
    fn one() -> Self {
        Poly::one()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn p(v: &[i64]) -> Poly<Rat> {
        Poly::new(v.iter().map(|&c| Rat::from_i64(c)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = a.divrem(&p(&[-1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn xgcd_bezout() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, Poly::one());
        assert_eq!(s * a + t * b, g);
    }

    #[test]
    fn root_multiplicity_counts() {
        let a = p(&[-1, 1]).pow(3) * p(&[2, 1]);
        assert_eq!(a.root_multiplicity(&Rat::from_i64(1)), 3);
        assert_eq!(a.root_multiplicity(&Rat::from_i64(-2)), 1);
        assert_eq!(a.root_multiplicity(&Rat::from_i64(0)), 0);
    }

    #[test]
    fn compose_shift() {
        // (x+1)^2 composed from x^2 and x+1
        let sq = p(&[0, 0, 1]);
        assert_eq!(sq.compose(&p(&[1, 1])), p(&[1, 2, 1]));
    }
}
