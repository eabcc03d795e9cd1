//! Rational functions in one indeterminate, kept as reduced fractions with a
//! monic denominator.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::algext::poly_size;
use super::{Poly, Rat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFunc<S> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFunc<S> {
    /// Builds `num/den` in canonical form. Panics on a zero denominator.
    pub fn new(num: Poly<S>, den: Poly<S>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
            }
        };
        let l = den.lead().inv().expect("nonzero lead");
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    /// `num/den` for coprime parts, only normalizing the denominator.
    fn from_coprime(num: Poly<S>, den: Poly<S>) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let l = den.lead().inv().expect("nonzero lead");
        if l.is_one() {
            return RatFunc { num, den };
        }
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: S) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The indeterminate.
    pub fn var() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<S> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Evaluation at `c`; `None` when `c` is a pole.
    pub fn eval(&self, c: &S) -> Option<S> {
        let d = self.den.eval(c);
        let n = self.num.eval(c);
        d.inv().map(|di| n * di)
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> RatFunc<T> {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
    }
}

impl<S: Scalar> Add for RatFunc<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.num.is_zero() {
            return rhs;
        }
        if rhs.num.is_zero() {
            return self;
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RatFunc::from_coprime(self.num + rhs.num, Poly::one());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_constant() {
            return RatFunc::from_coprime(self.num * rhs.den.clone() + rhs.num * self.den.clone(), self.den * rhs.den);
        }
        let b = self.den.exact_div(&g).expect("gcd divides");
        let d = rhs.den.exact_div(&g).expect("gcd divides");
        let t = self.num * d.clone() + rhs.num * b.clone();
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = t.gcd(&g);
        if g2.is_constant() {
            return RatFunc::from_coprime(t, b * rhs.den);
        }
        let t = t.exact_div(&g2).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g2).expect("gcd divides");
        RatFunc::from_coprime(t, b * d2)
    }
}

impl<S: Scalar> Neg for RatFunc<S> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<S: Scalar> Sub for RatFunc<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Mul for RatFunc<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RatFunc::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_coprime(self.num * rhs.num, self.den * rhs.den);
        }
        // cross-cancel before multiplying to keep degrees small
        let (n1, d2) = cancel(self.num, rhs.den);
        let (n2, d1) = cancel(rhs.num, self.den);
        RatFunc::from_coprime(n1 * n2, d1 * d2)
    }
}

fn cancel<S: Scalar>(a: Poly<S>, b: Poly<S>) -> (Poly<S>, Poly<S>) {
    if a.is_constant() || b.is_constant() {
        return (a, b);
    }
    let g = a.gcd(&b);
    if g.is_constant() {
        return (a, b);
    }
    (a.exact_div(&g).expect("gcd divides"), b.exact_div(&g).expect("gcd divides"))
}

impl<S: Scalar> Zero for RatFunc<S> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<S: Scalar> One for RatFunc<S> {
    fn one() -> Self {
        RatFunc::constant(S::one())
    }
}

impl<S: Scalar> Scalar for RatFunc<S> {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    fn from_i64(n: i64) -> Self {
        RatFunc::constant(S::from_i64(n))
    }

    fn size(&self) -> u64 {
        poly_size(&self.num) + poly_size(&self.den)
    }

    fn from_rat(q: &Rat) -> Self {
        RatFunc::constant(S::from_rat(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> Poly<Rat> {
        Poly::new(c.iter().map(|&v| Rat::from_i64(v)).collect())
    }

    fn frac() -> impl Strategy<Value = RatFunc<Rat>> {
        let coeffs = prop::collection::vec(-3i64..=3, 0..4);
        (coeffs.clone(), coeffs).prop_map(|(n, d)| {
            let den = poly(&d);
            RatFunc::new(poly(&n), if den.is_zero() { Poly::one() } else { den })
        })
    }

    proptest! {
        #[test]
        fn arithmetic_stays_canonical(a in frac(), b in frac()) {
            let sum = RatFunc::new(
                a.num().clone() * b.den().clone() + b.num().clone() * a.den().clone(),
                a.den().clone() * b.den().clone(),
            );
            prop_assert_eq!(a.clone() + b.clone(), sum);
            let prod = RatFunc::new(a.num().clone() * b.num().clone(), a.den().clone() * b.den().clone());
            prop_assert_eq!(a * b, prod);
        }
    }

    #[test]
    fn canonical_cancellation() {
        let t = RatFunc::<Rat>::var();
        let one = RatFunc::one();
        // (t^2 - 1)/(t - 1) = t + 1
        let a = (t.clone() * t.clone() - one.clone()) * (t.clone() - one.clone()).inv().unwrap();
        assert_eq!(a, t.clone() + one.clone());
        assert!(a.is_polynomial());
        // t/t = 1
        assert_eq!(t.clone() * t.inv().unwrap(), one);
    }

    #[test]
    fn eval_pole() {
        let t = RatFunc::<Rat>::var();
        let f = t.inv().unwrap();
        assert!(f.eval(&Rat::from_i64(0)).is_none());
        assert_eq!(f.eval(&Rat::from_i64(2)), Some(Rat::new(1.into(), 2.into())));
    }
}
