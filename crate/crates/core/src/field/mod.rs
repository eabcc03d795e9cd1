//! Exact scalar fields.
//!
//! Every algebraic object in the crate is generic over [`Scalar`], an exact
//! field element with canonical representation.  The concrete towers used by
//! the geometry code are built by nesting the generic constructions:
//!
//! * [`Rat`]: the rationals,
//! * [`AlgExt<S>`]: a simple algebraic extension `S[z]/(g)`,
//! * [`RatFunc<S>`]: rational functions in one indeterminate over `S`.
//!
//! A number field is `AlgExt<Rat>` and the coefficient field of a curve is
//! `AlgExt<RatFunc<AlgExt<Rat>>>` (see [`tower`]).

pub mod algext;
pub mod factor;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod tower;

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use algext::AlgExt;
pub use matrix::Matrix;
pub use poly::Poly;
pub use ratfunc::RatFunc;

/// Arbitrary precision rational number.
pub type Rat = BigRational;

/// An exact field element with a canonical form.
///
/// Equality is structural equality of canonical forms, so `Eq`, `Ord` and
/// `Hash` are available and consistent with field equality.
pub trait Scalar:
    Clone
    + Debug
    + Eq
    + Ord
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    fn from_rat(q: &Rat) -> Self;

    /// Rough storage size, used to prefer small pivots.
    fn size(&self) -> u64 {
        1
    }

    /// Exact division; panics on a zero divisor.
    fn div(&self, rhs: &Self) -> Self {
        self.clone() * rhs.inv().expect("division by zero")
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().expect("negative power of zero").pow(e.unsigned_abs())
        }
    }
}

impl Scalar for Rat {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn from_rat(q: &Rat) -> Self {
        q.clone()
    }

    fn size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

/// Binomial coefficient `C(q, k)` for rational `q`.
pub fn binomial(q: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * (q - Rat::from_i64(i as i64)) / Rat::from_i64(i as i64 + 1);
    }
    acc
}

/// Reduced fraction string with positive denominator, e.g. `-3/4` or `5`.
pub fn rat_to_string(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_half() {
        // (1+z)^(1/2) = 1 + z/2 - z^2/8 + z^3/16 - ...
        let h = Rat::new(1.into(), 2.into());
        assert_eq!(binomial(&h, 0), Rat::one());
        assert_eq!(binomial(&h, 1), h);
        assert_eq!(binomial(&h, 2), Rat::new((-1).into(), 8.into()));
        assert_eq!(binomial(&h, 3), Rat::new(1.into(), 16.into()));
    }

    #[test]
    fn powi_negative() {
        let two = Rat::from_i64(2);
        assert_eq!(two.powi(-3), Rat::new(1.into(), 8.into()));
    }
}
