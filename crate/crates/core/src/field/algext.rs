//! Simple algebraic extensions `S[z]/(g(z))` with `g` monic irreducible.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Poly, Rat, Scalar};

/// Element of `S[z]/(g)`, stored as its reduced representative.
///
/// The modulus is carried alongside the value. Constants may be created
/// without a modulus (`Zero::zero`, `One::one`, [`AlgExt::from_base`]); the
/// modulus is picked up from the other operand during arithmetic.
#[derive(Clone)]
pub struct AlgExt<S> {
    value: Poly<S>,
    modulus: Option<Arc<Poly<S>>>,
}

impl<S: Scalar> AlgExt<S> {
    pub fn new(value: Poly<S>, modulus: &Arc<Poly<S>>) -> Self {
        let value = if value.deg() >= modulus.deg() { value.rem(modulus) } else { value };
        AlgExt { value, modulus: Some(Arc::clone(modulus)) }
    }

    pub fn generator(modulus: &Arc<Poly<S>>) -> Self {
        AlgExt::new(Poly::x(), modulus)
    }

    pub fn from_base(c: S) -> Self {
        AlgExt { value: Poly::constant(c), modulus: None }
    }

    pub fn with_modulus(mut self, modulus: &Arc<Poly<S>>) -> Self {
        if self.modulus.is_none() {
            self.modulus = Some(Arc::clone(modulus));
        }
        self
    }

    pub fn value(&self) -> &Poly<S> {
        &self.value
    }

    pub fn modulus(&self) -> Option<&Arc<Poly<S>>> {
        self.modulus.as_ref()
    }

    /// The element as a base-field scalar, if it lies there.
    pub fn as_base(&self) -> Option<S> {
        if self.value.is_constant() {
            Some(self.value.coeff(0))
        } else {
            None
        }
    }

    fn pick(a: &Option<Arc<Poly<S>>>, b: &Option<Arc<Poly<S>>>) -> Option<Arc<Poly<S>>> {
        a.clone().or_else(|| b.clone())
    }

    fn reduce(value: Poly<S>, modulus: Option<Arc<Poly<S>>>) -> Self {
        match &modulus {
            Some(m) if value.deg() >= m.deg() => AlgExt { value: value.rem(m), modulus },
            _ => AlgExt { value, modulus },
        }
    }
}

impl<S: Scalar> PartialEq for AlgExt<S> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<S: Scalar> Eq for AlgExt<S> {}

impl<S: Scalar> PartialOrd for AlgExt<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for AlgExt<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl<S: Scalar> Hash for AlgExt<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl<S: Scalar> fmt::Debug for AlgExt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgExt{:?}", self.value.coeffs())
    }
}

impl<S: Scalar> Add for AlgExt<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let m = Self::pick(&self.modulus, &rhs.modulus);
        AlgExt { value: self.value + rhs.value, modulus: m }
    }
}

impl<S: Scalar> Sub for AlgExt<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let m = Self::pick(&self.modulus, &rhs.modulus);
        AlgExt { value: self.value - rhs.value, modulus: m }
    }
}

impl<S: Scalar> Neg for AlgExt<S> {
    type Output = Self;
    fn neg(self) -> Self {
        AlgExt { value: -self.value, modulus: self.modulus }
    }
}

impl<S: Scalar> Mul for AlgExt<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let m = Self::pick(&self.modulus, &rhs.modulus);
        Self::reduce(self.value * rhs.value, m)
    }
}

impl<S: Scalar> Zero for AlgExt<S> {
    fn zero() -> Self {
        AlgExt { value: Poly::zero(), modulus: None }
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl<S: Scalar> One for AlgExt<S> {
    fn one() -> Self {
        AlgExt { value: Poly::one(), modulus: None }
    }
}

impl<S: Scalar> Scalar for AlgExt<S> {
    fn inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        if self.value.is_constant() {
            let c = self.value.coeff(0).inv()?;
            return Some(AlgExt { value: Poly::constant(c), modulus: self.modulus.clone() });
        }
        let m = self.modulus.as_ref().expect("non-constant extension element without modulus");
        let (g, s, _) = self.value.xgcd(m);
        // g = 1 whenever the modulus is irreducible
        if !g.is_constant() {
            return None;
        }
        Some(AlgExt::new(s, m))
    }

    fn from_i64(n: i64) -> Self {
        AlgExt::from_base(S::from_i64(n))
    }

    fn size(&self) -> u64 {
        poly_size(&self.value)
    }

    fn from_rat(q: &Rat) -> Self {
        AlgExt::from_base(S::from_rat(q))
    }
}

pub(crate) fn poly_size<S: Scalar>(p: &Poly<S>) -> u64 {
    p.coeffs().iter().map(|c| c.size() + 1).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpoly(v: &[i64]) -> Poly<Rat> {
        Poly::new(v.iter().map(|&c| Rat::from_i64(c)).collect())
    }

    #[test]
    fn gaussian_integers() {
        let m = Arc::new(qpoly(&[1, 0, 1]));
        let i = AlgExt::generator(&m);
        assert_eq!(i.clone() * i.clone(), -AlgExt::one());
        let z = AlgExt::<Rat>::one() + i.clone();
        let zi = z.inv().unwrap();
        assert_eq!(z * zi, AlgExt::one());
    }

    #[test]
    fn cube_root_of_unity() {
        let m = Arc::new(qpoly(&[1, 1, 1]));
        let w = AlgExt::generator(&m);
        assert_eq!(w.pow(3), AlgExt::one());
        assert_eq!(w.clone() * w.clone() + w + AlgExt::one(), AlgExt::zero());
    }
}
