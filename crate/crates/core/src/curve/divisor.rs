use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use super::Place;

/// A finite formal sum of places with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Place, i64)>>(pairs: I) -> Self {
        let mut d = Divisor::zero();
        for (p, c) in pairs {
            d.add_at(p, c);
        }
        d
    }

    pub fn point(p: Place) -> Self {
        Divisor::from_pairs([(p, 1)])
    }

    pub fn add_at(&mut self, p: Place, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(p).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, c)| (p, *c))
    }

    pub fn scale(&self, k: i64) -> Self {
        Divisor::from_pairs(self.iter().map(|(p, c)| (p.clone(), c * k)))
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    pub fn map_places<F: Fn(&Place) -> Place>(&self, f: F) -> Self {
        Divisor::from_pairs(self.iter().map(|(p, c)| (f(p), c)))
    }
}

impl Add for Divisor {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (p, c) in rhs.terms {
            self.add_at(p, c);
        }
        self
    }
}

impl Neg for Divisor {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl Sub for Divisor {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'a> Add<&'a Divisor> for &'a Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        self.clone() + rhs.clone()
    }
}

impl<'a> Sub<&'a Divisor> for &'a Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self.clone() - rhs.clone()
    }
}
