//! Direct images `W = f_* E` of split bundles `E = O(D_1) + ... + O(D_r)`
//! and their parabolic structure over `0, 1, infinity`.

mod fiber;
mod parabolic;
mod sections;

pub use fiber::{
    fiber_decomposition, jet_subspace, parabolic_filtration, twisted_pushforward_image, FiberModel, PlaceFlag,
};
pub use parabolic::{
    assemble_parabolic, assemble_with_maps, verify_algebraic_direct_image, ParabolicFiber, ParabolicP1Bundle,
    BRANCH_VALUES,
};
pub use sections::{compute_splitting_maps, Section, SplittingMaps};

use crate::curve::{Curve, Divisor, Place};
use crate::error::{math, Error, Result};
use crate::rr::ell;

/// `O(D_1) + ... + O(D_r)` on the curve.
#[derive(Clone, Debug)]
pub struct SplitBundle {
    pub curve: Curve,
    pub divisors: Vec<Divisor>,
}

impl SplitBundle {
    pub fn new(curve: Curve, divisors: Vec<Divisor>) -> Result<Self> {
        if divisors.is_empty() {
            return math("a bundle needs at least one summand");
        }
        for d in &divisors {
            for p in d.support() {
                curve.check_place(p)?;
            }
        }
        Ok(SplitBundle { curve, divisors })
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn degree(&self) -> i64 {
        self.divisors.iter().map(Divisor::degree).sum()
    }

    /// True iff every place of every summand has coordinates in `F`.
    pub fn is_t_free(&self) -> bool {
        let tower = self.curve.tower();
        self.divisors.iter().all(|d| {
            d.support().all(|p| match p {
                Place::Finite { x, y } => tower.is_algebraic(x) && tower.is_algebraic(y),
                _ => true,
            })
        })
    }

    /// `E(m F_inf)`, the pullback twist by `O(m)`.
    pub fn twist(&self, m: i64) -> SplitBundle {
        let shift = self.curve.fiber_at_infinity().scale(m);
        SplitBundle { curve: self.curve.clone(), divisors: self.divisors.iter().map(|d| d + &shift).collect() }
    }

    /// `deg f_* E = deg E + r (1 - g) - r N`.
    pub fn expected_pushforward_degree(&self) -> i64 {
        let r = self.rank() as i64;
        let g = self.curve.genus() as i64;
        self.degree() + r * (1 - g) - r * self.curve.n() as i64
    }

    /// `h^0(f_* E (m)) = sum_i l(D_i + m F_inf)`.
    pub fn twist_h0(&self, m: i64) -> Result<usize> {
        let shift = self.curve.fiber_at_infinity().scale(m);
        let mut total = 0;
        for d in &self.divisors {
            total += ell(&self.curve, &(d + &shift))?;
        }
        Ok(total)
    }
}

/// The splitting type `m_1 >= ... >= m_{Nr}` of `f_* E`, read off from the
/// twist profile: `#{i : m_i >= -m} = h^0(W(m)) - h^0(W(m-1))`.
pub fn pushforward_splitting_type(e: &SplitBundle) -> Result<Vec<i64>> {
    let n = e.curve.n() as i64;
    let r = e.rank();
    // h^0 vanishes once every summand has negative degree and is given by
    // Riemann-Roch once every degree exceeds 2g - 2; all jumps lie between.
    let min_deg = e.divisors.iter().map(Divisor::degree).min().unwrap();
    let max_deg = e.divisors.iter().map(Divisor::degree).max().unwrap();
    let lo = (-max_deg).div_euclid(n) - 1;
    let hi = (2 * e.curve.genus() as i64 - 2 - min_deg).div_euclid(n) + 2;
    let mut prev_h = e.twist_h0(lo)?;
    if prev_h != 0 {
        return Err(Error::Internal("twist profile does not start at zero".into()));
    }
    let mut prev_count = 0usize;
    let mut out = Vec::new();
    for m in lo + 1..=hi {
        let h = e.twist_h0(m)?;
        let count = h.checked_sub(prev_h).ok_or_else(|| Error::Internal("twist profile decreased".into()))?;
        if count < prev_count {
            return Err(Error::Internal("jump counts decreased".into()));
        }
        for _ in prev_count..count {
            out.push(-m);
        }
        prev_h = h;
        prev_count = count;
    }
    if out.len() != r * n as usize {
        return Err(Error::Internal(format!("twist profile reached {} of {} summands", out.len(), r * n as usize)));
    }
    if out.iter().sum::<i64>() != e.expected_pushforward_degree() {
        return Err(Error::Internal("splitting type violates the degree formula".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
