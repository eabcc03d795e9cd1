use std::ops::Range;

use num_traits::{One, Zero};

use super::sections::Section;
use super::SplitBundle;
use crate::curve::{Divisor, Function, Kx, LinePoint, Place};
use crate::error::{math, Error, Result};
use crate::field::{Matrix, Poly, Rat};
use crate::rr::rr_space;
use crate::FieldElem;

/// The fiber `(f_* E)_y = sum_x V_x` over a branch value `y` in jet
/// coordinates. Summand `i` is trivialized at `x` by `s^(-D_i(x))`; the basis
/// is ordered by place, then jet order `0 <= k < e_x`, then summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberModel {
    pub base: LinePoint,
    pub places: Vec<Place>,
    pub ramification: Vec<usize>,
    /// `D_i(x)` indexed by place, then summand.
    pub shifts: Vec<Vec<i64>>,
    pub rank: usize,
}

impl FiberModel {
    pub fn dim(&self) -> usize {
        self.ramification.iter().sum::<usize>() * self.rank
    }

    pub fn offset(&self, place: usize) -> usize {
        self.ramification[..place].iter().sum::<usize>() * self.rank
    }

    /// Coordinate of jet order `k` of summand `i` at the given place.
    pub fn index(&self, place: usize, k: usize, i: usize) -> usize {
        self.offset(place) + k * self.rank + i
    }

    /// The coordinates spanning `V_x`.
    pub fn block(&self, place: usize) -> Range<usize> {
        let o = self.offset(place);
        o..o + self.ramification[place] * self.rank
    }

    /// Jets of a local section `(f_0, ..., f_{r-1})` of `E` near the fiber,
    /// each `f_i` with `v_x(f_i) >= -D_i(x)`.
    pub fn local_jets(&self, e: &SplitBundle, parts: &[Function]) -> Result<Vec<FieldElem>> {
        let mut out = vec![FieldElem::zero(); self.dim()];
        for (pi, p) in self.places.iter().enumerate() {
            let m = self.ramification[pi];
            for (i, f) in parts.iter().enumerate() {
                let d = self.shifts[pi][i];
                let s = e.curve.expand_to(f, p, m as i64 - d)?;
                if s.valuation().is_some_and(|v| v < -d) {
                    return Err(Error::Internal(format!(
                        "not a local section of the summand at {}",
                        e.curve.format_place(p)
                    )));
                }
                for k in 0..m {
                    out[self.index(pi, k, i)] = s.coeff(k as i64 - d);
                }
            }
        }
        Ok(out)
    }

    /// The value at `y` of a splitting section, using the frame `1` of
    /// `O(m)` at finite `y` and `x^m` at infinity.
    pub fn jets(&self, e: &SplitBundle, s: &Section) -> Result<Vec<FieldElem>> {
        if self.base == LinePoint::Infinity {
            let xm = x_power(s.m);
            let parts: Vec<Function> = s.parts.iter().map(|f| f.scale_x(&xm)).collect();
            self.local_jets(e, &parts)
        } else {
            self.local_jets(e, &s.parts)
        }
    }
}

fn x_power(m: i64) -> Kx {
    let xm = Poly::monomial(FieldElem::one(), m.unsigned_abs() as usize);
    if m >= 0 {
        Kx::from_poly(xm)
    } else {
        Kx::new(Poly::one(), xm)
    }
}

fn check_base(y: &LinePoint) -> Result<()> {
    match y {
        LinePoint::Value(_) => math("parabolic structure lives over 0, 1 and infinity only"),
        _ => Ok(()),
    }
}

pub fn fiber_decomposition(e: &SplitBundle, y: &LinePoint) -> Result<FiberModel> {
    check_base(y)?;
    let places = e.curve.places_over(y)?;
    let ramification = places.iter().map(|p| e.curve.ramification(p) as usize).collect();
    let shifts = places.iter().map(|p| e.divisors.iter().map(|d| d.coeff(p)).collect()).collect();
    Ok(FiberModel { base: y.clone(), places, ramification, shifts, rank: e.rank() })
}

/// The jet filtration `E(x, 0) = V_x > E(x, 1) > ... > E(x, e_x) = 0` at one
/// place, with weight `k / e_x` on `E(x, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceFlag {
    pub place: Place,
    pub ramification: usize,
    /// Row bases of `E(x, k)` for `k = 0..=e_x`.
    pub subspaces: Vec<Matrix<FieldElem>>,
    pub weights: Vec<Rat>,
}

impl PlaceFlag {
    /// Dimension of `E(x, k)`.
    pub fn dim(&self, k: usize) -> usize {
        self.subspaces[k].nrows()
    }
}

/// `E(x, k)`: jets of order at least `k` at `x`.
pub fn jet_subspace(model: &FiberModel, place: usize, k: usize) -> Matrix<FieldElem> {
    let dim = model.dim();
    let mut rows = Vec::new();
    for kk in k..model.ramification[place] {
        for i in 0..model.rank {
            let mut v = vec![FieldElem::zero(); dim];
            v[model.index(place, kk, i)] = FieldElem::one();
            rows.push(v);
        }
    }
    Matrix::from_rows(dim, rows)
}

pub fn parabolic_filtration(e: &SplitBundle, y: &LinePoint) -> Result<(FiberModel, Vec<PlaceFlag>)> {
    let model = fiber_decomposition(e, y)?;
    let flags = model
        .places
        .iter()
        .enumerate()
        .map(|(pi, p)| {
            let m = model.ramification[pi];
            PlaceFlag {
                place: p.clone(),
                ramification: m,
                subspaces: (0..=m).map(|k| jet_subspace(&model, pi, k)).collect(),
                weights: (0..m).map(|k| Rat::new((k as i64).into(), (m as i64).into())).collect(),
            }
        })
        .collect();
    Ok((model, flags))
}

/// The image in `(f_* E)_y` of the fiber of
/// `f_*(E(-k x - sum_{z != x} e_z z))`, computed from global sections of a
/// twist far enough to be generated by them. The twist is taken away from
/// `y`, so the sections are local sections of the subsheaf near `y`.
pub fn twisted_pushforward_image(
    e: &SplitBundle,
    model: &FiberModel,
    place: usize,
    k: usize,
) -> Result<Matrix<FieldElem>> {
    let curve = &e.curve;
    let n = curve.n() as i64;
    let mut sub = Divisor::zero();
    for (pi, p) in model.places.iter().enumerate() {
        let depth = if pi == place { k } else { model.ramification[pi] };
        sub.add_at(p.clone(), -(depth as i64));
    }
    let away = match model.base {
        LinePoint::Infinity => {
            curve.places_over(&LinePoint::Zero)?.into_iter().map(|p| (p, curve.e0() as i64)).collect::<Vec<_>>()
        }
        _ => vec![(Place::Infinity, n)],
    };
    let g = curve.genus() as i64;
    let mut rows = Vec::new();
    for (i, d) in e.divisors.iter().enumerate() {
        let di = d + &sub;
        // f_* O(L) is generated by global sections once deg L - N > 2g - 2
        let twist = ((2 * g - 1 + n - di.degree()).max(0) + n - 1) / n;
        let t = Divisor::from_pairs(away.iter().map(|(p, c)| (p.clone(), c * twist)));
        let basis = rr_space(curve, &(&di + &t))?;
        for f in &basis.functions {
            let mut parts = vec![Function::zero(curve.n()); e.rank()];
            parts[i] = f.clone();
            rows.push(model.local_jets(e, &parts)?);
        }
    }
    Ok(Matrix::from_rows(model.dim(), rows).row_basis())
}
