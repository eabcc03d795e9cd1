//! Riemann-Roch spaces `L(D) = { f : div(f) + D >= 0 }` by exact
//! interpolation.
//!
//! The integral closure of `K[x]` in the function field is free with basis
//!
//! ```text
//! y_j = y^j / (x^[ja/N] (x-1)^[jb/N]),   0 <= j < N.
//! ```
//!
//! For `f` in `L(D)` let `c` run over the `x`-values of the finite part of
//! `supp(D)` and put `Q = prod (x - c)^B_c` with
//! `B_c = max(0, max_{P over c} ceil(D(P) / e_P))`. Then `v_P(Q f) >= 0` at
//! every finite place, so `Q f` is integral and
//!
//! ```text
//! f = sum_j P_j(x) y_j / Q,   P_j in K[x].
//! ```
//!
//! At infinity `v(y_j) = -j(a+b) + N([ja/N] + [jb/N])`. With one place at
//! infinity (`gcd(N, a+b) = 1`) these are distinct mod `N`, and so are the
//! valuations of the nonzero summands, hence `v(f) >= -D(P_inf)` iff every
//! summand satisfies it:
//!
//! ```text
//! deg P_j <= floor((D(P_inf) + N deg Q + v(y_j)) / N).
//! ```
//!
//! The remaining conditions `v_P(f) >= -D(P)` for the places over each `c`
//! are linear in the coefficients of the `P_j`; `L(D)` is their kernel.

mod oracle;

pub use oracle::{line_descent_oracle, DescentWitness, LineDescent, DEFAULT_MAX_TAU};

use num_traits::{One, Zero};

use crate::curve::{Curve, Divisor, Function, Kx, Place};
use crate::error::{Error, Result};
use crate::field::{Matrix, Poly};
use crate::series::Laurent;
use crate::FieldElem;

/// The shape of the interpolation ansatz for a divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    /// `x`-values of the finite support with their exponents `B_c`.
    pub centers: Vec<(FieldElem, i64)>,
    /// Maximal degree of `P_j` (negative when `P_j = 0`).
    pub degrees: Vec<i64>,
    q: Poly<FieldElem>,
}

impl Ansatz {
    pub fn new(curve: &Curve, d: &Divisor) -> Self {
        let mut centers: Vec<(FieldElem, i64)> = Vec::new();
        for (p, c) in d.iter() {
            let Some(x0) = curve.x_value(p) else { continue };
            let e = curve.ramification(p) as i64;
            let need = (c.max(0) + e - 1) / e;
            match centers.iter_mut().find(|(v, _)| *v == x0) {
                Some(entry) => entry.1 = entry.1.max(need),
                None => centers.push((x0, need)),
            }
        }
        let mut q = Poly::one();
        for (c, b) in &centers {
            q = q * Poly::linear_root(c.clone()).pow(*b as u32);
        }
        let n = curve.n() as i64;
        let dinf = d.coeff(&Place::Infinity);
        let degrees = (0..curve.n())
            .map(|j| (dinf + n * q.deg() + integral_valuation_at_infinity(curve, j)).div_euclid(n))
            .collect();
        Ansatz { centers, degrees, q }
    }

    /// Number of unknown coefficients.
    pub fn len(&self) -> usize {
        self.degrees.iter().map(|&m| (m + 1).max(0) as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the coefficient of `x^k` in `P_j`.
    pub fn column(&self, j: usize, k: usize) -> Option<usize> {
        if k as i64 > self.degrees[j] {
            return None;
        }
        let before: usize = self.degrees[..j].iter().map(|&m| (m + 1).max(0) as usize).sum();
        Some(before + k)
    }

    /// `(j, k)` for every column, in order.
    pub fn columns(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.len());
        for (j, &m) in self.degrees.iter().enumerate() {
            for k in 0..=m.max(-1) {
                out.push((j, k as usize));
            }
        }
        out
    }

    /// `y_j / Q` as a function.
    pub fn base_function(&self, curve: &Curve, j: usize) -> Function {
        let (fa, fb) = floors(curve, j);
        let one = FieldElem::one();
        let den = self.q.clone() * Poly::x().pow(fa as u32) * Poly::new(vec![-one.clone(), one.clone()]).pow(fb as u32);
        let mut coeffs = vec![Kx::zero(); j + 1];
        coeffs[j] = Kx::new(Poly::one(), den);
        Function::new(coeffs, curve.n())
    }

    /// The function with the given coordinates.
    pub fn function(&self, curve: &Curve, coords: &[FieldElem]) -> Function {
        let mut out = Function::zero(curve.n());
        for (j, &m) in self.degrees.iter().enumerate() {
            if m < 0 {
                continue;
            }
            let cs: Vec<FieldElem> = (0..=m as usize).map(|k| coords[self.column(j, k).unwrap()].clone()).collect();
            let p = Poly::new(cs);
            if p.is_zero() {
                continue;
            }
            out = out.add(&self.base_function(curve, j).scale_x(&Kx::from_poly(p)));
        }
        out
    }
}

/// `([ja/N], [jb/N])`.
fn floors(curve: &Curve, j: usize) -> (u64, u64) {
    let j = j as u64;
    (j * curve.a() / curve.n(), j * curve.b() / curve.n())
}

/// Valuation of `y_j` at infinity.
pub fn integral_valuation_at_infinity(curve: &Curve, j: u64) -> i64 {
    let (fa, fb) = floors(curve, j as usize);
    let n = curve.n() as i64;
    -(j as i64) * (curve.a() + curve.b()) as i64 + n * (fa + fb) as i64
}

/// A basis of `L(D)` with coordinates in the interpolation ansatz.
#[derive(Clone, Debug)]
pub struct FunctionBasis {
    pub divisor: Divisor,
    pub ansatz: Ansatz,
    /// Basis vectors in reduced row echelon form, one per row.
    pub coords: Matrix<FieldElem>,
    pub functions: Vec<Function>,
}

impl FunctionBasis {
    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    /// Coordinates of `f` in this basis, `None` when `f` is not in `L(D)`.
    pub fn coordinates(&self, curve: &Curve, f: &Function) -> Option<Vec<FieldElem>> {
        let mut v = vec![FieldElem::zero(); self.ansatz.len()];
        for (j, r) in f.coeffs().iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let (fa, fb) = floors(curve, j);
            let one = FieldElem::one();
            let scale = Kx::from_poly(
                self.ansatz.q.clone() * Poly::x().pow(fa as u32) * Poly::new(vec![-one.clone(), one]).pow(fb as u32),
            );
            let p = r.clone() * scale;
            if !p.is_polynomial() || p.num().deg() > self.ansatz.degrees[j] {
                return None;
            }
            for (k, c) in p.num().coeffs().iter().enumerate() {
                v[self.ansatz.column(j, k)?] = c.clone();
            }
        }
        let (_, pivots) = self.coords.rref_with_pivots();
        let lam: Vec<FieldElem> = pivots.iter().map(|&p| v[p].clone()).collect();
        let mut back = vec![FieldElem::zero(); v.len()];
        for (l, row) in lam.iter().zip(self.coords.rows()) {
            for (b, x) in back.iter_mut().zip(row) {
                *b = b.clone() + l.clone() * x.clone();
            }
        }
        (back == v).then_some(lam)
    }
}

/// The linear conditions `v_P(f) >= -D(P)` over the centers of the ansatz.
pub fn constraint_matrix(curve: &Curve, d: &Divisor, ansatz: &Ansatz) -> Result<Matrix<FieldElem>> {
    let cols = ansatz.columns();
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for (c, _) in &ansatz.centers {
        let rep = d.support().find(|p| curve.x_value(p).as_ref() == Some(c)).expect("centers come from the support");
        for p in curve.fiber_containing(rep) {
            let bound = -d.coeff(&p);
            let (x, _) = curve.parametrization(&p, 0);
            let mut per_j: Vec<Laurent<FieldElem>> = Vec::with_capacity(ansatz.degrees.len());
            for (j, &m) in ansatz.degrees.iter().enumerate() {
                if m < 0 {
                    per_j.push(Laurent::zero(bound));
                } else {
                    per_j.push(curve.expand_to(&ansatz.base_function(curve, j), &p, bound)?);
                }
            }
            let lo = per_j.iter().filter_map(|s| s.valuation()).min();
            let Some(lo) = lo else { continue };
            if lo >= bound {
                continue;
            }
            let mut col_series: Vec<Laurent<FieldElem>> = Vec::with_capacity(cols.len());
            let mut xpow: Vec<Laurent<FieldElem>> = Vec::new();
            for &(j, k) in &cols {
                while xpow.len() <= k {
                    let next = match xpow.last() {
                        None => Laurent::constant(FieldElem::one(), crate::series::EXACT),
                        Some(prev) => prev.clone() * x.clone(),
                    };
                    xpow.push(next);
                }
                col_series.push((per_j[j].clone() * xpow[k].clone()).truncate(bound));
            }
            for m in lo..bound {
                rows.push(col_series.iter().map(|s| s.coeff(m)).collect());
            }
        }
    }
    Ok(Matrix::from_rows(cols.len(), rows))
}

/// A basis of `L(D)`.
pub fn rr_space(curve: &Curve, d: &Divisor) -> Result<FunctionBasis> {
    for p in d.support() {
        curve.check_place(p)?;
    }
    let ansatz = Ansatz::new(curve, d);
    let width = ansatz.len();
    if d.degree() < 0 || width == 0 {
        return Ok(FunctionBasis {
            divisor: d.clone(),
            ansatz,
            coords: Matrix::zeros(0, width),
            functions: Vec::new(),
        });
    }
    let cons = constraint_matrix(curve, d, &ansatz)?;
    crate::stats::record_rr(cons.nrows(), width);
    let kernel = cons.kernel();
    let coords = Matrix::from_rows(width, kernel).rref();
    let functions = coords.rows().map(|r| ansatz.function(curve, r)).collect();
    Ok(FunctionBasis { divisor: d.clone(), ansatz, coords, functions })
}

pub fn ell(curve: &Curve, d: &Divisor) -> Result<usize> {
    Ok(rr_space(curve, d)?.dim())
}

/// `Hom(O(D1), O(D2)) = L(D2 - D1)`.
pub fn hom_space(curve: &Curve, d1: &Divisor, d2: &Divisor) -> Result<FunctionBasis> {
    rr_space(curve, &(d2 - d1))
}

/// Outcome of a linear equivalence test.
#[derive(Clone, Debug)]
pub struct LinEquiv {
    pub equivalent: bool,
    /// `f` with `div(f) = D2 - D1`, leading coordinate 1.
    pub witness: Option<Function>,
}

/// Decides `D1 ~ D2`; a witness is verified before it is returned.
pub fn lin_equiv(curve: &Curve, d1: &Divisor, d2: &Divisor) -> Result<LinEquiv> {
    if d1.degree() != d2.degree() {
        return Ok(LinEquiv { equivalent: false, witness: None });
    }
    let diff = d1 - d2;
    let basis = rr_space(curve, &diff)?;
    match basis.dim() {
        0 => Ok(LinEquiv { equivalent: false, witness: None }),
        1 => {
            let f = basis.functions[0].clone();
            if !curve.in_l_space(&f, &diff)? {
                return Err(Error::Internal("linear equivalence witness failed verification".into()));
            }
            let mut places: Vec<Place> = d1.support().chain(d2.support()).cloned().collect();
            places.sort();
            places.dedup();
            for p in &places {
                if curve.valuation(&f, p)? != d2.coeff(p) - d1.coeff(p) {
                    return Err(Error::Internal("linear equivalence witness has the wrong divisor".into()));
                }
            }
            Ok(LinEquiv { equivalent: true, witness: Some(f) })
        }
        k => Err(Error::Internal(format!("a degree 0 divisor has l = {k}"))),
    }
}

#[cfg(test)]
mod tests;
