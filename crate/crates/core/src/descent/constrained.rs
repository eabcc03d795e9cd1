use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{Curve, Divisor, Function, LinePoint, Place};
use crate::error::{math, Error, Result};
use crate::field::matrix::rank_of;
use crate::field::{Matrix, Rat, Scalar};
use crate::pushpar::{assemble_parabolic, ParabolicP1Bundle, SplitBundle, BRANCH_VALUES};
use crate::rr::rr_space;
use crate::series::Laurent;
use crate::FieldElem;

/// Random attempts when choosing maps for a class matching.
pub const MATCH_ATTEMPTS: usize = 6;

/// The subsheaf structure at one place: a section `v(s) = sum v_k s^k` of the
/// ambient (in the pulled-back frame) belongs to the bundle iff
/// `v_{-j}` lies in `chain[j - 1]` for `1 <= j <= chain.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStructure {
    pub place: Place,
    /// Row bases of the nested subspaces for pole depths `1, 2, ...`.
    pub chain: Vec<Matrix<FieldElem>>,
}

impl LocalStructure {
    /// Linear conditions `a . v_{-j} = 0` for depth `j`.
    pub fn annihilator(&self, j: usize, rank: usize) -> Vec<Vec<FieldElem>> {
        let sub = &self.chain[j - 1];
        if sub.nrows() == 0 {
            return (0..rank)
                .map(|i| {
                    let mut v = vec![FieldElem::zero(); rank];
                    v[i] = FieldElem::one();
                    v
                })
                .collect();
        }
        sub.kernel()
    }

    pub fn condition_count(&self, rank: usize) -> usize {
        self.chain.iter().map(|s| rank - s.nrows()).sum()
    }

    /// A basis adapted to the chain, as `(vector, depth)`: the vectors of
    /// depth at least `j` span `chain[j - 1]`.
    pub fn adapted_basis(&self, rank: usize) -> Vec<(Vec<FieldElem>, usize)> {
        let mut out: Vec<(Vec<FieldElem>, usize)> = Vec::new();
        let mut current: Vec<Vec<FieldElem>> = Vec::new();
        let mut candidates: Vec<(Vec<Vec<FieldElem>>, usize)> =
            self.chain.iter().enumerate().rev().map(|(j, s)| (s.to_rows(), j + 1)).collect();
        let unit = (0..rank)
            .map(|i| {
                let mut v = vec![FieldElem::zero(); rank];
                v[i] = FieldElem::one();
                v
            })
            .collect();
        candidates.push((unit, 0));
        for (rows, depth) in candidates {
            for v in rows {
                current.push(v.clone());
                if rank_of(&current, rank) == current.len() {
                    out.push((v, depth));
                } else {
                    current.pop();
                }
            }
        }
        out
    }
}

/// A subsheaf of a split ambient bundle `sum O(A_i)` cut out by jet
/// conditions. Summand `i` carries the pulled-back frame of `O(m_i)`: the
/// function `1` at finite places and `x^{m_i}` at infinity.
#[derive(Clone, Debug)]
pub struct ConstrainedBundle {
    pub curve: Curve,
    pub ambient: SplitBundle,
    pub frame_degrees: Vec<i64>,
    pub local: Vec<LocalStructure>,
}

impl ConstrainedBundle {
    pub fn rank(&self) -> usize {
        self.ambient.rank()
    }

    /// `deg U = deg(ambient) - number of independent conditions`.
    pub fn degree(&self) -> i64 {
        let r = self.rank();
        self.ambient.degree() - self.local.iter().map(|l| l.condition_count(r) as i64).sum::<i64>()
    }

    /// Exponent shift turning the expansion of `h_i` into that of `h_i / frame_i`.
    fn frame_shift(&self, i: usize, p: &Place) -> i64 {
        match p {
            Place::Infinity => -(self.curve.n() as i64) * self.frame_degrees[i],
            _ => 0,
        }
    }

    fn structure_at(&self, p: &Place) -> Option<&LocalStructure> {
        self.local.iter().find(|l| &l.place == p)
    }
}

/// Maps `O(D) -> U`, each given by one function per ambient summand.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub divisor: Divisor,
    pub maps: Vec<Vec<Function>>,
    /// The value of each map in the fiber of `U` at infinity, in the adapted
    /// frame.
    pub fiber_values: Vec<Vec<FieldElem>>,
}

pub fn line_point_name(y: &LinePoint) -> &'static str {
    match y {
        LinePoint::Zero => "0",
        LinePoint::One => "1",
        LinePoint::Infinity => "infinity",
        LinePoint::Value(_) => "x",
    }
}

/// The subspace `F_w` of weight at least `w` in a fiber of `W_*`.
fn weight_subspace(w: &ParabolicP1Bundle, y: &LinePoint, weight: &Rat) -> Result<Matrix<FieldElem>> {
    let fiber = w.fiber(y).ok_or_else(|| Error::Internal("missing parabolic fiber".into()))?;
    let mut rows = Vec::new();
    for flag in &fiber.flags {
        let e = Rat::from_integer((flag.ramification as i64).into());
        let k = (weight.clone() * e).ceil().to_integer();
        let k: usize = k.try_into().map_err(|_| Error::Internal("weight index out of range".into()))?;
        rows.extend(flag.subspaces[k.min(flag.ramification)].to_rows());
    }
    Ok(Matrix::from_rows(w.rank(), rows).row_basis())
}

/// The underlying bundle of the parabolic pullback of `W_*` to `c`: the
/// ambient `f^*(sum O(m_i))(sum_P (e_P - 1) P)` with the condition that the
/// coefficient of `s^-j` at `P` lies in `F_{j / e_P}`.
pub fn parabolic_pullback(w: &ParabolicP1Bundle, c: &Curve) -> Result<ConstrainedBundle> {
    let n = c.n() as i64;
    let mut extra = Divisor::zero();
    let mut local = Vec::new();
    for y in BRANCH_VALUES {
        let fiber = w.fiber(&y).ok_or_else(|| Error::Internal("missing parabolic fiber".into()))?;
        for p in c.places_over(&y)? {
            let e = c.ramification(&p) as usize;
            for flag in &fiber.flags {
                for k in 0..flag.ramification {
                    let wt = Rat::new((k as i64).into(), (flag.ramification as i64).into());
                    if !(wt.clone() * Rat::from_integer((e as i64).into())).is_integer() {
                        return math(format!(
                            "weight {} over {} does not become integral at a place of multiplicity {e}",
                            crate::field::rat_to_string(&wt),
                            line_point_name(&y)
                        ));
                    }
                }
            }
            extra.add_at(p.clone(), e as i64 - 1);
            let mut chain = Vec::new();
            for j in 1..e {
                chain.push(weight_subspace(w, &y, &Rat::new((j as i64).into(), (e as i64).into()))?);
            }
            if !chain.is_empty() {
                local.push(LocalStructure { place: p, chain });
            }
        }
    }
    let divisors =
        w.splitting.iter().map(|&m| Divisor::from_pairs([(Place::Infinity, m * n)]) + extra.clone()).collect();
    let ambient = SplitBundle::new(c.clone(), divisors)?;
    Ok(ConstrainedBundle { curve: c.clone(), ambient, frame_degrees: w.splitting.clone(), local })
}

/// `Hom(O(D), U)`.
pub fn hom_into(u: &ConstrainedBundle, d: &Divisor) -> Result<HomSpace> {
    let c = &u.curve;
    let r = u.rank();
    let mut bases = Vec::with_capacity(r);
    let mut offsets = Vec::with_capacity(r);
    let mut width = 0;
    for a in &u.ambient.divisors {
        let b = rr_space(c, &(a - d))?;
        offsets.push(width);
        width += b.dim();
        bases.push(b);
    }
    // expansions[i][f][place]
    let mut places: Vec<Place> = u.local.iter().map(|l| l.place.clone()).collect();
    if !places.contains(&Place::Infinity) {
        places.push(Place::Infinity);
    }
    let mut expansions: Vec<Vec<BTreeMap<Place, Laurent<FieldElem>>>> = Vec::new();
    for (i, b) in bases.iter().enumerate() {
        let mut per_f = Vec::new();
        for f in &b.functions {
            let mut m = BTreeMap::new();
            for p in &places {
                let top = d.coeff(p) + u.frame_shift(i, p) + 1;
                m.insert(p.clone(), c.expand_to(f, p, top)?);
            }
            per_f.push(m);
        }
        expansions.push(per_f);
    }
    let coeff =
        |i: usize, f: usize, p: &Place, k: i64| -> FieldElem { expansions[i][f][p].coeff(k + u.frame_shift(i, p)) };
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for l in &u.local {
        let dp = d.coeff(&l.place);
        for j in 1..=l.chain.len() {
            for a in l.annihilator(j, r) {
                let mut row = vec![FieldElem::zero(); width];
                for (i, ai) in a.iter().enumerate() {
                    if ai.is_zero() {
                        continue;
                    }
                    for f in 0..bases[i].dim() {
                        row[offsets[i] + f] = ai.clone() * coeff(i, f, &l.place, dp - j as i64);
                    }
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::<FieldElem>::identity(width).to_rows()
    } else {
        Matrix::from_rows(width, rows).kernel()
    };
    let kernel = Matrix::from_rows(width, kernel).rref().to_rows();
    // fiber at infinity in the adapted frame
    let basis_inf: Vec<(Vec<FieldElem>, usize)> = match u.structure_at(&Place::Infinity) {
        Some(l) => l.adapted_basis(r),
        None => (0..r)
            .map(|i| {
                let mut v = vec![FieldElem::zero(); r];
                v[i] = FieldElem::one();
                (v, 0)
            })
            .collect(),
    };
    let frame = Matrix::from_cols(r, basis_inf.iter().map(|(v, _)| v.clone()).collect());
    let inv = frame.inverse().ok_or_else(|| Error::Internal("adapted basis is singular".into()))?;
    let dinf = d.coeff(&Place::Infinity);
    let mut maps = Vec::new();
    let mut fiber_values = Vec::new();
    for lam in &kernel {
        let mut parts = Vec::with_capacity(r);
        for (i, b) in bases.iter().enumerate() {
            let mut h = Function::zero(c.n());
            for (f, func) in b.functions.iter().enumerate() {
                let l = &lam[offsets[i] + f];
                if !l.is_zero() {
                    h = h.add(&func.scale(l));
                }
            }
            parts.push(h);
        }
        let mut value = vec![FieldElem::zero(); r];
        for (bi, (_, depth)) in basis_inf.iter().enumerate() {
            let mut acc = FieldElem::zero();
            for i in 0..r {
                let g = &inv[(bi, i)];
                if g.is_zero() {
                    continue;
                }
                let mut ci = FieldElem::zero();
                for f in 0..bases[i].dim() {
                    let l = &lam[offsets[i] + f];
                    if !l.is_zero() {
                        ci = ci + l.clone() * coeff(i, f, &Place::Infinity, dinf - *depth as i64);
                    }
                }
                acc = acc + g.clone() * ci;
            }
            value[bi] = acc;
        }
        maps.push(parts);
        fiber_values.push(value);
    }
    Ok(HomSpace { divisor: d.clone(), maps, fiber_values })
}

/// Outcome of matching `U` against candidate line bundles.
#[derive(Clone, Debug)]
pub struct ClassMatch {
    pub matched: bool,
    /// The candidates, in canonical order.
    pub classes: Vec<Divisor>,
    /// For a match: the chosen map `O(D) -> U` per class.
    pub maps: Vec<Vec<Function>>,
    pub failure: Option<String>,
}

/// Decides whether `U` is isomorphic to the sum of the candidate line
/// bundles. The certificate is a family of maps `O(D_k) -> U` whose values
/// span the fiber at infinity; with `deg U = sum deg D_k` the determinant is
/// a nonzero section of a degree zero line bundle, so the family is an
/// isomorphism.
pub fn class_decompose(u: &ConstrainedBundle, candidates: &[Divisor], seed: u64) -> Result<ClassMatch> {
    let r = u.rank();
    if candidates.len() != r {
        return math(format!("{} candidate classes for a bundle of rank {r}", candidates.len()));
    }
    let total: i64 = candidates.iter().map(Divisor::degree).sum();
    if total != u.degree() {
        return math(format!("candidate degrees add up to {total}, the bundle has degree {}", u.degree()));
    }
    let mut classes = candidates.to_vec();
    classes.sort();
    let mut homs: BTreeMap<Divisor, HomSpace> = BTreeMap::new();
    for d in &classes {
        if !homs.contains_key(d) {
            homs.insert(d.clone(), hom_into(u, d)?);
        }
    }
    let fail = |classes: Vec<Divisor>, why: String| ClassMatch {
        matched: false,
        classes,
        maps: Vec::new(),
        failure: Some(why),
    };
    for d in &classes {
        if homs[d].maps.is_empty() {
            return Ok(fail(classes.clone(), format!("Hom(O(D), U) = 0 for D of degree {}", d.degree())));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MATCH_ATTEMPTS {
        let mut choice: Vec<Vec<FieldElem>> = Vec::with_capacity(r);
        for d in &classes {
            let h = &homs[d];
            choice.push((0..h.maps.len()).map(|_| FieldElem::from_i64(rng.gen_range(-3..=3))).collect());
        }
        let values: Vec<Vec<FieldElem>> = classes
            .iter()
            .zip(&choice)
            .map(|(d, lam)| {
                let h = &homs[d];
                let mut v = vec![FieldElem::zero(); r];
                for (l, fv) in lam.iter().zip(&h.fiber_values) {
                    for (vi, x) in v.iter_mut().zip(fv) {
                        *vi = vi.clone() + l.clone() * x.clone();
                    }
                }
                v
            })
            .collect();
        if rank_of(&values, r) == r {
            let maps = classes
                .iter()
                .zip(&choice)
                .map(|(d, lam)| {
                    let h = &homs[d];
                    (0..r)
                        .map(|i| {
                            let mut f = Function::zero(u.curve.n());
                            for (l, m) in lam.iter().zip(&h.maps) {
                                if !l.is_zero() {
                                    f = f.add(&m[i].scale(l));
                                }
                            }
                            f
                        })
                        .collect()
                })
                .collect();
            return Ok(ClassMatch { matched: true, classes, maps, failure: None });
        }
    }
    Ok(fail(classes, "no family of maps spans the fiber at infinity".into()))
}

/// The candidates `{g^* D_i}` for `g` in the Galois group.
pub fn translate_candidates(c: &Curve, e: &SplitBundle, shifts: impl Iterator<Item = i64> + Clone) -> Vec<Divisor> {
    let mut out = Vec::new();
    for d in &e.divisors {
        for g in shifts.clone() {
            out.push(c.galois_translate(d, g));
        }
    }
    out
}

/// Checks `f^* (f_* E)_* = sum_g g^* E` by class matching.
pub fn verify_pullback_splits(e: &SplitBundle, seed: u64) -> Result<bool> {
    let c = &e.curve;
    let w = assemble_parabolic(e, seed)?;
    let u = parabolic_pullback(&w, c)?;
    let candidates = translate_candidates(c, e, 0..c.n() as i64);
    match class_decompose(&u, &candidates, seed) {
        Ok(m) => Ok(m.matched),
        Err(Error::Math(_)) => Ok(false),
        Err(other) => Err(other),
    }
}
