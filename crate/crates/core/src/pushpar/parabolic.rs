use std::collections::BTreeMap;

use num_traits::Zero;

use super::fiber::{parabolic_filtration, FiberModel, PlaceFlag};
use super::sections::{compute_splitting_maps, SplittingMaps};
use super::SplitBundle;
use crate::curve::LinePoint;
use crate::error::{math, Error, Result};
use crate::field::{Matrix, Rat};
use crate::{FieldElem, FieldTower};

/// The parabolic structure over one branch value, with flags expressed in
/// the basis of the fiber given by the splitting sections.
#[derive(Clone, Debug)]
pub struct ParabolicFiber {
    pub base: LinePoint,
    pub model: FiberModel,
    /// Columns: the splitting sections in jet coordinates.
    pub frame: Matrix<FieldElem>,
    /// Flags in splitting coordinates, reduced row echelon form.
    pub flags: Vec<PlaceFlag>,
}

/// `W_* = f_* E` with its splitting and parabolic structure at `0, 1, inf`.
#[derive(Clone, Debug)]
pub struct ParabolicP1Bundle {
    pub splitting: Vec<i64>,
    pub maps: SplittingMaps,
    pub fibers: Vec<ParabolicFiber>,
}

pub const BRANCH_VALUES: [LinePoint; 3] = [LinePoint::Zero, LinePoint::One, LinePoint::Infinity];

/// Rewrites the row space of `rows` (jet coordinates) in the basis given by
/// the columns of `frame`.
fn to_frame(rows: &Matrix<FieldElem>, frame_inv: &Matrix<FieldElem>) -> Matrix<FieldElem> {
    frame_inv.mul(&rows.transpose()).transpose().rref()
}

pub fn assemble_parabolic(e: &SplitBundle, seed: u64) -> Result<ParabolicP1Bundle> {
    let maps = compute_splitting_maps(e, seed)?;
    assemble_with_maps(e, maps)
}

/// Assembles `W_*` for given splitting sections.
pub fn assemble_with_maps(e: &SplitBundle, maps: SplittingMaps) -> Result<ParabolicP1Bundle> {
    let mut fibers = Vec::new();
    for y in BRANCH_VALUES {
        let (model, flags) = parabolic_filtration(e, &y)?;
        let frame = maps.fiber_matrix(&model, e)?;
        let inv = frame
            .inverse()
            .ok_or_else(|| Error::Internal("splitting sections are dependent in a branch fiber".into()))?;
        let flags = flags
            .into_iter()
            .map(|f| PlaceFlag { subspaces: f.subspaces.iter().map(|s| to_frame(s, &inv)).collect(), ..f })
            .collect();
        fibers.push(ParabolicFiber { base: y, model, frame, flags });
    }
    let w = ParabolicP1Bundle { splitting: maps.splitting.clone(), maps, fibers };
    w.check_invariants(e.rank())?;
    Ok(w)
}

impl ParabolicP1Bundle {
    pub fn rank(&self) -> usize {
        self.splitting.len()
    }

    pub fn degree(&self) -> i64 {
        self.splitting.iter().sum()
    }

    pub fn fiber(&self, y: &LinePoint) -> Option<&ParabolicFiber> {
        self.fibers.iter().find(|f| &f.base == y)
    }

    /// Weights over `y` with their multiplicities.
    pub fn weight_multiset(&self, y: &LinePoint) -> BTreeMap<Rat, usize> {
        let mut out = BTreeMap::new();
        if let Some(f) = self.fiber(y) {
            for flag in &f.flags {
                for (k, w) in flag.weights.iter().enumerate() {
                    *out.entry(w.clone()).or_insert(0) += flag.dim(k) - flag.dim(k + 1);
                }
            }
        }
        out
    }

    /// Checks the structural invariants, naming the first one violated.
    pub fn check_invariants(&self, r: usize) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("parabolic invariant violated: {what}")));
        let total = self.rank();
        for fiber in &self.fibers {
            let mut union: Vec<Vec<FieldElem>> = Vec::new();
            for flag in &fiber.flags {
                let m = flag.ramification;
                if flag.subspaces.len() != m + 1 || flag.weights.len() != m {
                    return fail("flag length");
                }
                if flag.dim(0) != m * r {
                    return fail("dim V_x = m_x r");
                }
                if flag.dim(m) != 0 {
                    return fail("E(x, m_x) = 0");
                }
                for k in 0..m {
                    if flag.dim(k) <= flag.dim(k + 1) {
                        return fail("flags strictly decrease");
                    }
                    if flag.dim(k) - flag.dim(k + 1) != r {
                        return fail("weight multiplicity = rank E");
                    }
                    let w = &flag.weights[k];
                    if *w < Rat::zero() || *w >= Rat::from_integer(1.into()) {
                        return fail("weights lie in [0, 1)");
                    }
                    if k > 0 && flag.weights[k - 1] >= *w {
                        return fail("weights strictly increase");
                    }
                    if *w != Rat::new((k as i64).into(), (m as i64).into()) {
                        return fail("weight of E(x, k) is k / m_x");
                    }
                }
                for k in 0..m {
                    let lower = flag.subspaces[k + 1].to_rows();
                    let mut both = flag.subspaces[k].to_rows();
                    both.extend(lower);
                    if crate::field::matrix::rank_of(&both, total) != flag.dim(k) {
                        return fail("flags are nested");
                    }
                }
                union.extend(flag.subspaces[0].to_rows());
            }
            if crate::field::matrix::rank_of(&union, total) != total || union.len() != total {
                return fail("the V_x form a direct sum of the fiber");
            }
        }
        Ok(())
    }

    /// True iff every flag and every splitting section is defined over `F`.
    pub fn is_algebraic(&self, tower: &FieldTower) -> bool {
        let flags_ok = self.fibers.iter().all(|f| {
            f.flags.iter().all(|fl| fl.subspaces.iter().all(|s| s.entries().iter().all(|c| tower.is_algebraic(c))))
        });
        let sections_ok = self.maps.sections.iter().all(|s| {
            s.parts.iter().all(|f| {
                f.coeffs()
                    .iter()
                    .all(|r| r.num().coeffs().iter().chain(r.den().coeffs()).all(|c| tower.is_algebraic(c)))
            })
        });
        flags_ok && sections_ok
    }
}

/// Checks that `W_*` of a `t`-free bundle is defined over `F`: splitting
/// sections and all flags have constant coefficients.
pub fn verify_algebraic_direct_image(e: &SplitBundle, seed: u64) -> Result<bool> {
    if !e.is_t_free() {
        return math("verify_algebraic_direct_image needs a bundle whose divisors are free of the transcendental");
    }
    let w = assemble_parabolic(e, seed)?;
    Ok(w.is_algebraic(e.curve.tower()))
}
