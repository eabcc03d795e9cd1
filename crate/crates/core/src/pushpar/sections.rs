use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fiber::{fiber_decomposition, FiberModel};
use super::{pushforward_splitting_type, SplitBundle};
use crate::curve::{Function, LinePoint};
use crate::error::{Error, Result};
use crate::field::matrix::rank_of;
use crate::field::{Matrix, Scalar};
use crate::rr::{rr_space, FunctionBasis};
use crate::FieldElem;

/// Random attempts per block before falling back to a deterministic search.
pub const SPLITTING_RETRIES: usize = 8;

/// A global section of `f_* E (-m)`: one function in `L(D_j - m F_inf)` per
/// summand. It spans a summand `O(m)` of `f_* E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub m: i64,
    pub parts: Vec<Function>,
}

/// Sections realizing `O(m_1) + ... + O(m_{Nr}) = f_* E`.
#[derive(Clone, Debug)]
pub struct SplittingMaps {
    pub splitting: Vec<i64>,
    pub sections: Vec<Section>,
}

/// `H^0(f_* E (-m))` with coordinates in the interpolation ansatz of each
/// summand, concatenated.
struct Level {
    bases: Vec<FunctionBasis>,
    offsets: Vec<usize>,
    width: usize,
}

impl Level {
    fn new(e: &SplitBundle, m: i64) -> Result<Level> {
        let shift = e.curve.fiber_at_infinity().scale(-m);
        let mut bases = Vec::new();
        let mut offsets = Vec::new();
        let mut width = 0;
        for d in &e.divisors {
            let b = rr_space(&e.curve, &(d + &shift))?;
            offsets.push(width);
            width += b.ansatz.len();
            bases.push(b);
        }
        Ok(Level { bases, offsets, width })
    }

    fn basis_rows(&self) -> Vec<Vec<FieldElem>> {
        let mut rows = Vec::new();
        for (b, &off) in self.bases.iter().zip(&self.offsets) {
            for r in b.coords.rows() {
                let mut v = vec![FieldElem::zero(); self.width];
                v[off..off + r.len()].clone_from_slice(r);
                rows.push(v);
            }
        }
        rows
    }

    /// Coordinates of `x^e s` for `s` given at a level `e` steps above.
    fn lift(&self, upper: &Level, coords: &[FieldElem], e: usize) -> Vec<FieldElem> {
        let mut v = vec![FieldElem::zero(); self.width];
        for (j, (b, up)) in self.bases.iter().zip(&upper.bases).enumerate() {
            for (col, (jj, k)) in up.ansatz.columns().into_iter().enumerate() {
                let c = &coords[upper.offsets[j] + col];
                if c.is_zero() {
                    continue;
                }
                let target = b.ansatz.column(jj, k + e).expect("ansatz degrees grow with the twist");
                v[self.offsets[j] + target] = c.clone();
            }
        }
        v
    }

    fn section(&self, e: &SplitBundle, m: i64, coords: &[FieldElem]) -> Section {
        let parts = self
            .bases
            .iter()
            .zip(&self.offsets)
            .map(|(b, &off)| b.ansatz.function(&e.curve, &coords[off..off + b.ansatz.len()]))
            .collect();
        Section { m, parts }
    }
}

/// Chooses `k` vectors in the span of `basis` independent modulo `fixed`.
fn complement(
    fixed: &[Vec<FieldElem>],
    basis: &[Vec<FieldElem>],
    k: usize,
    width: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<FieldElem>>> {
    let target = rank_of(fixed, width) + k;
    for _ in 0..SPLITTING_RETRIES {
        let picks: Vec<Vec<FieldElem>> = (0..k)
            .map(|_| {
                let mut v = vec![FieldElem::zero(); width];
                for b in basis {
                    let c = FieldElem::from_i64(rng.gen_range(-2..=2));
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = vi.clone() + c.clone() * bi.clone();
                    }
                }
                v
            })
            .collect();
        let mut all = fixed.to_vec();
        all.extend(picks.iter().cloned());
        if rank_of(&all, width) == target {
            return Some(picks);
        }
    }
    let mut all = fixed.to_vec();
    let mut picks = Vec::new();
    for b in basis {
        if picks.len() == k {
            break;
        }
        all.push(b.clone());
        if rank_of(&all, width) == rank_of(fixed, width) + picks.len() + 1 {
            picks.push(b.clone());
        } else {
            all.pop();
        }
    }
    (picks.len() == k).then_some(picks)
}

/// Sections spanning the summands of `f_* E`, chosen from the largest `m_i`
/// down: at each level the new sections complete the image of the summands
/// already chosen (multiplied by `1, x, ..., x^(m_k - m)`) to all of
/// `H^0(f_* E (-m))`. At the smallest level the sections then generate every
/// fiber, so the map is an isomorphism; this is also checked on the fiber
/// over infinity.
pub fn compute_splitting_maps(e: &SplitBundle, seed: u64) -> Result<SplittingMaps> {
    let splitting = pushforward_splitting_type(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<(i64, usize)> = Vec::new();
    for &m in &splitting {
        match values.last_mut() {
            Some((v, c)) if *v == m => *c += 1,
            _ => values.push((m, 1)),
        }
    }
    let mut chosen: Vec<(i64, usize, Vec<FieldElem>)> = Vec::new();
    let mut levels: Vec<(i64, Level)> = Vec::new();
    let mut sections = Vec::new();
    for &(m, k) in &values {
        let level = Level::new(e, m)?;
        let mut fixed = Vec::new();
        for (ms, li, coords) in &chosen {
            let upper = &levels[*li].1;
            for ex in 0..=(ms - m) as usize {
                fixed.push(level.lift(upper, coords, ex));
            }
        }
        let basis = level.basis_rows();
        if rank_of(&fixed, level.width) != fixed.len() || basis.len() != fixed.len() + k {
            return Err(Error::Internal(format!("section spaces at level {m} have unexpected dimensions")));
        }
        let picks = complement(&fixed, &basis, k, level.width, &mut rng)
            .ok_or_else(|| Error::Internal(format!("no complement of the right size at level {m}")))?;
        for p in picks {
            sections.push(level.section(e, m, &p));
            chosen.push((m, levels.len(), p));
        }
        levels.push((m, level));
    }
    let maps = SplittingMaps { splitting, sections };
    maps.check(e)?;
    Ok(maps)
}

impl SplittingMaps {
    /// Builds maps from given sections, rejecting families that do not
    /// split `f_* E`.
    pub fn from_sections(e: &SplitBundle, sections: Vec<Section>) -> Result<Self> {
        for s in &sections {
            if s.parts.len() != e.rank() {
                return Err(Error::Math("a section needs one function per summand".into()));
            }
            let shift = e.curve.fiber_at_infinity().scale(-s.m);
            for (f, d) in s.parts.iter().zip(&e.divisors) {
                if !e.curve.in_l_space(f, &(d + &shift))? {
                    return Err(Error::Math(format!("a section of degree {} has too many poles", s.m)));
                }
            }
        }
        let splitting = sections.iter().map(|s| s.m).collect();
        let maps = SplittingMaps { splitting, sections };
        maps.check(e)?;
        Ok(maps)
    }

    /// The fiber over `y` of every section, as columns in the jet basis.
    pub fn fiber_matrix(&self, model: &FiberModel, e: &SplitBundle) -> Result<Matrix<FieldElem>> {
        let mut cols = Vec::with_capacity(self.sections.len());
        for s in &self.sections {
            cols.push(model.jets(e, s)?);
        }
        Ok(Matrix::from_cols(model.dim(), cols))
    }

    /// The degrees must add up to `deg f_* E` and the sections must span the
    /// fiber over infinity; the determinant is then a nowhere vanishing
    /// section of a degree zero line bundle.
    pub fn check(&self, e: &SplitBundle) -> Result<()> {
        let n = e.curve.n() as usize * e.rank();
        if self.sections.len() != n {
            return Err(Error::Math(format!("{} sections for a rank {n} direct image", self.sections.len())));
        }
        if self.splitting.iter().sum::<i64>() != e.expected_pushforward_degree() {
            return Err(Error::Math("section degrees do not add up to deg f_* E".into()));
        }
        let model = fiber_decomposition(e, &LinePoint::Infinity)?;
        if self.fiber_matrix(&model, e)?.rank() != n {
            return Err(Error::Math("the sections do not span the fiber of f_* E over infinity".into()));
        }
        Ok(())
    }
}
