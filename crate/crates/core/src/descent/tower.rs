use num_traits::One;

use super::constrained::{class_decompose, parabolic_pullback, ClassMatch};
use crate::curve::{Curve, Divisor, Function, Kx, LinePoint, Place};
use crate::error::{math, Error, Result};
use crate::field::{Poly, Scalar};
use crate::pushpar::{assemble_parabolic, SplitBundle};
use crate::{FieldElem, FieldTower};

/// A tower `Y -> X -> P^1` of cyclic covers: `Y: y^N = x^a (x-1)^b`,
/// `X: w^M = x^a (x-1)^b` with `w = y^(N/M)`. `X = Y / G` for the subgroup
/// `G` of order `N/M` of `Z/N`.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub top: Curve,
    pub middle: Curve,
    pub m: u64,
}

/// `y^e` on the curve, reduced with `y^N = x^a (x-1)^b`.
fn y_power(c: &Curve, e: u64) -> Function {
    let n = c.n();
    let f = Function::monomial(FieldElem::one(), 0, (e % n) as usize, n);
    let h = Kx::from_poly(c.h_poly().pow((e / n) as u32));
    f.scale_x(&h)
}

/// `x^-k` or `(x-1)^-k` as a function.
fn inverse_power(c: &Curve, root: i64, k: u64) -> Function {
    let lin = Poly::linear_root(c.k(root)).pow(k as u32);
    Function::from_x(Kx::new(Poly::constant(FieldElem::one()), lin), c.n())
}

impl TowerSpec {
    pub fn new(n: u64, a: u64, b: u64, m: u64, tower: FieldTower) -> Result<Self> {
        if m < 2 || !n.is_multiple_of(m) {
            return math(format!("M = {m} must divide N = {n} and be at least 2"));
        }
        let top = Curve::new(n, a, b, tower.clone())?;
        let middle = Curve::new(m, a, b, tower)?;
        Ok(TowerSpec { top, middle, m })
    }

    /// Degree of `gamma: Y -> X`.
    pub fn gamma_degree(&self) -> u64 {
        self.top.n() / self.m
    }

    /// The unit distinguishing the places of `X` over `0` (or `1`), as a
    /// function of `w` (or of `y` on `Y`, with `w = y^(N/M)`).
    fn branch_label(&self, on_top: bool, over_zero: bool) -> (Function, Curve) {
        let x = &self.middle;
        let (e, v, root) = if over_zero { (x.e0(), x.a() / x.r0(), 0) } else { (x.e1(), x.b() / x.r1(), 1) };
        let c = if on_top { &self.top } else { &self.middle };
        let wpow = if on_top { y_power(c, e * self.gamma_degree()) } else { y_power(c, e) };
        (wpow.mul(&inverse_power(c, root, v), c), c.clone())
    }

    fn label_value(&self, p: &Place, on_top: bool) -> Result<FieldElem> {
        let over_zero = matches!(p, Place::Zero(_));
        let (f, c) = self.branch_label(on_top, over_zero);
        let s = c.expand(&f, p, 1)?;
        if s.valuation() != Some(0) {
            return Err(Error::Internal("branch label is not a unit".into()));
        }
        Ok(s.lead().unwrap())
    }

    /// `gamma(P)` for a place of `Y`.
    pub fn image(&self, p: &Place) -> Result<Place> {
        match p {
            Place::Infinity => Ok(Place::Infinity),
            Place::Finite { x, y } => self.middle.finite_place(x.clone(), y.pow(self.gamma_degree())),
            Place::Zero(_) | Place::One(_) => {
                let v = self.label_value(p, true)?;
                let lp = if matches!(p, Place::Zero(_)) { LinePoint::Zero } else { LinePoint::One };
                for q in self.middle.places_over(&lp)? {
                    if self.label_value(&q, false)? == v {
                        return Ok(q);
                    }
                }
                Err(Error::Internal("no image place found in the intermediate curve".into()))
            }
        }
    }

    /// `gamma^* Q`.
    pub fn pullback_place(&self, q: &Place) -> Result<Divisor> {
        let lp = self.middle.image(q);
        let over = match q {
            Place::Finite { x, y } => {
                let k = self.top.tower();
                let w = k
                    .as_nf(y)
                    .ok_or_else(|| Error::Unsupported("pullback of a place with non-constant coordinate".into()))?;
                let root = k
                    .nth_roots(&w, self.gamma_degree())?
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::Math("the fiber of gamma is not rational over F; enlarge F".into()))?;
                self.top.fiber_of(x, &k.nf(root))
            }
            _ => self.top.places_over(&lp)?,
        };
        let mut d = Divisor::zero();
        for p in over {
            if &self.image(&p)? == q {
                let e = self.top.ramification(&p) / self.middle.ramification(q);
                d.add_at(p, e as i64);
            }
        }
        Ok(d)
    }

    pub fn pullback(&self, d: &Divisor) -> Result<Divisor> {
        let mut out = Divisor::zero();
        for (q, c) in d.iter() {
            out = out + self.pullback_place(q)?.scale(c);
        }
        Ok(out)
    }

    /// `f o gamma = phi` on the places over `0, 1, infinity`, with
    /// multiplicative ramification.
    pub fn check_composition(&self) -> Result<bool> {
        for lp in [LinePoint::Zero, LinePoint::One, LinePoint::Infinity] {
            for p in self.top.places_over(&lp)? {
                let q = self.image(&p)?;
                if self.middle.image(&q) != lp {
                    return Ok(false);
                }
                if !self.top.ramification(&p).is_multiple_of(self.middle.ramification(&q)) {
                    return Ok(false);
                }
            }
            for q in self.middle.places_over(&lp)? {
                if self.pullback_place(&q)?.degree() as u64 != self.gamma_degree() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The transversal `S = {0, ..., M-1}` of `G = M Z/N` in `Z/N` and the
/// element `epsilon = 0` of `S` in `G`.
pub fn invariants_transversal(t: &TowerSpec) -> Result<(Vec<i64>, i64)> {
    let n = t.top.n() as i64;
    let m = t.m as i64;
    let s: Vec<i64> = (0..m).collect();
    let mut cosets: Vec<i64> = s.iter().map(|g| g.rem_euclid(m)).collect();
    cosets.sort();
    cosets.dedup();
    if cosets.len() as i64 != m || n % m != 0 {
        return Err(Error::Internal("transversal does not biject onto the quotient".into()));
    }
    let in_g: Vec<i64> = s.iter().copied().filter(|g| g % m == 0).collect();
    if in_g != [0] {
        return Err(Error::Internal("transversal meets the subgroup in more than the identity".into()));
    }
    Ok((s, 0))
}

/// A candidate class with the group element and summand it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeled {
    pub divisor: Divisor,
    pub shift: i64,
    pub summand: usize,
}

/// Recovers `E` from a certified matching of translate classes: the
/// summands labelled by `epsilon`.
pub fn pushdown_extract(
    e: &SplitBundle,
    labeled: &[Labeled],
    matching: &ClassMatch,
    transversal: &[i64],
    epsilon: i64,
) -> Result<SplitBundle> {
    if !matching.matched {
        return math("pushdown needs a certified class matching");
    }
    let mut ours: Vec<Divisor> = labeled.iter().map(|l| l.divisor.clone()).collect();
    ours.sort();
    if ours != matching.classes {
        return Err(Error::Internal("matched classes differ from the labelled candidates".into()));
    }
    for i in 0..e.rank() {
        let mut shifts: Vec<i64> = labeled.iter().filter(|l| l.summand == i).map(|l| l.shift).collect();
        shifts.sort();
        let mut want = transversal.to_vec();
        want.sort();
        if shifts != want {
            return Err(Error::Internal(format!("summand {i} does not appear once per coset")));
        }
    }
    let mut picked: Vec<&Labeled> = labeled.iter().filter(|l| l.shift == epsilon).collect();
    picked.sort_by_key(|l| l.summand);
    let divisors = picked.iter().map(|l| e.divisors[l.summand].clone()).collect();
    SplitBundle::new(e.curve.clone(), divisors)
}

/// Outcome of the tower check.
#[derive(Clone, Debug)]
pub struct TowerCheck {
    pub holds: bool,
    pub transversal: Vec<i64>,
    pub matching: ClassMatch,
    pub invariant_candidates: bool,
}

/// Checks `phi^* (f_* E)_* = sum_{g in S} g^* gamma^* E` on `Y` for a split
/// `E` on `X`, and that each `gamma^* D_i` is `G`-invariant.
pub fn verify_invariant_subbundle(t: &TowerSpec, e: &SplitBundle, seed: u64) -> Result<TowerCheck> {
    let (s, eps) = invariants_transversal(t)?;
    if !t.check_composition()? {
        return Err(Error::Internal("f o gamma differs from phi on branch places".into()));
    }
    let w = assemble_parabolic(e, seed)?;
    let u = parabolic_pullback(&w, &t.top)?;
    let n = t.top.n() as i64;
    let mut labeled = Vec::new();
    let mut invariant = true;
    for (i, d) in e.divisors.iter().enumerate() {
        let up = t.pullback(d)?;
        for g in (0..n).step_by(t.m as usize) {
            invariant &= t.top.galois_translate(&up, g) == up;
        }
        for &g in &s {
            labeled.push(Labeled { divisor: t.top.galois_translate(&up, g), shift: g, summand: i });
        }
    }
    let candidates: Vec<Divisor> = labeled.iter().map(|l| l.divisor.clone()).collect();
    let matching = class_decompose(&u, &candidates, seed)?;
    let holds = matching.matched && invariant;
    if holds {
        let back = pushdown_extract(e, &labeled, &matching, &s, eps)?;
        if back.divisors != e.divisors {
            return Err(Error::Internal("pushdown did not recover the bundle".into()));
        }
    }
    Ok(TowerCheck { holds, transversal: s, matching, invariant_candidates: invariant })
}
