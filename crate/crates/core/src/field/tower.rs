//! The coefficient tower `K = F(t)(u)`.
//!
//! `F = Q(alpha)` is a number field, `t` an optional transcendental and `u`
//! an optional algebraic generator over `F(t)`. Every element of `K` is a
//! [`FieldElem`]: a polynomial in `u` of degree below `deg g` whose
//! coefficients are reduced rational functions in `t` over `F`.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::factor::{self, Adjunction, Nf};
use super::{AlgExt, Matrix, Poly, Rat, RatFunc, Scalar};
use crate::error::{math, Error, Result};

/// Rational functions in `t` over `F`.
pub type Ft = RatFunc<Nf>;

/// An element of the tower `K`.
pub type FieldElem = AlgExt<Ft>;

/// Number of specializations tried when certifying irreducibility of `g`.
const IRREDUCIBILITY_TRIES: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTower {
    base: Arc<Poly<Rat>>,
    transcendentals: Vec<String>,
    ext: Option<Arc<Poly<Ft>>>,
}

const RESERVED: [&str; 4] = ["alpha", "u", "x", "y"];

impl FieldTower {
    /// Validates and builds a tower.
    ///
    /// `base` must be irreducible over Q; the extension polynomial, when
    /// present, is made monic and must be irreducible over `F(t)`. At most one
    /// transcendental is supported.
    pub fn new(base: Poly<Rat>, transcendentals: Vec<String>, ext: Option<Poly<Ft>>) -> Result<Self> {
        if base.deg() < 1 {
            return math("base polynomial must have positive degree");
        }
        if !factor::is_irreducible_q(&base)? {
            return math(format!("base polynomial {base} is reducible over Q"));
        }
        if transcendentals.len() > 1 {
            return Err(Error::Unsupported("at most one transcendental is supported".into()));
        }
        for name in &transcendentals {
            let ok = !name.is_empty()
                && name.chars().next().unwrap().is_ascii_alphabetic()
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || RESERVED.contains(&name.as_str()) {
                return Err(Error::Parse(format!("invalid transcendental name {name:?}")));
            }
        }
        let base = Arc::new(base.monic());
        let mut tower = FieldTower { base, transcendentals, ext: None };
        if let Some(g) = ext {
            if tower.transcendentals.is_empty() {
                return math("an algebraic generator requires a transcendental");
            }
            if g.deg() < 1 {
                return math("extension polynomial must have positive degree in u");
            }
            let g = tower.attach_poly(&g).monic();
            if g.degree().unwrap() > factor::MAX_DEGREE {
                return Err(Error::Unsupported(format!("extension degree exceeds {}", factor::MAX_DEGREE)));
            }
            tower.check_extension_irreducible(&g)?;
            tower.ext = Some(Arc::new(g));
        }
        Ok(tower)
    }

    /// The field Q.
    pub fn rational() -> Self {
        FieldTower { base: Arc::new(Poly::x()), transcendentals: Vec::new(), ext: None }
    }

    /// A number field without transcendentals.
    pub fn number_field(base: Poly<Rat>) -> Result<Self> {
        FieldTower::new(base, Vec::new(), None)
    }

    pub fn base_modulus(&self) -> &Arc<Poly<Rat>> {
        &self.base
    }

    pub fn base_degree(&self) -> usize {
        self.base.degree().unwrap()
    }

    pub fn transcendental(&self) -> Option<&str> {
        self.transcendentals.first().map(|s| s.as_str())
    }

    pub fn transcendentals(&self) -> &[String] {
        &self.transcendentals
    }

    pub fn ext(&self) -> Option<&Arc<Poly<Ft>>> {
        self.ext.as_ref()
    }

    pub fn u_degree(&self) -> usize {
        self.ext.as_ref().map_or(1, |g| g.degree().unwrap())
    }

    fn attach_nf(&self, c: &Nf) -> Nf {
        c.clone().with_modulus(&self.base)
    }

    fn attach_ft(&self, f: &Ft) -> Ft {
        RatFunc::new(f.num().map(|c| self.attach_nf(c)), f.den().map(|c| self.attach_nf(c)))
    }

    fn attach_poly(&self, g: &Poly<Ft>) -> Poly<Ft> {
        g.map(|c| self.attach_ft(c))
    }

    /// Generator `alpha` of `F` as an element of `F`.
    pub fn alpha_nf(&self) -> Nf {
        Nf::generator(&self.base)
    }

    pub fn nf(&self, c: Nf) -> FieldElem {
        self.elem(Ft::constant(self.attach_nf(&c)))
    }

    pub fn rat(&self, q: Rat) -> FieldElem {
        self.nf(Nf::from_base(q))
    }

    pub fn int(&self, n: i64) -> FieldElem {
        self.rat(Rat::from_i64(n))
    }

    pub fn alpha(&self) -> FieldElem {
        self.nf(self.alpha_nf())
    }

    /// Embeds an element of `F(t)`.
    pub fn elem(&self, f: Ft) -> FieldElem {
        let e = FieldElem::from_base(self.attach_ft(&f));
        match &self.ext {
            Some(g) => e.with_modulus(g),
            None => e,
        }
    }

    pub fn t(&self) -> Result<FieldElem> {
        if self.transcendentals.is_empty() {
            return math("the tower has no transcendental");
        }
        Ok(self.elem(Ft::var()))
    }

    pub fn u(&self) -> Result<FieldElem> {
        match &self.ext {
            Some(g) => Ok(FieldElem::generator(g)),
            None => math("the tower has no algebraic generator u"),
        }
    }

    /// Attaches the tower's moduli to an element built from constants.
    pub fn normalize(&self, e: &FieldElem) -> FieldElem {
        self.from_u_poly(e.value().clone())
    }

    /// The element `sum v_j u^j`.
    pub fn from_u_poly(&self, v: Poly<Ft>) -> FieldElem {
        let v = v.map(|c| self.attach_ft(c));
        match &self.ext {
            Some(g) => FieldElem::new(v, g),
            None => {
                debug_assert!(v.deg() <= 0);
                FieldElem::from_base(v.coeff(0))
            }
        }
    }

    /// The element as a member of `F`, if it lies there.
    pub fn as_nf(&self, e: &FieldElem) -> Option<Nf> {
        let f = e.as_base()?;
        f.as_constant().map(|c| self.attach_nf(&c))
    }

    /// The element as a member of `F(t)`, if it is free of `u`.
    pub fn as_ft(&self, e: &FieldElem) -> Option<Ft> {
        e.as_base()
    }

    /// True iff `e` lies in `F`, i.e. is free of `t` and `u`.
    pub fn is_algebraic(&self, e: &FieldElem) -> bool {
        self.as_nf(e).is_some()
    }

    /// True iff the row space of `basis` has a basis of vectors over `F`.
    pub fn subspace_is_rational(&self, basis: &Matrix<FieldElem>) -> bool {
        basis.rref().entries().iter().all(|e| self.is_algebraic(e))
    }

    /// All `n`-th roots of unity in `F`, sorted canonically.
    pub fn roots_of_unity(&self, n: u64) -> Result<Vec<Nf>> {
        let p = Poly::monomial(Nf::one(), n as usize) - Poly::one();
        self.roots_in_f(&p)
    }

    /// Roots in `F` of a polynomial over `F`.
    pub fn roots_in_f(&self, p: &Poly<Nf>) -> Result<Vec<Nf>> {
        let p = p.map(|c| self.attach_nf(c));
        Ok(factor::roots_nf(&p, &self.base)?.into_iter().map(|r| self.attach_nf(&r)).collect())
    }

    /// The `n`-th roots of `c` lying in `F`.
    pub fn nth_roots(&self, c: &Nf, n: u64) -> Result<Vec<Nf>> {
        if c.is_zero() {
            return Ok(vec![Nf::zero()]);
        }
        let mut coeffs = vec![Nf::zero(); n as usize + 1];
        coeffs[0] = -c.clone();
        coeffs[n as usize] = Nf::one();
        self.roots_in_f(&Poly::new(coeffs))
    }

    /// The chosen primitive `n`-th root of unity of `F`: the generator
    /// `alpha` when it is one, otherwise the canonically smallest.
    pub fn zeta(&self, n: u64) -> Result<Nf> {
        if n <= 1 {
            return Ok(Nf::one());
        }
        if n == 2 {
            return Ok(-Nf::one());
        }
        let phi = factor::cyclotomic(n).map(|c| Nf::from_base(c.clone()));
        let a = self.alpha_nf();
        if phi.eval(&a).is_zero() {
            return Ok(a);
        }
        let roots = self.roots_in_f(&phi)?;
        match roots.into_iter().next() {
            Some(z) => Ok(z),
            None => math(format!("the base field does not contain a primitive {n}-th root of unity; enlarge F")),
        }
    }

    /// Sufficient test for irreducibility of the monic `g` over `F(t)`: some
    /// specialization `t = tau` without poles keeps the degree, is squarefree
    /// and is irreducible over `F`.
    fn check_extension_irreducible(&self, g: &Poly<Ft>) -> Result<()> {
        if g.deg() == 1 {
            return Ok(());
        }
        for tau in small_integers(IRREDUCIBILITY_TRIES) {
            let Some(gt) = self.specialize_poly(g, &Nf::from_i64(tau)) else { continue };
            if gt.deg() != g.deg() || !gt.is_squarefree() {
                continue;
            }
            if factor::is_irreducible_nf(&gt, &self.base)? {
                return Ok(());
            }
        }
        math("could not certify that the extension polynomial is irreducible over F(t)")
    }

    /// `g(tau, u)` as a polynomial over `F`, `None` at a pole.
    pub fn specialize_poly(&self, g: &Poly<Ft>, tau: &Nf) -> Option<Poly<Nf>> {
        let cs = g.coeffs().iter().map(|c| c.eval(tau).map(|v| self.attach_nf(&v))).collect::<Option<Vec<_>>>()?;
        Some(Poly::new(cs))
    }

    /// Specializes `t = tau` (an element of `F`), adjoining a root of
    /// `g(tau, u)` to `F` when none exists. Returns `None` when `tau` is bad:
    /// a pole of some coefficient of `g`, or `g(tau, u)` not squarefree of full
    /// degree.
    pub fn specialize(&self, tau: &Nf) -> Result<Option<Specialization>> {
        if self.transcendentals.is_empty() {
            return math("nothing to specialize: the tower has no transcendental");
        }
        let tau_nf = self.attach_nf(tau);
        let Some(g) = &self.ext else {
            return Ok(Some(Specialization {
                source: self.clone(),
                target: self.clone(),
                adjunction: None,
                tau: tau_nf,
                u_value: None,
            }));
        };
        let Some(gt) = self.specialize_poly(g, &tau_nf) else { return Ok(None) };
        if gt.deg() != g.deg() || !gt.is_squarefree() {
            return Ok(None);
        }
        if let Some(root) = self.roots_in_f(&gt)?.into_iter().next() {
            return Ok(Some(Specialization {
                source: self.clone(),
                target: self.clone(),
                adjunction: None,
                tau: tau_nf,
                u_value: Some(root),
            }));
        }
        let fac = factor::factor_nf(&gt, &self.base)?;
        let smallest = fac
            .iter()
            .min_by_key(|(p, _)| p.degree())
            .map(|(p, _)| p.clone())
            .ok_or_else(|| Error::Internal("empty factorization".into()))?;
        let adj = factor::adjoin_root(&smallest, &self.base)?;
        let new_base = adj.modulus.as_ref().clone();
        let new_ext = g.map(|c| c.map(|x| adj.embed(x)));
        let target = FieldTower::new(new_base, self.transcendentals.clone(), Some(new_ext))?;
        let root = target.attach_nf(&adj.root);
        Ok(Some(Specialization {
            source: self.clone(),
            target,
            adjunction: Some(adj),
            tau: tau_nf,
            u_value: Some(root),
        }))
    }
}

/// `0, 1, -1, 2, -2, ...` up to `count` values.
pub fn small_integers(count: i64) -> impl Iterator<Item = i64> {
    (0..count).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
}

impl FieldTower {
    /// The first `count` small integers of `F`: combinations
    /// `sum c_i alpha^i` ordered by `max |c_i|`, then by the coefficient
    /// vectors in the order of [`small_integers`].
    pub fn small_elements(&self, count: usize) -> Vec<Nf> {
        let d = self.base_degree();
        let alpha = self.alpha_nf();
        let mut out = Vec::new();
        let mut height = 0i64;
        while out.len() < count {
            let digits: Vec<i64> = small_integers(2 * height + 1).collect();
            let total = digits.len().pow(d as u32);
            for idx in 0..total {
                let mut rest = idx;
                let mut cs = Vec::with_capacity(d);
                for _ in 0..d {
                    cs.push(digits[rest % digits.len()]);
                    rest /= digits.len();
                }
                if cs.iter().map(|c| c.abs()).max().unwrap_or(0) != height {
                    continue;
                }
                let mut v = Nf::zero();
                for c in cs.iter().rev() {
                    v = v * alpha.clone() + Nf::from_i64(*c);
                }
                out.push(self.attach_nf(&v));
                if out.len() == count {
                    break;
                }
            }
            height += 1;
        }
        out
    }
}

/// A specialization `t = tau`, `u = u(tau)` of a tower, possibly after
/// enlarging `F` to `F'` so that `u(tau)` exists.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub source: FieldTower,
    /// `K' = F'(t)(u)`; equal to the source when no adjunction was needed.
    pub target: FieldTower,
    pub adjunction: Option<Adjunction>,
    pub tau: Nf,
    pub u_value: Option<Nf>,
}

impl Specialization {
    pub fn embed_nf(&self, c: &Nf) -> Nf {
        match &self.adjunction {
            Some(adj) => adj.embed(c),
            None => c.clone(),
        }
    }

    /// The inclusion `K -> K'`.
    pub fn embed(&self, e: &FieldElem) -> FieldElem {
        let v = e.value().map(|f| f.map(|c| self.embed_nf(c)));
        self.target.from_u_poly(v)
    }

    /// The value of `e` at `t = tau, u = u(tau)` as an element of `F'`, or
    /// `None` when a coefficient has a pole at `tau`.
    pub fn evaluate(&self, e: &FieldElem) -> Option<Nf> {
        let mut acc = Nf::zero();
        let u = self.u_value.clone().unwrap_or_else(Nf::zero);
        for c in e.value().coeffs().iter().rev() {
            let c = c.map(|x| self.embed_nf(x));
            let v = c.eval(&self.tau)?;
            acc = acc * u.clone() + v;
        }
        Some(self.target.attach_nf(&acc))
    }

    /// The specialized value as a constant of `K'`.
    pub fn evaluate_in_target(&self, e: &FieldElem) -> Option<FieldElem> {
        self.evaluate(e).map(|c| self.target.nf(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Poly<Rat> {
        Poly::new(v.iter().map(|&c| Rat::from_i64(c)).collect())
    }

    fn zeta3_tower() -> FieldTower {
        let t = Ft::var();
        let ext = Poly::new(vec![t.clone() - t.clone() * t.clone(), Ft::zero(), Ft::zero(), Ft::one()]);
        FieldTower::new(q(&[1, 1, 1]), vec!["t".into()], Some(ext)).unwrap()
    }

    #[test]
    fn build_and_reject() {
        assert!(FieldTower::new(q(&[0, 1]), vec![], None).is_ok());
        assert!(FieldTower::new(q(&[-1, 0, 1]), vec![], None).is_err());
        let t = zeta3_tower();
        assert_eq!(t.u_degree(), 3);
        // u^2 - t^2 is reducible
        let tt = Ft::var();
        let red = Poly::new(vec![-(tt.clone() * tt), Ft::zero(), Ft::one()]);
        assert!(FieldTower::new(q(&[1, 1, 1]), vec!["t".into()], Some(red)).is_err());
        assert!(FieldTower::new(q(&[0, 1]), vec!["t".into(), "s".into()], None).is_err());
    }

    #[test]
    fn algebraic_predicate() {
        let k = zeta3_tower();
        let u = k.u().unwrap();
        let t = k.t().unwrap();
        assert!(k.is_algebraic(&(k.alpha() + k.rat(Rat::new(3.into(), 2.into())))));
        assert!(!k.is_algebraic(&t));
        let tu = t.clone() * u.clone();
        assert!(k.is_algebraic(&(tu.clone() * tu.inv().unwrap())));
        // u^3 = t^2 - t
        assert_eq!(u.pow(3), t.clone() * t.clone() - t);
    }

    #[test]
    fn rational_subspaces() {
        let k = zeta3_tower();
        let t = k.t().unwrap();
        let one = k.int(1);
        let zero = k.int(0);
        let m1 = Matrix::from_rows(2, vec![vec![one.clone(), t.clone()]]);
        assert!(!k.subspace_is_rational(&m1));
        let m2 = Matrix::from_rows(2, vec![vec![t.clone(), t.clone()]]);
        assert!(k.subspace_is_rational(&m2));
        let m3 = Matrix::from_rows(2, vec![vec![one.clone(), zero.clone()], vec![t, one]]);
        assert!(k.subspace_is_rational(&m3));
    }

    #[test]
    fn zeta_choice() {
        let k = FieldTower::number_field(q(&[1, 1, 1])).unwrap();
        assert_eq!(k.zeta(3).unwrap(), k.alpha_nf());
        assert_eq!(k.roots_of_unity(6).unwrap().len(), 6);
        let z6 = k.zeta(6).unwrap();
        assert_eq!(z6.pow(6), Nf::one());
        assert_ne!(z6.pow(3), Nf::one());
        assert!(k.zeta(4).is_err());
        assert_eq!(FieldTower::rational().zeta(2).unwrap(), -Nf::one());
    }

    #[test]
    fn specialization_adjoins_cube_root() {
        let k = zeta3_tower();
        // tau = -1: u^3 = 2 has no root in Q(zeta3)
        let s = k.specialize(&Nf::from_i64(-1)).unwrap().unwrap();
        assert!(s.adjunction.is_some());
        let u = s.u_value.clone().unwrap();
        assert_eq!(u.pow(3), Nf::from_i64(2));
        let v = s.evaluate(&(k.u().unwrap() * k.t().unwrap())).unwrap();
        assert_eq!(v, -u);
        // tau = 0 is bad (u^3 not squarefree)
        assert!(k.specialize(&Nf::zero()).unwrap().is_none());
        let e = s.embed(&k.u().unwrap());
        assert_eq!(e.pow(3), s.target.t().unwrap().pow(2) - s.target.t().unwrap());
    }
}
