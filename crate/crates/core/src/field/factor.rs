//! Polynomial factorization over Q and over number fields.
//!
//! Over Q: squarefree decomposition, Cantor-Zassenhaus modulo a small prime,
//! Hensel lifting, and exhaustive recombination. Over a number field
//! `Q(a)`: Trager's norm method on top of the rational factorization.
//! Input degrees are capped at [`MAX_DEGREE`] (times the field degree for
//! norms), which keeps exhaustive recombination cheap.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgExt, Matrix, Poly, Rat, Scalar};
use crate::error::{Error, Result};

/// Largest input degree accepted by the factorization routines.
pub const MAX_DEGREE: usize = 12;

/// Element of a number field `Q(a)`.
pub type Nf = AlgExt<Rat>;

// ---------------------------------------------------------------------------
// arithmetic modulo a small prime

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, p as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(v)
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    fp_trim(v)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = fp_inv(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bj % p) % p;
        }
        q[i] = c;
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let sc = |v: &Fp| fp_trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_powmod(base: &Fp, exp: &BigInt, m: &Fp, p: u64) -> Fp {
    let mut result = vec![1u64];
    let mut b = fp_divrem(base, m, p).1;
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result = fp_divrem(&fp_mul(&result, &b, p), m, p).1;
        }
        if i + 1 < bits {
            b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        }
    }
    result
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect())
}

/// Distinct-degree then equal-degree factorization of a monic squarefree
/// polynomial modulo an odd prime.
fn fp_factor(f: &Fp, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0u32;
    let pb = BigInt::from(p);
    while rest.len() > 1 && 2 * (d as usize + 1) < rest.len() {
        d += 1;
        h = fp_powmod(&h, &pb, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            fp_equal_degree(&g, d, p, rng, &mut out);
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
    }
    if rest.len() > 1 {
        out.push(fp_monic(&rest, p));
    }
    out
}

fn fp_equal_degree(f: &Fp, d: u32, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
    let n = f.len() - 1;
    if n == d as usize {
        out.push(fp_monic(f, p));
        return;
    }
    let e = (BigInt::from(p).pow(d) - 1) / 2;
    loop {
        let a: Fp = fp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, f, p), &vec![1u64], p);
        let g = fp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = fp_divrem(f, &g, p).0;
            fp_equal_degree(&g, d, p, rng, out);
            fp_equal_degree(&q, d, p, rng, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// integer polynomials

type Zp = Vec<BigInt>;

fn z_trim(mut a: Zp) -> Zp {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn z_mul(a: &Zp, b: &Zp) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    z_trim(v)
}

fn z_mod(a: &Zp, m: &BigInt) -> Zp {
    z_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn z_symmetric(a: &Zp, m: &BigInt) -> Zp {
    let half = m / 2;
    z_trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn z_to_fp(a: &Zp, p: u64) -> Fp {
    let pb = BigInt::from(p);
    fp_trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn fp_to_z(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn z_content(a: &Zp) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn z_primitive(a: &Zp) -> Zp {
    let c = z_content(a);
    let mut v: Zp = a.iter().map(|x| x / &c).collect();
    if v.last().is_some_and(|l| l.is_negative()) {
        v = v.into_iter().map(|x| -x).collect();
    }
    v
}

/// Primitive integer polynomial with positive lead proportional to `f`.
fn to_primitive_z(f: &Poly<Rat>) -> Zp {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v: Zp = f.coeffs().iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    z_primitive(&v)
}

fn z_to_poly(a: &Zp) -> Poly<Rat> {
    Poly::new(a.iter().map(|c| Rat::from_integer(c.clone())).collect())
}

/// One step of linear Hensel lifting from `p^k` to `p^(k+1)` for
/// `f = g*h (mod p^k)`, `g` monic, `s*g + t*h = 1 (mod p)`.
fn hensel_step(f: &Zp, g: &mut Zp, h: &mut Zp, s: &Fp, t: &Fp, p: u64, pk: &BigInt) {
    let gh = z_mul(g, h);
    let n = f.len().max(gh.len());
    let diff: Zp = (0..n)
        .map(|i| {
            let a = f.get(i).cloned().unwrap_or_default();
            let b = gh.get(i).cloned().unwrap_or_default();
            a - b
        })
        .collect();
    let e: Zp = diff.iter().map(|c| c / pk).collect();
    let e = z_to_fp(&z_trim(e), p);
    let gp = z_to_fp(g, p);
    let hp = z_to_fp(h, p);
    let (q, tau) = fp_divrem(&fp_mul(t, &e, p), &gp, p);
    let sigma = fp_trim({
        let a = fp_mul(s, &e, p);
        let b = fp_mul(&q, &hp, p);
        let n = a.len().max(b.len());
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect()
    });
    let add = |x: &mut Zp, d: &Fp| {
        if x.len() < d.len() {
            x.resize(d.len(), BigInt::zero());
        }
        for (i, &c) in d.iter().enumerate() {
            x[i] += pk * BigInt::from(c);
        }
        *x = z_trim(std::mem::take(x));
    };
    add(g, &tau);
    add(h, &sigma);
}

/// Lifts a factorization `f = lc * prod(factors) (mod p)` to `mod p^k`.
fn hensel_lift(f: &Zp, factors: &[Fp], p: u64, k: u32) -> Vec<Zp> {
    let pk_final = BigInt::from(p).pow(k);
    let lc = f.last().unwrap().clone();
    if factors.len() == 1 {
        // monic multiple of f modulo p^k
        let inv = lc.modinv(&pk_final).expect("lead coprime to p");
        return vec![z_mod(&f.iter().map(|c| c * &inv).collect(), &pk_final)];
    }
    let mid = factors.len() / 2;
    let (a, b) = factors.split_at(mid);
    let ga = a.iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let gb_monic = b.iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let lcp = lc.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let gb: Fp = gb_monic.iter().map(|&c| c * lcp % p).collect();
    let (one, s, t) = fp_xgcd(&ga, &gb, p);
    debug_assert_eq!(one, vec![1]);
    let mut g = fp_to_z(&ga);
    let mut h = fp_to_z(&gb);
    let mut pk = BigInt::from(p);
    for _ in 1..k {
        hensel_step(f, &mut g, &mut h, &s, &t, p, &pk);
        pk *= p;
        g = z_mod(&g, &pk);
        h = z_mod(&h, &pk);
    }
    let mut out = hensel_lift(&g, a, p, k);
    out.extend(hensel_lift(&h, b, p, k));
    out
}

fn exact_z_div(a: &Zp, b: &Zp) -> Option<Zp> {
    let (q, r) = z_to_poly(a).divrem(&z_to_poly(b));
    if !r.is_zero() {
        return None;
    }
    q.coeffs().iter().map(|c| c.is_integer().then(|| c.to_integer())).collect::<Option<Zp>>()
}

const SMALL_PRIMES: [u64; 24] =
    [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Irreducible factors of a squarefree primitive integer polynomial.
fn factor_squarefree_z(f: &Zp) -> Vec<Zp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // choose the prime with the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter().chain([101u64, 103, 107, 109, 113, 127, 131].iter()) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = z_to_fp(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let g = fp_gcd(&fp, &fp_derivative(&fp, p), p);
        if g.len() > 1 {
            continue;
        }
        let facs = fp_factor(&fp_monic(&fp, p), p, &mut rng);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("a good prime exists for squarefree input");
    // coefficient bound for factors (Mignotte-style, generous)
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2).pow(n as u32) * norm1 * lc.abs() * 2;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= bound {
        pk *= p;
        k += 1;
    }
    let lifted = hensel_lift(f, &facs, p, k);
    recombine(f, lifted, &pk)
}

fn recombine(f: &Zp, mut lifted: Vec<Zp>, pk: &BigInt) -> Vec<Zp> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = rest.last().unwrap().clone();
            let prod = idx.iter().fold(vec![lc.clone()], |acc, &i| z_mod(&z_mul(&acc, &lifted[i]), pk));
            let cand = z_primitive(&z_symmetric(&prod, pk));
            if let Some(q) = exact_z_div(&rest, &cand) {
                out.push(cand);
                rest = z_primitive(&q);
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < r - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    idx.clear();
                    break;
                }
            }
            if idx.is_empty() || idx[0] > r - size {
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

/// Squarefree decomposition over a field of characteristic zero (Yun).
pub fn squarefree_decomposition<S: Scalar>(f: &Poly<S>) -> Vec<(Poly<S>, usize)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).unwrap();
    let mut c = df.exact_div(&a0).unwrap();
    let mut d = c - b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.exact_div(&a).unwrap();
        c = d.exact_div(&a).unwrap();
        d = c - b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Monic irreducible factors of `f` over Q with multiplicities.
pub fn factor_q(f: &Poly<Rat>) -> Result<Vec<(Poly<Rat>, usize)>> {
    let deg = f.degree().ok_or_else(|| Error::Math("cannot factor the zero polynomial".into()))?;
    if deg > MAX_DEGREE * 8 {
        return Err(Error::Unsupported(format!("polynomial of degree {deg} exceeds the factorization bound")));
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for h in factor_squarefree_z(&to_primitive_z(&g)) {
            out.push((z_to_poly(&h).monic(), m));
        }
    }
    out.sort();
    Ok(out)
}

pub fn is_irreducible_q(f: &Poly<Rat>) -> Result<bool> {
    if f.deg() < 1 {
        return Ok(false);
    }
    let fs = factor_q(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> Poly<Rat> {
    let mut p = Poly::monomial(Rat::one(), n as usize) - Poly::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.exact_div(&cyclotomic(d)).unwrap();
        }
    }
    p
}

// ---------------------------------------------------------------------------
// number fields

/// Matrix of multiplication by `b` on the power basis of `Q(a)`.
fn mult_matrix(b: &Nf, modulus: &Arc<Poly<Rat>>) -> Matrix<Rat> {
    let n = modulus.degree().unwrap();
    let mut m = Matrix::zeros(n, n);
    let a = Nf::generator(modulus);
    let mut col = b.clone().with_modulus(modulus);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = col.value().coeff(i);
        }
        col = col * a.clone();
    }
    m
}

pub fn nf_norm(b: &Nf, modulus: &Arc<Poly<Rat>>) -> Rat {
    mult_matrix(b, modulus).determinant()
}

/// Norm `N_{F/Q}(g)` of a polynomial over `F`, by evaluation and interpolation.
pub fn poly_norm(g: &Poly<Nf>, modulus: &Arc<Poly<Rat>>) -> Poly<Rat> {
    let n = modulus.degree().unwrap();
    let deg = g.degree().unwrap() * n;
    let xs: Vec<Rat> = (0..=deg as i64).map(Rat::from_i64).collect();
    let ys: Vec<Rat> = xs.iter().map(|x| nf_norm(&g.eval(&Nf::from_base(x.clone())), modulus)).collect();
    interpolate(&xs, &ys)
}

/// Lagrange interpolation over Q.
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly<Rat> {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut term = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                term = term * Poly::linear_root(xj.clone());
                term = term.scale(&(xi - xj).recip());
            }
        }
        acc = acc + term;
    }
    acc
}

fn shift_by(g: &Poly<Nf>, c: &Nf) -> Poly<Nf> {
    // g(x + c)
    g.compose(&Poly::new(vec![c.clone(), Nf::one()]))
}

/// Monic irreducible factors over `F = Q(a)` of a polynomial in `F[x]`.
pub fn factor_nf(f: &Poly<Nf>, modulus: &Arc<Poly<Rat>>) -> Result<Vec<(Poly<Nf>, usize)>> {
    let deg = f.degree().ok_or_else(|| Error::Math("cannot factor the zero polynomial".into()))?;
    if deg > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "polynomial of degree {deg} exceeds the factorization bound {MAX_DEGREE}"
        )));
    }
    let a = Nf::generator(modulus);
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        if g.deg() == 1 {
            out.push((g, m));
            continue;
        }
        let mut done = false;
        for k in [0i64, 1, -1, 2, -2, 3, -3, 4, 5, 7] {
            let shift = a.clone() * Nf::from_i64(k);
            let gs = shift_by(&g, &(-shift.clone()));
            let norm = poly_norm(&gs, modulus);
            if !norm.is_squarefree() {
                continue;
            }
            for (h, _) in factor_q(&norm)? {
                let hl = h.map(|c| Nf::from_base(c.clone()).with_modulus(modulus));
                let fac = gs.gcd(&hl);
                if !fac.is_constant() {
                    out.push((shift_by(&fac, &shift).monic(), m));
                }
            }
            done = true;
            break;
        }
        if !done {
            return Err(Error::Unsupported("no squarefree norm found for factorization".into()));
        }
    }
    out.sort();
    Ok(out)
}

/// Roots in `F` of a polynomial over `F`, sorted canonically.
pub fn roots_nf(f: &Poly<Nf>, modulus: &Arc<Poly<Rat>>) -> Result<Vec<Nf>> {
    let mut r: Vec<Nf> = factor_nf(f, modulus)?
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| (-g.coeff(0)).with_modulus(modulus))
        .collect();
    r.sort();
    Ok(r)
}

pub fn is_irreducible_nf(f: &Poly<Nf>, modulus: &Arc<Poly<Rat>>) -> Result<bool> {
    if f.deg() < 1 {
        return Ok(false);
    }
    let fs = factor_nf(f, modulus)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Result of adjoining a root `b` of an irreducible `p` over `F = Q(a)`:
/// the new field `Q(c)` with `c = b + k*a`, and the images of `a` and `b`.
#[derive(Clone, Debug)]
pub struct Adjunction {
    pub modulus: Arc<Poly<Rat>>,
    pub image_of_generator: Nf,
    pub root: Nf,
}

impl Adjunction {
    /// Embeds an element of the old field into the new one.
    pub fn embed(&self, x: &Nf) -> Nf {
        x.value().eval_with(&self.image_of_generator, |c| Nf::from_base(c.clone())).with_modulus(&self.modulus)
    }
}

/// Adjoins a root of `p` (irreducible over `F`) and returns a primitive
/// element presentation of `F(b)` over Q.
pub fn adjoin_root(p: &Poly<Nf>, modulus: &Arc<Poly<Rat>>) -> Result<Adjunction> {
    let a = Nf::generator(modulus);
    for k in [1i64, 2, -1, 3, -2, 5, 7] {
        let shift = a.clone() * Nf::from_i64(k);
        // c = b + k a is a root of p(x - k a)
        let ps = shift_by(p, &(-shift));
        let norm = poly_norm(&ps, modulus);
        if !norm.is_squarefree() {
            continue;
        }
        let new_mod = Arc::new(norm.monic());
        let c = Nf::generator(&new_mod);
        // image of a: common root of m(y) and p(c - k y)
        let lift = |q: &Rat| Nf::from_base(q.clone()).with_modulus(&new_mod);
        let m_y: Poly<Nf> = modulus.map(lift);
        let cy = Poly::new(vec![c.clone(), Nf::from_i64(-k)]);
        let mut p_y = Poly::<Nf>::zero();
        for (i, coeff) in p.coeffs().iter().enumerate() {
            let ci: Poly<Nf> = coeff.value().map(lift);
            p_y = p_y + ci * cy.pow(i as u32);
        }
        let g = m_y.gcd(&p_y);
        if g.deg() != 1 {
            continue;
        }
        let image = (-g.coeff(0)).with_modulus(&new_mod);
        let root = c - image.clone() * Nf::from_i64(k);
        return Ok(Adjunction { modulus: new_mod, image_of_generator: image, root });
    }
    Err(Error::Unsupported("could not find a primitive element".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Poly<Rat> {
        Poly::new(v.iter().map(|&c| Rat::from_i64(c)).collect())
    }

    #[test]
    fn factor_over_q() {
        // (x^2+1)(x-3)^2(2x+1)
        let f = q(&[1, 0, 1]) * q(&[-3, 1]).pow(2) * q(&[1, 2]);
        let fs = factor_q(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&(q(&[1, 0, 1]), 1)));
        assert!(fs.contains(&(q(&[-3, 1]), 2)));
        assert!(fs.contains(&(Poly::new(vec![Rat::new(1.into(), 2.into()), Rat::one()]), 1)));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 + 1 is irreducible over Q but reducible mod every prime
        assert!(is_irreducible_q(&q(&[1, 0, 0, 0, 1])).unwrap());
        // x^4 - 10x^2 + 1 (minimal polynomial of sqrt2 + sqrt3)
        assert!(is_irreducible_q(&q(&[1, 0, -10, 0, 1])).unwrap());
        assert!(!is_irreducible_q(&q(&[-1, 0, 0, 0, 1])).unwrap());
        // product of two quartics
        let f = q(&[1, 0, 0, 0, 1]) * q(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_q(&f).unwrap().len(), 2);
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic(3), q(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), q(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), q(&[1, -1, 1]));
        assert_eq!(cyclotomic(5).deg(), 4);
    }

    #[test]
    fn roots_of_unity_in_q_zeta3() {
        let m = Arc::new(q(&[1, 1, 1]));
        let lift = |p: Poly<Rat>| p.map(|c| Nf::from_base(c.clone()));
        // x^3 - 1 splits completely over Q(zeta_3)
        let r = roots_nf(&lift(q(&[-1, 0, 0, 1])), &m).unwrap();
        assert_eq!(r.len(), 3);
        for z in &r {
            assert_eq!(z.pow(3), Nf::one());
        }
        // x^3 - 2 has no root
        assert!(roots_nf(&lift(q(&[-2, 0, 0, 1])), &m).unwrap().is_empty());
        assert!(is_irreducible_nf(&lift(q(&[-2, 0, 0, 1])), &m).unwrap());
        // x^2 + 3 splits
        assert_eq!(roots_nf(&lift(q(&[3, 0, 1])), &m).unwrap().len(), 2);
    }

    #[test]
    fn adjoin_cube_root() {
        let m = Arc::new(q(&[1, 1, 1]));
        let p: Poly<Nf> = q(&[-2, 0, 0, 1]).map(|c| Nf::from_base(c.clone()));
        let adj = adjoin_root(&p, &m).unwrap();
        assert_eq!(adj.modulus.deg(), 6);
        assert_eq!(adj.root.pow(3), Nf::from_i64(2));
        let w = adj.image_of_generator.clone();
        assert_eq!(w.clone() * w.clone() + w + Nf::one(), Nf::zero());
    }
}
