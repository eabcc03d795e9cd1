use num_traits::{One, Zero};

use super::constrained::{ClassMatch, ConstrainedBundle};
use crate::error::{math, Error, Result};
use crate::field::{Matrix, Scalar};
use crate::pushpar::SplitBundle;
use crate::rr::{rr_space, FunctionBasis};
use crate::FieldElem;

/// The endomorphism algebra of `O(D_0) + ... + O(D_{r-1})`. Block `(i, j)`
/// holds the maps `O(D_j) -> O(D_i)`; element `b` of the basis is the
/// `index`-th basis map of block `blocks[b]`.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub rank: usize,
    /// `(i, j, dim)` per block, row-major.
    pub blocks: Vec<(usize, usize, usize)>,
    pub basis: Vec<(usize, usize)>,
    /// `table[a][b]`: coordinates of `basis[a] * basis[b]`.
    pub table: Vec<Vec<Vec<FieldElem>>>,
    pub trace: Vec<FieldElem>,
    pub identity: Vec<FieldElem>,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        let mut out = vec![FieldElem::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa.clone() * yb.clone();
                for (o, t) in out.iter_mut().zip(&self.table[a][b]) {
                    if !t.is_zero() {
                        *o = o.clone() + c.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    pub fn trace_of(&self, x: &[FieldElem]) -> FieldElem {
        x.iter().zip(&self.trace).fold(FieldElem::zero(), |acc, (a, t)| acc + a.clone() * t.clone())
    }

    fn check(&self) -> Result<()> {
        if self.trace_of(&self.identity) != FieldElem::from_i64(self.rank as i64) {
            return Err(Error::Internal("trace of the identity differs from the rank".into()));
        }
        for a in 0..self.dim() {
            let mut e = vec![FieldElem::zero(); self.dim()];
            e[a] = FieldElem::one();
            if self.mul(&self.identity, &e) != e || self.mul(&e, &self.identity) != e {
                return Err(Error::Internal("identity is not a unit of the endomorphism algebra".into()));
            }
        }
        Ok(())
    }
}

/// Builds the algebra from the block spaces. `product(i, j, k, a, b)` gives
/// the coordinates in block `(i, k)` of `basis a of (i, j)` composed with
/// `basis b of (j, k)`; `scalar(i, a)` is the constant of a map `O(D_i) ->
/// O(D_i)`.
fn assemble<P, T>(rank: usize, dims: &[Vec<usize>], product: P, scalar: T) -> Result<EndAlgebra>
where
    P: Fn(usize, usize, usize, usize, usize) -> Result<Vec<FieldElem>>,
    T: Fn(usize, usize) -> Result<FieldElem>,
{
    let mut blocks = Vec::new();
    let mut start = vec![vec![0; rank]; rank];
    let mut basis = Vec::new();
    for i in 0..rank {
        for j in 0..rank {
            start[i][j] = basis.len();
            for k in 0..dims[i][j] {
                basis.push((blocks.len(), k));
            }
            blocks.push((i, j, dims[i][j]));
        }
    }
    let dim = basis.len();
    let mut table = vec![vec![vec![FieldElem::zero(); dim]; dim]; dim];
    for a in 0..dim {
        let (ba, ka) = basis[a];
        let (i, j, _) = blocks[ba];
        for b in 0..dim {
            let (bb, kb) = basis[b];
            let (j2, k, _) = blocks[bb];
            if j != j2 {
                continue;
            }
            let coords = product(i, j, k, ka, kb)?;
            for (t, c) in coords.into_iter().enumerate() {
                table[a][b][start[i][k] + t] = c;
            }
        }
    }
    let mut trace = vec![FieldElem::zero(); dim];
    let mut identity = vec![FieldElem::zero(); dim];
    for (a, &(ba, ka)) in basis.iter().enumerate() {
        let (i, j, _) = blocks[ba];
        if i == j {
            trace[a] = scalar(i, ka)?;
        }
    }
    for i in 0..rank {
        if dims[i][i] != 1 {
            return Err(Error::Internal("a line bundle has a non-scalar endomorphism".into()));
        }
        identity[start[i][i]] = trace[start[i][i]]
            .inv()
            .ok_or_else(|| Error::Internal("the identity of a summand has trace zero".into()))?;
    }
    let alg = EndAlgebra { rank, blocks, basis, table, trace, identity };
    alg.check()?;
    Ok(alg)
}

/// `End(O(D_0) + ... + O(D_{r-1}))` with blocks `L(D_i - D_j)`.
pub fn end_algebra(e: &SplitBundle) -> Result<EndAlgebra> {
    let r = e.rank();
    let c = &e.curve;
    let mut spaces: Vec<Vec<FunctionBasis>> = Vec::with_capacity(r);
    for di in &e.divisors {
        let mut row = Vec::with_capacity(r);
        for dj in &e.divisors {
            row.push(rr_space(c, &(di - dj))?);
        }
        spaces.push(row);
    }
    let dims: Vec<Vec<usize>> = spaces.iter().map(|row| row.iter().map(FunctionBasis::dim).collect()).collect();
    let product = |i: usize, j: usize, k: usize, a: usize, b: usize| {
        let f = spaces[i][j].functions[a].mul(&spaces[j][k].functions[b], c);
        spaces[i][k].coordinates(c, &f).ok_or_else(|| Error::Internal("a composite of maps left its Hom space".into()))
    };
    let scalar = |i: usize, a: usize| {
        spaces[i][i].functions[a]
            .as_constant()
            .ok_or_else(|| Error::Internal("an endomorphism of a line bundle is not constant".into()))
    };
    assemble(r, &dims, product, scalar)
}

/// `End(O(m_0) + ... + O(m_{r-1}))` on the line, with blocks the
/// polynomials of degree at most `m_i - m_j`.
pub fn end_algebra_line(degrees: &[i64]) -> Result<EndAlgebra> {
    let r = degrees.len();
    let dims: Vec<Vec<usize>> =
        degrees.iter().map(|mi| degrees.iter().map(|mj| (mi - mj + 1).max(0) as usize).collect()).collect();
    let product = |i: usize, _j: usize, k: usize, a: usize, b: usize| {
        let mut v = vec![FieldElem::zero(); dims[i][k]];
        v[a + b] = FieldElem::one();
        Ok(v)
    };
    assemble(r, &dims, product, |_, _| Ok(FieldElem::one()))
}

/// The algebra of a constrained bundle, read off the split presentation
/// certified by a class matching.
pub fn end_algebra_constrained(u: &ConstrainedBundle, matching: &ClassMatch) -> Result<EndAlgebra> {
    if !matching.matched {
        return math("the bundle has no certified split presentation");
    }
    if matching.classes.len() != u.rank() {
        return Err(Error::Internal("class matching and bundle differ in rank".into()));
    }
    end_algebra(&SplitBundle::new(u.curve.clone(), matching.classes.clone())?)
}

/// True iff the trace-zero part of the algebra is nilpotent, i.e. the
/// bundle is indecomposable with endomorphisms `F + nilpotent`.
pub fn indecomposable_test(alg: &EndAlgebra) -> bool {
    let dim = alg.dim();
    let trace_row = Matrix::from_rows(dim, vec![alg.trace.clone()]);
    let kernel = trace_row.kernel();
    let mut power = Matrix::from_rows(dim, kernel.clone()).row_basis();
    for _ in 0..=dim {
        if power.nrows() == 0 {
            return true;
        }
        let mut rows = Vec::new();
        for p in power.rows() {
            for v in &kernel {
                rows.push(alg.mul(p, v));
            }
        }
        power = Matrix::from_rows(dim, rows).row_basis();
    }
    power.nrows() == 0
}
