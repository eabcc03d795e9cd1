//! Dense matrices over an exact field, with reduced row echelon form as the
//! canonical form of a row space.

use std::fmt;

use super::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_cols(rows: usize, cols: Vec<Vec<S>>) -> Self {
        Matrix::from_rows(cols.len(), cols).transpose_with_rows(rows)
    }

    fn transpose_with_rows(self, rows: usize) -> Self {
        // `self` holds the columns as rows
        let t = self.transpose();
        assert_eq!(t.rows, rows);
        t
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Matrix<S> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// In-place Gauss-Jordan elimination; returns pivot columns.
    fn eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).filter(|&i| !self[(i, c)].is_zero()).min_by_key(|&i| self[(i, c)].size())
            else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].inv().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(r, j)].clone();
                    if !v.is_zero() {
                        self[(i, j)] = self[(i, j)].clone() - f.clone() * v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form (same shape, zero rows last) and pivots.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.eliminate();
        (m, p)
    }

    pub fn rref(&self) -> Self {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_basis(&self) -> Self {
        let (m, p) = self.rref_with_pivots();
        Matrix { rows: p.len(), cols: self.cols, data: m.data[..p.len() * self.cols].to_vec() }
    }

    /// Basis of the right kernel `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let (m, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left kernel `{w : w * self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<S>> {
        self.transpose().kernel()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let p = aug.eliminate();
        if p.len() < n || p[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Some solution `x` of `self * x = b`.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.eliminate();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return S::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let v = m[(c, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * v;
                }
            }
        }
        det
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Rank of a list of equal-length vectors.
pub fn rank_of<S: Scalar>(vectors: &[Vec<S>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(dim, vectors.to_vec()).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        let cols = rows[0].len();
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| Rat::from_i64(x)).collect()).collect())
    }

    #[test]
    fn rref_keeps_shape() {
        assert_eq!(m(&[&[2, 4], &[1, 2]]).rref(), m(&[&[1, 2], &[0, 0]]));
        assert_eq!(m(&[&[0, 0], &[0, 3]]).rref(), m(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn kernel_and_inverse() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let b = m(&[&[2, 1], &[1, 1]]);
        let bi = b.inverse().unwrap();
        assert_eq!(b.mul(&bi), Matrix::identity(2));
        assert_eq!(b.determinant(), Rat::from_i64(1));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = a.solve(&[Rat::from_i64(3), Rat::from_i64(1)]).unwrap();
        assert_eq!(x, vec![Rat::from_i64(2), Rat::from_i64(1)]);
        let s = m(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[Rat::from_i64(1), Rat::from_i64(3)]).is_none());
    }
}
