//! Small dense solvers over [`Real`]: Householder least squares and LU with
//! partial pivoting. Matrices are row-major `Vec<T>` with explicit shape.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }
}

/// Solves `min ‖A x − b‖₂` by Householder QR.
///
/// Fails with [`Error::RankDeficient`] when a diagonal entry of R falls below
/// ε^(2/3) times the largest one.
pub fn least_squares<T: Real>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::Underdetermined {
            needed: n,
            available: m,
        });
    }
    assert_eq!(b.len(), m);
    // Column-major working copy keeps each Householder sweep contiguous.
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut rhs = b.to_vec();
    let mut diag = vec![T::zero(); n];

    for k in 0..n {
        let norm = cols[k][k..].iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm == T::zero() {
            diag[k] = T::zero();
            continue;
        }
        let alpha = if cols[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|&x| x * x).sum();
        diag[k] = alpha;
        if vnorm2 == T::zero() {
            continue;
        }
        let two = T::lit(2.0);
        for col in cols.iter_mut().skip(k + 1) {
            let dot: T = v.iter().zip(&col[k..]).map(|(&a, &b)| a * b).sum();
            let f = two * dot / vnorm2;
            for (c, &vi) in col[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        let dot: T = v.iter().zip(&rhs[k..]).map(|(&a, &b)| a * b).sum();
        let f = two * dot / vnorm2;
        for (c, &vi) in rhs[k..].iter_mut().zip(&v) {
            *c -= f * vi;
        }
    }

    let scale = diag.iter().fold(T::zero(), |acc, &d| acc.max(d.abs()));
    if scale == T::zero() || diag.iter().any(|&d| d.abs() <= T::rank_tolerance() * scale) {
        return Err(Error::RankDeficient);
    }

    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        for (j, xj) in x.iter().enumerate().skip(k + 1) {
            acc -= cols[j][k] * *xj;
        }
        x[k] = acc / diag[k];
    }
    Ok(x)
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Fails with [`Error::Singular`] when a pivot is below ε^(2/3) times the
    /// largest absolute entry of the matrix.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        let n = a.rows();
        assert_eq!(n, a.cols(), "LU needs a square matrix");
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = lu.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
        if scale == T::zero() {
            return Err(Error::Singular);
        }
        let tol = T::rank_tolerance() * scale;
        for k in 0..n {
            let (piv, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmax > tol) {
                return Err(Error::Singular);
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let u = lu[k * n + j];
                        lu[i * n + j] -= f * u;
                    }
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * y[j];
            }
            y[i] = acc / self.lu[i * n + i];
        }
        y
    }
}
