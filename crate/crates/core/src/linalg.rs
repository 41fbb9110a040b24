//! Small dense matrix type for the scalar-generic code paths.
//!
//! The f64-only analyses (eigenproblems, time stepping) use `faer` directly;
//! this type only has to support the differentiation matrices and the
//! modest linear solves of the one-dimensional operators.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Dense<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = *d + a * s;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| v * s).collect() }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: T, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + s * b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Solves `self * x = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = rhs.to_vec();
        let scale = self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().partial_cmp(&a[(j, col)].abs()).unwrap())
                .unwrap();
            if a[(pivot, col)].abs() <= scale * T::eps() {
                return Err(Error::SingularSystem("dense solve".into()));
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                x.swap(pivot, col);
            }
            let p = a[(col, col)];
            for i in col + 1..n {
                let f = a[(i, col)] / p;
                if f == T::zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[(col, j)];
                    a[(i, j)] = a[(i, j)] - f * v;
                }
                x[i] = x[i] - f * x[col];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - a[(i, j)] * x[j];
            }
            x[i] = s / a[(i, i)];
        }
        Ok(x)
    }
}

impl<T> Index<(usize, usize)> for Dense<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Dense<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
