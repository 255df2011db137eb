//! Small dense square matrices over rings used in this crate.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::Prime;
use crate::error::{Error, Result};
use crate::laurent::{checked_div, RationalFunction};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

pub type RationalFunctionMatrix = Matrix<RationalFunction>;

impl<T> Matrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("matrix must be nonempty".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("matrix is not square ({n} rows)")));
        }
        Ok(Matrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n)
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { n: self.n, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i].clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<'a, T> Mul for &'a Matrix<T>
where
    T: Zero + Clone,
    &'a T: Mul<&'a T, Output = T>,
{
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + (&self[(i, k)] * &rhs[(k, j)]);
            }
            acc
        })
    }
}

impl<'a, T> Add for &'a Matrix<T>
where
    &'a T: Add<&'a T, Output = T>,
{
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a, T> Sub for &'a Matrix<T>
where
    &'a T: Sub<&'a T, Output = T>,
{
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl RationalFunctionMatrix {
    /// Entrywise `d/dx`.
    pub fn derivative(&self) -> Self {
        self.map(RationalFunction::derivative)
    }

    /// Determinant by fraction-field Gaussian elimination.
    pub fn det(&self) -> RationalFunction {
        let n = self.n;
        let mut a = self.clone();
        let mut det = RationalFunction::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return RationalFunction::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let pv = a[(col, col)].clone();
            det = &det * &pv;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &pv;
                for j in col..n {
                    let t = &factor * &a[(col, j)];
                    a[(r, j)] = &a[(r, j)] - &t;
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan elimination; fails when singular.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::InvalidGauge("matrix is singular".into()))?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let pv = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = checked_div(&a[(col, j)], &pv)?;
                inv[(col, j)] = checked_div(&inv[(col, j)], &pv)?;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let t = &factor * &a[(col, j)];
                    a[(r, j)] = &a[(r, j)] - &t;
                    let t = &factor * &inv[(col, j)];
                    inv[(r, j)] = &inv[(r, j)] - &t;
                }
            }
        }
        Ok(inv)
    }

    /// `f(x^k)` entrywise.
    pub fn compose_power(&self, k: u64) -> Self {
        self.map(|f| f.compose_power(k))
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        self.map(|f| c * f)
    }

    pub fn pole_log_magnitudes(&self, p: Prime) -> Vec<crate::arith::Rational> {
        let mut all: Vec<_> = self.entries().flat_map(|f| f.pole_log_magnitudes(p)).collect();
        all.sort();
        all.dedup();
        all
    }

    /// Rows of strings in the parser grammar.
    pub fn to_strings(&self, var: &str) -> Vec<Vec<String>> {
        self.rows().map(|r| r.iter().map(|f| f.to_string_with(var)).collect()).collect()
    }
}

impl Serialize for RationalFunctionMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.to_strings("x");
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}
