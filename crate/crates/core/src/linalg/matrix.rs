use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Entry, Scalar};

/// Dense row-major matrix over a real or complex entry type.
#[derive(Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Dense complex matrix, the substrate of every domain in this crate.
pub type ComplexMatrix<T> = Matrix<Complex<T>>;

/// Dense real matrix (SPD points, rotations, symplectic group elements).
pub type RealMatrix<T> = Matrix<T>;

impl<E: Entry> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![E::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = E::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<E>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_diag(diag: &[E]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// `s * I`.
    pub fn scalar(n: usize, s: E) -> Self {
        Self::from_diag(&vec![s; n])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<E> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn map(&self, f: impl Fn(E) -> E) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| f(e)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(E::conj)
    }

    pub fn scale(&self, r: E::Real) -> Self {
        self.map(|e| e.scale(r))
    }

    pub fn scale_by(&self, s: E) -> Self {
        self.map(|e| e * s)
    }

    pub fn trace(&self) -> E {
        self.diag().into_iter().fold(E::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> E::Real {
        self.data
            .iter()
            .map(|e| e.norm_sqr())
            .fold(E::Real::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> E::Real {
        self.data
            .iter()
            .map(|e| e.modulus())
            .fold(E::Real::zero(), |a, b| a.max(b))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|e| e.finite())
    }

    /// `(a + aᴴ) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = E::Real::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()).scale(half)
        })
    }

    /// `(a + aᵀ) / 2`.
    pub fn symmetric_part(&self) -> Self {
        let half = E::Real::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)]).scale(half)
        })
    }

    /// `‖a − aᴴ‖_F`.
    pub fn hermitian_residual(&self) -> E::Real {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// `‖a − aᵀ‖_F`.
    pub fn symmetric_residual(&self) -> E::Real {
        (self - &self.transpose()).frobenius_norm()
    }

    /// `I − self`.
    pub fn identity_minus(&self) -> Self {
        let mut m = self.map(|e| -e);
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += E::one();
        }
        m
    }

    /// `I + self`.
    pub fn identity_plus(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += E::one();
        }
        m
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        let mut m = Self::zeros(2 * n, 2 * n);
        m.set_block(0, 0, a);
        m.set_block(0, n, b);
        m.set_block(n, 0, c);
        m.set_block(n, n, d);
        m
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self * rhs)
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape(format!(
                "{what} must be square, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub(crate) fn require_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn to_complex(&self) -> ComplexMatrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&r| Complex::new(r, T::zero())).collect(),
        }
    }
}

impl<T: Scalar> Matrix<Complex<T>> {
    pub fn from_parts(re: &RealMatrix<T>, im: &RealMatrix<T>) -> Result<Self> {
        re.require_same_shape(im, "real and imaginary parts")?;
        Ok(Matrix {
            rows: re.rows,
            cols: re.cols,
            data: re
                .data
                .iter()
                .zip(&im.data)
                .map(|(&a, &b)| Complex::new(a, b))
                .collect(),
        })
    }

    pub fn re(&self) -> RealMatrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.re).collect(),
        }
    }

    pub fn im(&self) -> RealMatrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<E: Entry> Add for &Matrix<E> {
    type Output = Matrix<E>;

    fn add(self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<E: Entry> Sub for &Matrix<E> {
    type Output = Matrix<E>;

    fn sub(self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<E: Entry> Neg for &Matrix<E> {
    type Output = Matrix<E>;

    fn neg(self) -> Matrix<E> {
        self.map(|e| -e)
    }
}

impl<E: Entry> Mul for &Matrix<E> {
    type Output = Matrix<E>;

    fn mul(self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == E::zero() {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<E: Entry> $tr for Matrix<E> {
            type Output = Matrix<E>;
            fn $m(self, rhs: Matrix<E>) -> Matrix<E> {
                (&self).$m(&rhs)
            }
        }
        impl<E: Entry> $tr<&Matrix<E>> for Matrix<E> {
            type Output = Matrix<E>;
            fn $m(self, rhs: &Matrix<E>) -> Matrix<E> {
                (&self).$m(rhs)
            }
        }
        impl<E: Entry> $tr<Matrix<E>> for &Matrix<E> {
            type Output = Matrix<E>;
            fn $m(self, rhs: Matrix<E>) -> Matrix<E> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<E: Entry> Neg for Matrix<E> {
    type Output = Matrix<E>;

    fn neg(self) -> Matrix<E> {
        -&self
    }
}

impl<E: Entry> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for e in self.row(i) {
                if e.im() == E::Real::zero() {
                    write!(f, " {:.6}", e.re())?;
                } else {
                    write!(f, " {:.6}{:+.6}i", e.re(), e.im())?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
