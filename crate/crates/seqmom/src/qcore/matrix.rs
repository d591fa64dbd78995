use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the substrate for all operators and states.
///
/// Constructors take entries in row-major order and reject non-finite
/// values. Instances are immutable; all arithmetic returns new matrices.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Validation("matrix entry is not finite".into()));
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real_row_slice(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_slice(rows, cols, &complex)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub(crate) fn from_inner(inner: DMatrix<Complex64>) -> Self {
        Self { inner }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Exact complex matrix product; fails when the inner dimensions differ.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self::from_inner(&self.inner * &rhs.inner))
    }

    /// Kronecker product; output dimensions are the products of the inputs'.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        Self::from_inner(self.inner.kronecker(&rhs.inner))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        Self::from_inner(self.inner.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        self.inner.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        Self::from_inner(&self.inner * factor)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (&self.inner - self.inner.adjoint()).norm() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Real by construction.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(crate::qcore::HERMITICITY_TOL) {
            return Err(Error::Validation(
                "eigenvalue computation requires a Hermitian matrix".into(),
            ));
        }
        let mut eigs: Vec<f64> = self.inner.symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(eigs)
    }

    /// Largest entrywise absolute difference between two equal-shaped matrices.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert!(
            self.rows() == other.rows() && self.cols() == other.cols(),
            "max_abs_diff requires equal shapes"
        );
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self.max_abs_diff(other) <= tol
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        assert!(self.is_square(), "diagonal of a non-square matrix");
        (0..self.rows()).map(|i| self.inner[(i, i)].re).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, index: (usize, usize)) -> &Complex64 {
        &self.inner[index]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(
            self.rows() == rhs.rows() && self.cols() == rhs.cols(),
            "matrix addition requires equal shapes"
        );
        ComplexMatrix::from_inner(&self.inner + &rhs.inner)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(
            self.rows() == rhs.rows() && self.cols() == rhs.cols(),
            "matrix subtraction requires equal shapes"
        );
        ComplexMatrix::from_inner(&self.inner - &rhs.inner)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, factor: Complex64) -> ComplexMatrix {
        self.scale(factor)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, factor: f64) -> ComplexMatrix {
        self.scale(Complex64::new(factor, 0.0))
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_inner(-&self.inner)
    }
}
