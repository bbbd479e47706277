use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

use super::{EPS_HERM, EPS_UNIT};
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Square, finite, dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Wraps a matrix produced by arithmetic on already-validated operands.
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    pub fn from_row_slice(n: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Domain(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub(crate) fn check_same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

/// Hermitian matrix, symmetrized on construction.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Accepts `m` when `‖m − m*‖_F ≤ EPS_HERM·‖m‖_F` and stores `(m + m*)/2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = (m.as_matrix() - m.as_matrix().adjoint()).norm();
        let bound = EPS_HERM * m.frobenius_norm();
        if residual > bound {
            return Err(Error::NotHermitian { residual, bound });
        }
        Ok(Self::symmetrize(m))
    }

    pub(crate) fn symmetrize(m: ComplexMatrix) -> Self {
        let mut a = m.into_matrix();
        let n = a.nrows();
        for i in 0..n {
            a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
                a[(i, j)] = v;
                a[(j, i)] = v.conj();
            }
        }
        Self(ComplexMatrix(a))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    /// `Σ λ_k v_k v_k*` for orthonormal columns `v_k` of `basis`.
    pub fn from_spectrum(basis: &DMatrix<C64>, values: &[f64]) -> Self {
        let scaled = DMatrix::from_fn(basis.nrows(), basis.ncols(), |i, j| basis[(i, j)] * values[j]);
        Self::symmetrize(ComplexMatrix(scaled * basis.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        Self::symmetrize(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        Self::symmetrize(&self.0 - &other.0)
    }

    /// `u·self·u*`.
    pub fn conjugate_by(&self, u: &UnitaryMatrix) -> Self {
        Self::symmetrize(u.mat() * &self.0 * u.mat().adjoint())
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix{}", self.0.as_matrix())
    }
}

/// Unitary matrix, projected onto its polar factor on construction.
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    /// Accepts `m` when `‖m*m − I‖_F ≤ EPS_UNIT·√n` and stores its polar factor.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = unitarity_defect(m.as_matrix());
        let bound = EPS_UNIT * (m.dim() as f64).sqrt();
        if residual > bound {
            return Err(Error::NotUnitary { residual, bound });
        }
        Ok(Self::project(m))
    }

    /// Polar projection of a matrix already known to be unitary up to rounding.
    pub(crate) fn project(m: ComplexMatrix) -> Self {
        let n = m.dim();
        let mut x = m.into_matrix();
        let target = 16.0 * f64::EPSILON * n as f64;
        // Newton–Schulz polar iteration; quadratic from any near-unitary start.
        for _ in 0..6 {
            let gram = x.adjoint() * &x;
            let defect = (&gram - DMatrix::<C64>::identity(n, n)).norm();
            if defect <= target {
                break;
            }
            let corr = DMatrix::<C64>::identity(n, n) * C64::new(1.5, 0.0) - gram * C64::new(0.5, 0.0);
            x = x * corr;
        }
        Self(ComplexMatrix(x))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    /// Diagonal unitary `diag(e^{iθ_k})`.
    pub fn from_angles(angles: &[f64]) -> Self {
        let d: Vec<C64> = angles.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        Self(ComplexMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Group product `self·other`.
    pub fn compose(&self, other: &UnitaryMatrix) -> Self {
        Self::project(&self.0 * &other.0)
    }

    /// `self* · other`, the relative displacement from `self` to `other`.
    pub fn between(&self, other: &UnitaryMatrix) -> Self {
        Self::project(self.0.adjoint() * &other.0)
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitaryMatrix{}", self.0.as_matrix())
    }
}

pub(crate) fn unitarity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - DMatrix::<C64>::identity(n, n)).norm()
}
