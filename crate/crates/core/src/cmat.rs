//! Dense complex matrices.
//!
//! [`CMatrix`] is a thin finite-only wrapper over `nalgebra::DMatrix<Complex64>`.
//! [`SkewHermitian`] and [`Unitary`] are validated newtypes for elements of
//! 𝔲(k) and U(k). The exponential of a skew-Hermitian matrix goes through a
//! Hermitian eigendecomposition so that its output is unitary to round-off.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{shape, Error, Result};
use crate::tolerance;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

const EIGEN_MAX_ITER: usize = 10_000;

/// A dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, row_major: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(shape("positive dimensions", format!("{rows}x{cols}")));
        }
        if row_major.len() != rows * cols {
            return Err(shape(
                format!("{} entries for {rows}x{cols}", rows * cols),
                format!("{} entries", row_major.len()),
            ));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &row_major))
    }

    /// Wraps an nalgebra matrix, rejecting NaN and infinite entries.
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real(rows: usize, cols: usize, row_major: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            row_major.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(k: usize) -> Self {
        Self(DMatrix::identity(k, k))
    }

    /// The first `cols` columns of the `rows × rows` identity.
    pub fn coordinate_frame(rows: usize, cols: usize) -> Self {
        Self(DMatrix::from_fn(rows, cols, |i, j| {
            if i == j {
                ONE
            } else {
                ZERO
            }
        }))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let k = entries.len();
        Self(DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                entries[i]
            } else {
                ZERO
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn norm_fro(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        let (r, c) = self.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    /// Entries in column-major order (vec(F)).
    pub fn col_major(&self) -> Vec<C64> {
        self.0.iter().copied().collect()
    }

    /// Copies the `nrows × ncols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        Self(self.0.view((r0, c0), (nrows, ncols)).into_owned())
    }

    /// Assembles `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows() != b.rows()
            || c.rows() != d.rows()
            || a.cols() != c.cols()
            || b.cols() != d.cols()
        {
            return Err(shape(
                "compatible 2x2 block layout",
                format!(
                    "{:?} {:?} / {:?} {:?}",
                    a.shape(),
                    b.shape(),
                    c.shape(),
                    d.shape()
                ),
            ));
        }
        let (r1, c1) = a.shape();
        let (r, cc) = (r1 + c.rows(), c1 + b.cols());
        Ok(Self(DMatrix::from_fn(r, cc, |i, j| {
            match (i < r1, j < c1) {
                (true, true) => a.0[(i, j)],
                (true, false) => b.0[(i, j - c1)],
                (false, true) => c.0[(i - r1, j)],
                (false, false) => d.0[(i - r1, j - c1)],
            }
        })))
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖self − other‖_F.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm_fro()
    }

    /// ‖self*·self − I‖_F.
    pub fn orthonormality_residual(&self) -> f64 {
        let g = self.adjoint() * self;
        (&g - &Self::identity(self.cols())).norm_fro()
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(shape(
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ))
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            write!(f, "[")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(self.0 $op rhs.0)
            }
        }
        impl $tr<&CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-self.0)
    }
}

/// trace(A*·B).
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    a.check_same_shape(b)?;
    Ok(a.0.iter().zip(b.0.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// An element of 𝔲(k).
#[derive(Clone, Debug, PartialEq)]
pub struct SkewHermitian(CMatrix);

impl SkewHermitian {
    pub fn new(a: CMatrix) -> Result<Self> {
        Self::with_tolerance(a, tolerance::SKEW)
    }

    /// Validates ‖A + A*‖_F ≤ tol·(1 + ‖A‖_F).
    pub fn with_tolerance(a: CMatrix, tol: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(shape("square matrix", format!("{:?}", a.shape())));
        }
        let residual = (&a + &a.adjoint()).norm_fro();
        if residual > tol * (1.0 + a.norm_fro()) {
            return Err(Error::NotSkewHermitian { residual });
        }
        Ok(Self(a))
    }

    /// The skew-Hermitian part (A − A*)/2 of any square matrix.
    pub fn skew_part(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(shape("square matrix", format!("{:?}", a.shape())));
        }
        Ok(Self((a - &a.adjoint()).scale_re(0.5)))
    }

    pub(crate) fn from_matrix_unchecked(a: CMatrix) -> Self {
        Self(a)
    }

    pub fn zeros(k: usize) -> Self {
        Self(CMatrix::zeros(k, k))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale_re(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.0.check_same_shape(&other.0)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn neg(&self) -> Self {
        Self(-&self.0)
    }
}

/// An element of U(k).
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary(CMatrix);

impl Unitary {
    pub fn new(u: CMatrix) -> Result<Self> {
        Self::with_tolerance(u, tolerance::UNITARY)
    }

    pub fn with_tolerance(u: CMatrix, tol: f64) -> Result<Self> {
        if !u.is_square() {
            return Err(shape("square matrix", format!("{:?}", u.shape())));
        }
        let residual = u.orthonormality_residual();
        if residual > tol {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self(u))
    }

    pub fn identity(k: usize) -> Self {
        Self(CMatrix::identity(k))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.0.check_same_shape(&other.0)?;
        Ok(Self(&self.0 * &other.0))
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues and a unitary
/// matrix of eigenvectors (columns).
pub(crate) fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (h + &h.adjoint()).scale_re(0.5);
    let eig = SymmetricEigen::try_new(sym.0, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::Eigen("Hermitian eigensolver did not converge".into()))?;
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    Ok((values, CMatrix(eig.eigenvectors)))
}

/// Q·diag(f(λ))·Q*.
fn spectral_apply(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let q = &vectors.0;
    let mut scaled = q.clone();
    for (j, &v) in values.iter().enumerate() {
        let fv = f(v);
        for i in 0..q.nrows() {
            scaled[(i, j)] *= fv;
        }
    }
    CMatrix(scaled * q.adjoint())
}

/// Spectral data of a skew-Hermitian A: −iA = Q·diag(λ)·Q*.
///
/// Lets exp(tA) be evaluated for many t from one eigendecomposition.
#[derive(Clone, Debug)]
pub struct SkewSpectrum {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl SkewSpectrum {
    pub fn new(a: &SkewHermitian) -> Result<Self> {
        let (values, vectors) = hermitian_eigen(&a.0.scale(-I))?;
        Ok(Self { values, vectors })
    }

    /// exp(tA) = Q·diag(e^{itλ})·Q*.
    pub fn exp(&self, t: f64) -> Result<Unitary> {
        let u = spectral_apply(&self.values, &self.vectors, |l| C64::from_polar(1.0, t * l));
        Unitary::new(u)
    }
}

/// exp(A) for skew-Hermitian A, via the eigendecomposition of the
/// Hermitian matrix −iA: exp(A) = Q·diag(e^{iλ})·Q*.
pub fn expm_skew(a: &SkewHermitian) -> Result<Unitary> {
    SkewSpectrum::new(a)?.exp(1.0)
}

/// Closest matrix with orthonormal columns: M(M*M)^{−1/2}.
pub fn polar_retract(m: &CMatrix) -> Result<CMatrix> {
    if m.rows() < m.cols() {
        return Err(shape("rows >= cols", format!("{:?}", m.shape())));
    }
    let gram = m.adjoint() * m;
    let (values, vectors) = hermitian_eigen(&gram)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let sigma_min = min.max(0.0).sqrt();
    if !(sigma_min > tolerance::RANK) {
        return Err(Error::RankDeficient { sigma_min });
    }
    let inv_sqrt = spectral_apply(&values, &vectors, |l| C64::new(l.powf(-0.5), 0.0));
    Ok(m * inv_sqrt)
}
