//! The Lie algebra 𝔲(n+m) split as 𝔥 + 𝔪.
//!
//! 𝔥 = 𝔲(n) + 𝔲(m) is the block-diagonal part; 𝔪 is the off-diagonal part,
//! parametrized by X ∈ M_{m,n}(ℂ) through the hat map
//!
//! ```text
//! X̂ = [ 0  −X* ]
//!     [ X    0 ]
//! ```
//!
//! The metric on 𝔲(k) is −½·Re tr(AB), which makes the basis
//! `A = [[0,−1],[1,0]]`, `B = [[0,i],[i,0]]`, `C = diag(−i,i)` of 𝔰𝔲(2)
//! orthonormal.

use crate::cmat::{CMatrix, SkewHermitian, C64, I, ONE, ZERO};
use crate::error::{shape, Error, Result};
use crate::tolerance;

/// X ∈ M_{m,n}(ℂ), standing for X̂ ∈ 𝔪 ⊂ 𝔲(n+m).
#[derive(Clone, Debug, PartialEq)]
pub struct MTangent {
    x: CMatrix,
}

impl MTangent {
    /// Wraps an m×n matrix (m rows, n columns).
    pub fn new(x: CMatrix) -> Result<Self> {
        Ok(Self { x })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            x: CMatrix::zeros(m, n),
        }
    }

    pub fn n(&self) -> usize {
        self.x.cols()
    }

    pub fn m(&self) -> usize {
        self.x.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.x
    }

    pub fn into_matrix(self) -> CMatrix {
        self.x
    }

    /// The k-th column X_k ∈ ℂᵐ (0-based).
    pub fn column(&self, k: usize) -> Vec<C64> {
        self.x.column(k)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { x: self.x.scale(c) }
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        self.x.check_same_shape(&other.x)
    }
}

/// An element of 𝔥 = 𝔲(n) + 𝔲(m).
#[derive(Clone, Debug, PartialEq)]
pub struct HPart {
    pub a: SkewHermitian,
    pub b: SkewHermitian,
}

impl HPart {
    /// block-diag(A, B).
    pub fn assemble(&self) -> SkewHermitian {
        let (n, m) = (self.a.dim(), self.b.dim());
        let full = CMatrix::from_blocks(
            self.a.matrix(),
            &CMatrix::zeros(n, m),
            &CMatrix::zeros(m, n),
            self.b.matrix(),
        )
        .expect("block shapes agree");
        SkewHermitian::from_matrix_unchecked(full)
    }
}

/// h(v, w) = v*w.
pub fn hermitian_h(v: &[C64], w: &[C64]) -> Result<C64> {
    if v.len() != w.len() {
        return Err(shape(
            format!("length {}", v.len()),
            format!("length {}", w.len()),
        ));
    }
    Ok(v.iter().zip(w).map(|(a, b)| a.conj() * b).sum())
}

/// The hat map X ↦ [[0, −X*], [X, 0]].
pub fn hat(x: &MTangent) -> SkewHermitian {
    let (n, m) = (x.n(), x.m());
    let full = CMatrix::from_blocks(
        &CMatrix::zeros(n, n),
        &(-x.x.adjoint()),
        &x.x,
        &CMatrix::zeros(m, m),
    )
    .expect("block shapes agree");
    SkewHermitian::from_matrix_unchecked(full)
}

/// Inverse of [`hat`]: the lower-left m×n block, provided the 𝔥-blocks vanish.
pub fn unhat(a: &SkewHermitian, n: usize) -> Result<MTangent> {
    unhat_with_tolerance(a, n, tolerance::UNHAT)
}

pub fn unhat_with_tolerance(a: &SkewHermitian, n: usize, tol: f64) -> Result<MTangent> {
    let k = a.dim();
    if n == 0 || n >= k {
        return Err(shape(format!("0 < n < {k}"), format!("n = {n}")));
    }
    let m = k - n;
    let mat = a.matrix();
    let h = mat
        .block(0, 0, n, n)
        .norm_fro()
        .hypot(mat.block(n, n, m, m).norm_fro());
    if h > tol * (1.0 + mat.norm_fro()) {
        return Err(Error::NotInM { residual: h });
    }
    MTangent::new(mat.block(n, 0, m, n))
}

/// Splits A ∈ 𝔲(n+m) into its 𝔥 and 𝔪 components.
pub fn hm_decompose(a: &SkewHermitian, n: usize) -> Result<(HPart, MTangent)> {
    let k = a.dim();
    if n == 0 || n >= k {
        return Err(shape(format!("0 < n < {k}"), format!("n = {n}")));
    }
    let m = k - n;
    let mat = a.matrix();
    let h = HPart {
        a: SkewHermitian::from_matrix_unchecked(mat.block(0, 0, n, n)),
        b: SkewHermitian::from_matrix_unchecked(mat.block(n, n, m, m)),
    };
    Ok((h, MTangent::new(mat.block(n, 0, m, n))?))
}

/// [A, B] = AB − BA.
pub fn bracket(a: &SkewHermitian, b: &SkewHermitian) -> Result<SkewHermitian> {
    a.matrix().check_same_shape(b.matrix())?;
    let c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    // Exact in exact arithmetic; drop the Hermitian round-off.
    SkewHermitian::skew_part(&c)
}

/// ⟨A, B⟩ = −½·Re tr(AB).
pub fn metric_inner(a: &SkewHermitian, b: &SkewHermitian) -> Result<f64> {
    a.matrix().check_same_shape(b.matrix())?;
    let (am, bm) = (a.matrix().inner(), b.matrix().inner());
    let k = a.dim();
    let mut tr = 0.0;
    for i in 0..k {
        for j in 0..k {
            tr += (am[(i, j)] * bm[(j, i)]).re;
        }
    }
    Ok(-0.5 * tr)
}

/// The coefficient matrix Z of [[X̂, Ŷ], X̂] = Ẑ, entry by entry:
///
/// ```text
/// α^r_k = Σ_j X_{rj}·(−2h(Y_j, X_k) + h(X_j, Y_k)) + Σ_j Y_{rj}·h(X_j, X_k)
/// ```
pub fn lemma_coeffs(x: &MTangent, y: &MTangent) -> Result<MTangent> {
    x.check_same_shape(y)?;
    let (n, m) = (x.n(), x.m());
    let xc: Vec<Vec<C64>> = (0..n).map(|k| x.column(k)).collect();
    let yc: Vec<Vec<C64>> = (0..n).map(|k| y.column(k)).collect();

    // h-tables indexed [j][k]
    let mut h_yx = vec![vec![ZERO; n]; n];
    let mut h_xy = vec![vec![ZERO; n]; n];
    let mut h_xx = vec![vec![ZERO; n]; n];
    for j in 0..n {
        for k in 0..n {
            h_yx[j][k] = hermitian_h(&yc[j], &xc[k])?;
            h_xy[j][k] = hermitian_h(&xc[j], &yc[k])?;
            h_xx[j][k] = hermitian_h(&xc[j], &xc[k])?;
        }
    }

    let xm = x.matrix();
    let ym = y.matrix();
    let z = CMatrix::from_fn(m, n, |r, k| {
        (0..n)
            .map(|j| xm[(r, j)] * (h_yx[j][k] * -2.0 + h_xy[j][k]) + ym[(r, j)] * h_xx[j][k])
            .sum()
    });
    MTangent::new(z)
}

/// [[X̂, Ŷ], X̂] by raw multiplication, X̂(2ŶX̂ − X̂Ŷ) − ŶX̂X̂, then unhat.
pub fn double_bracket_oracle(x: &MTangent, y: &MTangent) -> Result<MTangent> {
    x.check_same_shape(y)?;
    let xh = hat(x).into_matrix();
    let yh = hat(y).into_matrix();
    let inner = (&yh * &xh).scale_re(2.0) - &xh * &yh;
    let z = &xh * &inner - &yh * &xh * &xh;
    unhat(&SkewHermitian::skew_part(&z)?, x.n())
}

/// Least-squares scalar fit s = tr(G)/k of a square matrix, with the
/// residual ‖G − sI‖_F.
pub fn scalar_fit(g: &CMatrix) -> (C64, f64) {
    let k = g.rows();
    let s = g.trace() / k as f64;
    let residual = (g - &CMatrix::identity(k).scale(s)).norm_fro();
    (s, residual)
}

/// Images of the 𝔰𝔲(2) generators A, B, C under the monomorphism
/// aA + bB + cC ↦ a·X̂_u + b·(iX_u)^ + c·K built from X_u = X/√λ.
#[derive(Clone, Debug)]
pub struct Su2Embedding {
    pub lambda: f64,
    /// X_u = X/√λ, so X_u*X_u = Iₙ.
    pub x_unit: MTangent,
    /// hat(X_u), image of A.
    pub a: SkewHermitian,
    /// hat(iX_u), image of B.
    pub b: SkewHermitian,
    /// block-diag(−iIₙ, iX_uX_u*), image of C.
    pub k: SkewHermitian,
}

/// Builds the 𝔰𝔲(2) embedding for X with X*X = λIₙ, λ > 0.
pub fn su2_embed(x: &MTangent) -> Result<Su2Embedding> {
    su2_embed_with_tolerance(x, tolerance::STAR)
}

pub fn su2_embed_with_tolerance(x: &MTangent, tol: f64) -> Result<Su2Embedding> {
    let gram = x.matrix().adjoint() * x.matrix();
    let (s, residual) = scalar_fit(&gram);
    let scale = 1.0 + gram.norm_fro();
    if residual > tol * scale || s.im.abs() > tol * scale {
        return Err(Error::StarViolation {
            reason: format!("X*X is not a real scalar matrix (residual {residual:e})"),
            gram,
        });
    }
    let lambda = s.re;
    if !(lambda > tol * scale) {
        return Err(Error::StarViolation {
            reason: format!("X*X = λI needs λ > 0, got λ = {lambda:e}"),
            gram,
        });
    }
    let x_unit = x.scale(C64::new(1.0 / lambda.sqrt(), 0.0));
    let (n, m) = (x.n(), x.m());
    let xx = x_unit.matrix() * x_unit.matrix().adjoint();
    let k = CMatrix::from_blocks(
        &CMatrix::identity(n).scale(-I),
        &CMatrix::zeros(n, m),
        &CMatrix::zeros(m, n),
        &xx.scale(I),
    )?;
    Ok(Su2Embedding {
        lambda,
        a: hat(&x_unit),
        b: hat(&x_unit.scale(I)),
        k: SkewHermitian::skew_part(&k)?,
        x_unit,
    })
}

/// The 2×2 complex generators (A, B, C) of 𝔰𝔲(2): A = hat(1), B = hat(i),
/// C = diag(−i, i). They satisfy [A,B] = 2C, [C,A] = 2B, [C,B] = −2A.
pub fn su2_basis() -> [SkewHermitian; 3] {
    let one = MTangent::new(CMatrix::new(1, 1, vec![ONE]).expect("1x1")).expect("1x1");
    let a = hat(&one);
    let b = hat(&one.scale(I));
    let c = SkewHermitian::from_matrix_unchecked(CMatrix::diagonal(&[-I, I]));
    [a, b, c]
}
