//! Random instances for property checks and experiments.
//!
//! All generators take an explicit RNG so that a fixed seed reproduces the
//! same instances.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cmat::{polar_retract, CMatrix, SkewHermitian, Unitary, C64};
use crate::error::{Error, Result};
use crate::lie::MTangent;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn cmatrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Matrix with independent standard real Gaussian entries.
pub fn real_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), 0.0))
}

pub fn skew_hermitian<R: Rng + ?Sized>(rng: &mut R, k: usize) -> SkewHermitian {
    SkewHermitian::skew_part(&cmatrix(rng, k, k)).expect("square by construction")
}

/// Orthonormal-column matrix obtained by retracting a Gaussian matrix.
pub fn frame<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    loop {
        if let Ok(f) = polar_retract(&cmatrix(rng, rows, cols)) {
            return f;
        }
    }
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Unitary {
    Unitary::new(frame(rng, k, k)).expect("retracted square matrix is unitary")
}

/// A random X ∈ M_{m,n}(ℂ) with X*X = λIₙ: a random frame scaled by √λ.
pub fn star_tangent<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    lambda: f64,
) -> Result<MTangent> {
    if n > m {
        return Err(Error::Input(format!("need n <= m, got n={n}, m={m}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Input(format!("need λ > 0, got {lambda}")));
    }
    MTangent::new(frame(rng, m, n).scale_re(lambda.sqrt()))
}

/// A random flat pair: X, Y built from 2n real orthonormal columns of ℝᵐ,
/// both scaled by √λ, so X*X = Y*Y = λIₙ and X*Y = 0.
pub fn flat_pair<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    lambda: f64,
) -> Result<(MTangent, MTangent)> {
    if m < 2 * n {
        return Err(Error::Input(format!(
            "a flat pair needs m >= 2n real orthonormal columns, got n={n}, m={m}"
        )));
    }
    let q = loop {
        if let Ok(q) = polar_retract(&real_matrix(rng, m, 2 * n)) {
            break q;
        }
    };
    let s = lambda.sqrt();
    let x = q.block(0, 0, m, n).scale_re(s);
    let y = q.block(0, n, m, n).scale_re(s);
    Ok((MTangent::new(x)?, MTangent::new(y)?))
}

/// Uniform point on S³ as quaternion coordinates.
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng), normal(rng)];
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.map(|x| x / norm);
        }
    }
}
