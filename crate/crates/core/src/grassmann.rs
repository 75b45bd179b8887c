//! Stiefel frames, Grassmann projectors and the SU(2) model of ℂP¹.
//!
//! A point of U(n+m)/U(m) is an (n+m)×n matrix F with orthonormal columns;
//! its image in G_{n,m} is the rank-n projector P = FF*. The structure group
//! U(n) acts on frames from the right and leaves P unchanged.

use nalgebra::Matrix4;

use crate::cmat::{expm_skew, CMatrix, Unitary, C64};
use crate::error::{shape, Error, Result};
use crate::lie::{hat, MTangent};
use crate::tolerance;

/// An orthonormal n-frame in ℂ^{n+m}.
#[derive(Clone, Debug, PartialEq)]
pub struct StiefelFrame {
    f: CMatrix,
}

impl StiefelFrame {
    pub fn new(f: CMatrix) -> Result<Self> {
        Self::with_tolerance(f, tolerance::FRAME)
    }

    pub fn with_tolerance(f: CMatrix, tol: f64) -> Result<Self> {
        if f.rows() <= f.cols() {
            return Err(shape("(n+m)×n with m >= 1", format!("{:?}", f.shape())));
        }
        let residual = f.orthonormality_residual();
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self { f })
    }

    pub(crate) fn from_matrix_unchecked(f: CMatrix) -> Self {
        Self { f }
    }

    /// The first n columns of I_{n+m}.
    pub fn standard(n: usize, m: usize) -> Self {
        Self {
            f: CMatrix::coordinate_frame(n + m, n),
        }
    }

    pub fn n(&self) -> usize {
        self.f.cols()
    }

    pub fn m(&self) -> usize {
        self.f.rows() - self.f.cols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.f
    }

    pub fn into_matrix(self) -> CMatrix {
        self.f
    }

    /// F·g for g ∈ U(n).
    pub fn right_mul(&self, g: &Unitary) -> Result<Self> {
        if g.dim() != self.n() {
            return Err(shape(format!("U({})", self.n()), format!("U({})", g.dim())));
        }
        Ok(Self {
            f: &self.f * g.matrix(),
        })
    }

    /// U·F for U ∈ U(n+m).
    pub fn left_mul(&self, u: &Unitary) -> Result<Self> {
        if u.dim() != self.f.rows() {
            return Err(shape(
                format!("U({})", self.f.rows()),
                format!("U({})", u.dim()),
            ));
        }
        Ok(Self {
            f: u.matrix() * &self.f,
        })
    }
}

/// A rank-n orthogonal projector on ℂ^{n+m}.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannPoint {
    p: CMatrix,
    n: usize,
}

impl GrassmannPoint {
    pub fn new(p: CMatrix, n: usize) -> Result<Self> {
        Self::with_tolerance(p, n, tolerance::PROJECTOR)
    }

    pub fn with_tolerance(p: CMatrix, n: usize, tol: f64) -> Result<Self> {
        let bad = |reason: String| Error::NotProjector { rank: n, reason };
        if !p.is_square() || n == 0 || n >= p.rows() {
            return Err(bad(format!("shape {:?} with n = {n}", p.shape())));
        }
        let herm = p.dist(&p.adjoint());
        if herm > tol {
            return Err(bad(format!("‖P − P*‖ = {herm:e}")));
        }
        let idem = p.dist(&(&p * &p));
        if idem > tol {
            return Err(bad(format!("‖P² − P‖ = {idem:e}")));
        }
        let tr = p.trace();
        if (tr - C64::new(n as f64, 0.0)).norm() > tol {
            return Err(bad(format!("trace {tr}")));
        }
        Ok(Self { p, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.p.rows() - self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.p
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.p.dist(&other.p)
    }

    /// For n = m = 1: the point (x, y, z) of the unit-sphere model of ℂP¹,
    /// (P₁₁ − P₂₂, 2·Re P₂₁, −2·Im P₂₁). This is the correspondence under
    /// which `frame_project(su2_frame(w))` maps to `su2_project(w)`.
    pub fn sphere_coords(&self) -> Result<[f64; 3]> {
        if self.p.rows() != 2 {
            return Err(shape("2x2 projector", format!("{:?}", self.p.shape())));
        }
        let p21 = self.p[(1, 0)];
        Ok([
            (self.p[(0, 0)] - self.p[(1, 1)]).re,
            2.0 * p21.re,
            -2.0 * p21.im,
        ])
    }
}

/// π(F) = FF*.
pub fn frame_project(f: &StiefelFrame) -> GrassmannPoint {
    let p = f.matrix() * f.matrix().adjoint();
    // Hermitian to the last bit.
    let p = (&p + &p.adjoint()).scale_re(0.5);
    GrassmannPoint { p, n: f.n() }
}

/// The geodesic t ↦ π(exp(t·M̂)·F₀).
pub fn base_geodesic(mt: &MTangent, t: f64, f0: &StiefelFrame) -> Result<GrassmannPoint> {
    if mt.n() != f0.n() || mt.m() != f0.m() {
        return Err(shape(
            format!("tangent of shape {}x{}", f0.m(), f0.n()),
            format!("{}x{}", mt.m(), mt.n()),
        ));
    }
    let u = expm_skew(&hat(mt).scale(t))?;
    Ok(frame_project(&f0.left_mul(&u)?))
}

/// Speed of a projector curve in the metric induced by −½·Re tr on 𝔪:
/// ‖Ṗ‖_F/√2.
pub fn projector_speed(p_dot: &CMatrix) -> f64 {
    p_dot.norm_fro() / std::f64::consts::SQRT_2
}

/// A unit quaternion w₁ + w₂i + w₃j + w₄k.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU2Element {
    w: [f64; 4],
}

impl SU2Element {
    pub fn new(w: [f64; 4]) -> Result<Self> {
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("non-finite quaternion coordinate".into()));
        }
        let norm2: f64 = w.iter().map(|x| x * x).sum();
        if (norm2 - 1.0).abs() > tolerance::SU2_NORM {
            return Err(Error::Input(format!(
                "quaternion is not unit: |w|² = {norm2}"
            )));
        }
        Ok(Self { w })
    }

    pub fn identity() -> Self {
        Self {
            w: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// The circle subgroup element diag(e^{−iz}, e^{iz}).
    pub fn circle(z: f64) -> Self {
        Self {
            w: [z.cos(), z.sin(), 0.0, 0.0],
        }
    }

    /// The element of T with parameters (x, y): exp of x·(cos y·e₁ + sin y·e₂).
    pub fn t_element(x: f64, y: f64) -> Self {
        let (s, c) = x.sin_cos();
        Self {
            w: [c, 0.0, s * y.cos(), s * y.sin()],
        }
    }

    pub fn coords(&self) -> [f64; 4] {
        self.w
    }

    /// Hamilton product, matching `su2_real4(u·v) = su2_real4(u)·su2_real4(v)`.
    pub fn mul(&self, other: &Self) -> Self {
        let [a1, a2, a3, a4] = self.w;
        let [b1, b2, b3, b4] = other.w;
        let w = [
            a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
            a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
            a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
            a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
        ];
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self {
            w: w.map(|x| x / norm),
        }
    }
}

/// The 4×4 real representation of a unit quaternion.
pub fn su2_real4(w: &SU2Element) -> Matrix4<f64> {
    let [w1, w2, w3, w4] = w.w;
    Matrix4::new(
        w1, w2, -w3, -w4, //
        -w2, w1, w4, -w3, //
        w3, -w4, w1, -w2, //
        w4, w3, w2, w1,
    )
}

/// The i-conjugate w̃: the representation with w₂ replaced by −w₂.
pub fn su2_itilde(w: &SU2Element) -> Matrix4<f64> {
    let [w1, w2, w3, w4] = w.w;
    su2_real4(&SU2Element {
        w: [w1, -w2, w3, w4],
    })
}

/// The 4×4 real matrix of the unit-sphere point (x, y, z) in the ℂP¹ model.
pub fn sphere_model_matrix(p: [f64; 3]) -> Matrix4<f64> {
    let [x, y, z] = p;
    Matrix4::new(
        x, 0.0, -y, -z, //
        0.0, x, z, -y, //
        y, -z, x, 0.0, //
        z, y, 0.0, x,
    )
}

/// p(w) = w·w̃, read off as the sphere point (x, y, z).
pub fn su2_project(w: &SU2Element) -> [f64; 3] {
    let p = su2_real4(w) * su2_itilde(w);
    [p[(0, 0)], p[(2, 0)], p[(3, 0)]]
}

/// The 2×1 frame corresponding to w, (w₁ + iw₂, w₃ − iw₄).
pub fn su2_frame(w: &SU2Element) -> StiefelFrame {
    let [w1, w2, w3, w4] = w.w;
    let f = CMatrix::new(2, 1, vec![C64::new(w1, w2), C64::new(w3, -w4)]).expect("2x1");
    StiefelFrame::from_matrix_unchecked(f)
}

/// max-entry residual of p(wv) = w·p(v)·w̃ in the 4×4 real model.
pub fn su2_equivariance_residual(w: &SU2Element, v: &SU2Element) -> f64 {
    let lhs = sphere_model_matrix(su2_project(&w.mul(v)));
    let rhs = su2_real4(w) * sphere_model_matrix(su2_project(v)) * su2_itilde(w);
    (lhs - rhs).abs().max()
}

/// max-entry residual of p(t) = t² for t = t_element(x, y) ∈ T.
pub fn t_squaring_residual(x: f64, y: f64) -> f64 {
    let t = SU2Element::t_element(x, y);
    let square = su2_real4(&t) * su2_real4(&t);
    (sphere_model_matrix(su2_project(&t)) - square).abs().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::{ONE, ZERO};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn m11(z: C64) -> MTangent {
        MTangent::new(CMatrix::new(1, 1, vec![z]).unwrap()).unwrap()
    }

    #[test]
    fn frame_validation() {
        assert!(StiefelFrame::new(CMatrix::from_real(2, 1, &[1.0, 1.0]).unwrap()).is_err());
        assert!(StiefelFrame::new(CMatrix::identity(2)).is_err());
        assert!(StiefelFrame::new(CMatrix::coordinate_frame(3, 2)).is_ok());
    }

    #[test]
    fn coordinate_frame_projects_to_block_identity() {
        let p = frame_project(&StiefelFrame::standard(2, 3));
        let expected = CMatrix::diagonal(&[ONE, ONE, ZERO, ZERO, ZERO]);
        assert_eq!(p.matrix(), &expected);
    }

    #[test]
    fn projection_is_gauge_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let f = StiefelFrame::new(sample::frame(&mut rng, 5, 2)).unwrap();
            let g = sample::unitary(&mut rng, 2);
            let p1 = frame_project(&f);
            let p2 = frame_project(&f.right_mul(&g).unwrap());
            assert!(p1.dist(&p2) < 1e-12);
            // and satisfies the projector invariants
            assert!(GrassmannPoint::new(p1.matrix().clone(), 2).is_ok());
        }
    }

    #[test]
    fn projector_validation_rejects_non_projectors() {
        assert!(GrassmannPoint::new(CMatrix::identity(3), 1).is_err());
        assert!(GrassmannPoint::new(CMatrix::diagonal(&[ONE, ONE, ZERO]), 1).is_err());
        let nonherm = CMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(GrassmannPoint::new(nonherm, 1).is_err());
    }

    #[test]
    fn geodesic_examples() {
        let f0 = StiefelFrame::standard(1, 1);
        let m = m11(ONE);
        let p0 = base_geodesic(&m, 0.0, &f0).unwrap();
        assert!(p0.dist(&frame_project(&f0)) < 1e-15);

        let antipode = base_geodesic(&m, PI / 2.0, &f0).unwrap();
        let expected = CMatrix::diagonal(&[ZERO, ONE]);
        assert!(antipode.matrix().max_abs_diff(&expected) < 1e-15);
        let [x, _, _] = antipode.sphere_coords().unwrap();
        assert!((x + 1.0).abs() < 1e-15);

        for &t in &[0.2, 0.9, 2.0] {
            let a = base_geodesic(&m, t, &f0).unwrap();
            let b = base_geodesic(&m, t + PI, &f0).unwrap();
            assert!(a.dist(&b) < 1e-14);
        }
    }

    #[test]
    fn geodesic_has_constant_speed() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = MTangent::new(sample::cmatrix(&mut rng, 3, 2)).unwrap();
        let f0 = StiefelFrame::standard(2, 3);
        let expected = (m.matrix().adjoint() * m.matrix()).trace().re.sqrt();
        let h = 1e-5;
        for &t in &[0.0, 0.3, 0.7, 1.5] {
            let a = base_geodesic(&m, t - h, &f0).unwrap();
            let b = base_geodesic(&m, t + h, &f0).unwrap();
            let pdot = (b.matrix() - a.matrix()).scale_re(1.0 / (2.0 * h));
            assert!((projector_speed(&pdot) - expected).abs() < 1e-6);
        }
    }

    #[test]
    fn real4_examples() {
        assert_eq!(su2_real4(&SU2Element::identity()), Matrix4::identity());
        let i = SU2Element::new([0.0, 1.0, 0.0, 0.0]).unwrap();
        let expected = Matrix4::new(
            0.0, 1.0, 0.0, 0.0, //
            -1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0,
        );
        assert_eq!(su2_real4(&i), expected);
        assert!(SU2Element::new([1.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn real4_is_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let u = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            let v = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            let lhs = su2_real4(&u.mul(&v));
            let rhs = su2_real4(&u) * su2_real4(&v);
            assert!((lhs - rhs).abs().max() < 1e-12);
        }
    }

    #[test]
    fn itilde_matches_display() {
        let w = SU2Element::new([0.5, 0.5, 0.5, 0.5]).unwrap();
        let [w1, w2, w3, w4] = w.coords();
        let expected = Matrix4::new(
            w1, -w2, -w3, -w4, //
            w2, w1, w4, -w3, //
            w3, -w4, w1, w2, //
            w4, w3, -w2, w1,
        );
        assert_eq!(su2_itilde(&w), expected);
    }

    #[test]
    fn project_examples() {
        assert_eq!(su2_project(&SU2Element::identity()), [1.0, 0.0, 0.0]);
        for &(x, y) in &[(0.3, 1.1), (1.2, -0.4), (0.0, 2.0), (PI / 2.0, 0.7)] {
            let p = su2_project(&SU2Element::t_element(x, y));
            let expected = [
                (2.0 * x).cos(),
                (2.0 * x).sin() * y.cos(),
                (2.0 * x).sin() * y.sin(),
            ];
            for k in 0..3 {
                assert!((p[k] - expected[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn product_is_sphere_model_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..50 {
            let w = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            let p = su2_project(&w);
            let norm: f64 = p.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            let product = su2_real4(&w) * su2_itilde(&w);
            assert!((product - sphere_model_matrix(p)).abs().max() < 1e-14);
        }
    }

    #[test]
    fn frame_correspondence_matches_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..50 {
            let w = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            let via_frame = frame_project(&su2_frame(&w)).sphere_coords().unwrap();
            let direct = su2_project(&w);
            for k in 0..3 {
                assert!((via_frame[k] - direct[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn fiber_is_circle_subgroup() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for i in 0..100 {
            let w = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            let pw = su2_project(&w);
            let circle = SU2Element::circle(0.1 * i as f64);
            let same = su2_project(&w.mul(&circle));
            assert!((0..3).all(|k| (same[k] - pw[k]).abs() < 1e-10));

            let v = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            let off = v.coords()[2].hypot(v.coords()[3]);
            let moved = su2_project(&w.mul(&v));
            let d = (0..3)
                .map(|k| (moved[k] - pw[k]).powi(2))
                .sum::<f64>()
                .sqrt();
            // |p(wv) − p(w)| = 2·|(w₃,w₄)-part of v|
            assert!((d - 2.0 * off).abs() < 1e-10);
            if off > 1e-6 {
                assert!(d > 1e-10);
            }
        }
    }

    #[test]
    fn model_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..200 {
            let w = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            let v = SU2Element::new(sample::unit_quaternion(&mut rng)).unwrap();
            assert!(su2_equivariance_residual(&w, &v) < 1e-12);
            let [a, b, _, _] = sample::unit_quaternion(&mut rng);
            assert!(t_squaring_residual(4.0 * a, 4.0 * b) < 1e-12);
        }
    }
}
