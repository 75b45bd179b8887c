//! Real 2-planes 𝔪′ = span_ℝ{X̂, Ŷ} ⊂ 𝔪 and the surfaces they generate.
//!
//! Under the conformality condition X*X = λIₙ, X*Y = μIₙ (λ real, nonzero)
//! the plane generates a complete totally geodesic surface exactly when
//!
//! - Im μ = 0, [X̂, Ŷ] ∈ 𝔲(m) and Y*Y = ηIₙ (the flat case), or
//! - Im μ ≠ 0 and 𝔪′ is closed under X ↦ iX (the complex case).
//!
//! Complex surfaces are charted by the unit-sphere model coordinates (x, y)
//! with x ∈ [0, π/2], in which the area element is 2·sin 2x dx dy. Flat and
//! other planes are charted by exponential coordinates in a metric-orthonormal
//! basis of 𝔪′, with area element dx dy.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::cmat::{expm_skew, CMatrix, SkewHermitian, SkewSpectrum, Unitary, C64, I};
use crate::error::{shape, Error, Result};
use crate::grassmann::{frame_project, GrassmannPoint, StiefelFrame};
use crate::lie::{bracket, hat, metric_inner, scalar_fit, su2_embed_with_tolerance, MTangent};
use crate::tolerance::{self, Tolerances};

/// Classification of a 2-plane satisfying the conformality condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Flat,
    Complex,
    NotTotallyGeodesic,
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Flat => "flat",
            Self::Complex => "complex",
            Self::NotTotallyGeodesic => "not_totally_geodesic",
        })
    }
}

/// The scalars of X*X = λIₙ and X*Y = μIₙ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarScalars {
    pub lambda: f64,
    pub mu: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub kind: SurfaceKind,
    pub lambda: f64,
    pub mu: C64,
    /// Y*Y = ηIₙ, when Y*Y is scalar.
    pub eta: Option<f64>,
    /// Relative residual of iX against span_ℝ{X, Y} (complex branch only).
    pub j_residual: Option<f64>,
}

/// Both matrices rescaled to ‖·‖_F = √n, so the scalar tests run in units
/// where λ = 1. Returns the rescaled pair and the two scale factors.
fn normalized(x: &MTangent, y: &MTangent) -> Result<(CMatrix, CMatrix, f64, f64)> {
    x.check_same_shape(y)?;
    if x.n() > x.m() {
        return Err(shape("n <= m", format!("n = {}, m = {}", x.n(), x.m())));
    }
    let root_n = (x.n() as f64).sqrt();
    let (nx, ny) = (x.matrix().norm_fro(), y.matrix().norm_fro());
    if nx == 0.0 {
        return Err(Error::StarViolation {
            reason: "X = 0, so λ = 0".into(),
            gram: CMatrix::zeros(x.n(), x.n()),
        });
    }
    if ny == 0.0 {
        return Err(Error::DegeneratePlane { det: 0.0 });
    }
    let (sx, sy) = (nx / root_n, ny / root_n);
    Ok((
        x.matrix().scale_re(1.0 / sx),
        y.matrix().scale_re(1.0 / sy),
        sx,
        sy,
    ))
}

/// Extracts (λ, μ) when X*X and X*Y are scalar matrices and λ ≠ 0.
pub fn check_star(x: &MTangent, y: &MTangent) -> Result<StarScalars> {
    check_star_with(x, y, &Tolerances::default())
}

pub fn check_star_with(x: &MTangent, y: &MTangent, tol: &Tolerances) -> Result<StarScalars> {
    let (xn, yn, sx, sy) = normalized(x, y)?;
    let gxx = xn.adjoint() * &xn;
    let (l, r) = scalar_fit(&gxx);
    if r > tol.star || l.im.abs() > tol.star {
        return Err(Error::StarViolation {
            reason: format!("X*X is not a real scalar matrix (relative residual {r:e})"),
            gram: x.matrix().adjoint() * x.matrix(),
        });
    }
    if !(l.re.abs() > tol.star) {
        return Err(Error::StarViolation {
            reason: "λ = 0".into(),
            gram: x.matrix().adjoint() * x.matrix(),
        });
    }
    let gxy = xn.adjoint() * &yn;
    let (mu, r) = scalar_fit(&gxy);
    if r > tol.star {
        return Err(Error::StarViolation {
            reason: format!("X*Y is not a scalar matrix (relative residual {r:e})"),
            gram: x.matrix().adjoint() * y.matrix(),
        });
    }
    Ok(StarScalars {
        lambda: l.re * sx * sx,
        mu: mu * (sx * sy),
    })
}

/// Real inner product Re tr(A*B) on M_{m,n}(ℂ).
fn re_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.inner()
        .iter()
        .zip(b.inner().iter())
        .map(|(p, q)| (p.conj() * q).re)
        .sum()
}

/// Three-way classification of span_ℝ{X̂, Ŷ}.
pub fn classify(x: &MTangent, y: &MTangent) -> Result<Classification> {
    classify_with(x, y, &Tolerances::default())
}

pub fn classify_with(x: &MTangent, y: &MTangent, tol: &Tolerances) -> Result<Classification> {
    let star = check_star_with(x, y, tol)?;
    let (xn, yn, _, sy) = normalized(x, y)?;

    let (gxx, gxy, gyy) = (re_inner(&xn, &xn), re_inner(&xn, &yn), re_inner(&yn, &yn));
    let det = gxx * gyy - gxy * gxy;
    if det <= tol.star * gxx * gyy {
        return Err(Error::DegeneratePlane { det });
    }

    let (eta_n, eta_res) = scalar_fit(&(yn.adjoint() * &yn));
    let eta = (eta_res <= tol.star && eta_n.im.abs() <= tol.star).then_some(eta_n.re * sy * sy);

    let mu_n = star.mu.im / (x.matrix().norm_fro() * y.matrix().norm_fro()) * x.n() as f64;
    if mu_n.abs() <= tol.star {
        // [X̂, Ŷ] ∈ 𝔲(m) iff its 𝔲(n) block −X*Y + Y*X vanishes.
        let top = -(xn.adjoint() * &yn) + yn.adjoint() * &xn;
        let in_um = top.norm_fro() <= tol.star;
        let kind = if in_um && eta.is_some() {
            SurfaceKind::Flat
        } else {
            SurfaceKind::NotTotallyGeodesic
        };
        return Ok(Classification {
            kind,
            lambda: star.lambda,
            mu: star.mu,
            eta,
            j_residual: None,
        });
    }

    // J-invariance: least squares of iX against {X, Y} over the reals.
    let ix = xn.scale(I);
    let (bx, by) = (re_inner(&xn, &ix), re_inner(&yn, &ix));
    let a = (bx * gyy - by * gxy) / det;
    let b = (by * gxx - bx * gxy) / det;
    let resid = (&ix - &xn.scale_re(a) - yn.scale_re(b)).norm_fro() / xn.norm_fro();
    let kind = if resid <= tol.j_invariant {
        SurfaceKind::Complex
    } else {
        SurfaceKind::NotTotallyGeodesic
    };
    Ok(Classification {
        kind,
        lambda: star.lambda,
        mu: star.mu,
        eta,
        j_residual: Some(resid),
    })
}

#[derive(Clone, Debug)]
enum Chart {
    /// exp(−(y/2)·K)·exp(x·Â)·F₀ with Â = hat(X/√λ), K the embedded circle generator.
    Sphere {
        generator: SkewSpectrum,
        circle: SkewSpectrum,
    },
    /// exp(x·Û₁ + y·Û₂)·F₀ with {Û₁, Û₂} metric-orthonormal in 𝔪′.
    Exponential {
        u1: SkewHermitian,
        u2: SkewHermitian,
    },
}

/// A validated 2-plane with its classification, basepoint and chart.
#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    x: MTangent,
    y: MTangent,
    class: Classification,
    basepoint: Unitary,
    sphere: Option<Chart>,
    plane: Chart,
}

impl SurfaceSpec {
    pub fn new(x: MTangent, y: MTangent) -> Result<Self> {
        Self::with_tolerances(x, y, &Tolerances::default())
    }

    pub fn with_tolerances(x: MTangent, y: MTangent, tol: &Tolerances) -> Result<Self> {
        let class = classify_with(&x, &y, tol)?;
        let (xh, yh) = (hat(&x), hat(&y));
        let nx = metric_inner(&xh, &xh)?.sqrt();
        let u1 = xh.scale(1.0 / nx);
        let proj = metric_inner(&yh, &u1)?;
        let rest = yh.add(&u1.scale(-proj))?;
        let u2 = rest.scale(1.0 / metric_inner(&rest, &rest)?.sqrt());
        let plane = Chart::Exponential { u1, u2 };

        let sphere = if class.kind == SurfaceKind::Complex {
            let emb = su2_embed_with_tolerance(&x, tol.star)?;
            Some(Chart::Sphere {
                generator: SkewSpectrum::new(&emb.a)?,
                circle: SkewSpectrum::new(&emb.k)?,
            })
        } else {
            None
        };
        let dim = x.n() + x.m();
        Ok(Self {
            x,
            y,
            class,
            basepoint: Unitary::identity(dim),
            sphere,
            plane,
        })
    }

    /// Moves the basepoint frame to g·F_std for g ∈ U(n+m).
    pub fn with_basepoint(mut self, g: Unitary) -> Result<Self> {
        if g.dim() != self.x.n() + self.x.m() {
            return Err(shape(
                format!("U({})", self.x.n() + self.x.m()),
                format!("U({})", g.dim()),
            ));
        }
        self.basepoint = g;
        Ok(self)
    }

    pub fn x(&self) -> &MTangent {
        &self.x
    }

    pub fn y(&self) -> &MTangent {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn m(&self) -> usize {
        self.x.m()
    }

    pub fn kind(&self) -> SurfaceKind {
        self.class.kind
    }

    pub fn classification(&self) -> &Classification {
        &self.class
    }

    pub fn lambda(&self) -> f64 {
        self.class.lambda
    }

    pub fn mu(&self) -> C64 {
        self.class.mu
    }

    /// F₀ = g·[Iₙ; 0].
    pub fn basepoint_frame(&self) -> StiefelFrame {
        StiefelFrame::from_matrix_unchecked(
            self.basepoint.matrix() * CMatrix::coordinate_frame(self.n() + self.m(), self.n()),
        )
    }

    /// Rejects chart coordinates outside the chart domain.
    pub fn check_domain(&self, x: f64, y: f64) -> Result<()> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::ChartDomain(format!("non-finite point ({x}, {y})")));
        }
        if self.kind() == SurfaceKind::Complex && !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&x) {
            return Err(Error::ChartDomain(format!(
                "x = {x} outside [0, π/2] for the complex chart"
            )));
        }
        Ok(())
    }

    fn frame_from(&self, chart: &Chart, x: f64, y: f64) -> Result<StiefelFrame> {
        let u = match chart {
            Chart::Sphere { generator, circle } => {
                let rot = circle.exp(-0.5 * y)?;
                rot.matrix() * generator.exp(x)?.matrix()
            }
            Chart::Exponential { u1, u2 } => {
                let z = u1.scale(x).add(&u2.scale(y))?;
                expm_skew(&z)?.into_matrix()
            }
        };
        let full = self.basepoint.matrix() * &u;
        Ok(StiefelFrame::from_matrix_unchecked(full.block(
            0,
            0,
            full.rows(),
            self.n(),
        )))
    }

    /// A frame over `chart_point(x, y)`.
    pub fn chart_frame(&self, x: f64, y: f64) -> Result<StiefelFrame> {
        self.check_domain(x, y)?;
        match self.kind() {
            SurfaceKind::Complex => {
                self.frame_from(self.sphere.as_ref().expect("complex chart"), x, y)
            }
            SurfaceKind::Flat => self.frame_from(&self.plane, x, y),
            SurfaceKind::NotTotallyGeodesic => Err(Error::NotTotallyGeodesic),
        }
    }

    /// A frame over `plane_exp_point(x, y)`; defined for every classification.
    pub fn plane_exp_frame(&self, x: f64, y: f64) -> Result<StiefelFrame> {
        self.frame_from(&self.plane, x, y)
    }
}

/// The surface point with chart coordinates (x, y).
pub fn chart_point(spec: &SurfaceSpec, x: f64, y: f64) -> Result<GrassmannPoint> {
    Ok(frame_project(&spec.chart_frame(x, y)?))
}

/// π(exp(x·Û₁ + y·Û₂)·F₀): the exponential image of 𝔪′, for any plane.
pub fn plane_exp_point(spec: &SurfaceSpec, x: f64, y: f64) -> Result<GrassmannPoint> {
    Ok(frame_project(&spec.plane_exp_frame(x, y)?))
}

/// Area of the unit-sphere image of [p, p+a] × [q, q+b]: 2b(sin²(p+a) − sin²p).
pub fn rectangle_area_closed(p: f64, a: f64, b: f64) -> f64 {
    2.0 * b * ((p + a).sin().powi(2) - p.sin().powi(2))
}

fn default_orientation() -> i32 {
    1
}

/// Integrator steps for rectangles and circles that do not set their own.
pub const DEFAULT_STEPS: usize = 10_000;

/// The shape of a loop in chart coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LoopShape {
    /// Boundary of [p, p+a] × [q, q+b], traversed (p,q) → (p+a,q) → (p+a,q+b) → (p,q+b).
    Rectangle {
        p: f64,
        a: f64,
        b: f64,
        #[serde(default)]
        q: f64,
    },
    /// Counter-clockwise circle of radius r about (cx, cy), starting at (cx + r, cy).
    Circle { cx: f64, cy: f64, r: f64 },
    /// Half-step samples of a smooth closed curve; first and last coincide.
    Chart { points: Vec<[f64; 2]> },
}

/// A closed loop in a surface chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSpec {
    #[serde(flatten)]
    pub shape: LoopShape,
    #[serde(default = "default_orientation")]
    pub orientation: i32,
    /// Integrator steps for rectangles and circles; chart loops derive theirs
    /// from the point count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// A loop discretized on the half-step grid, t_k = k/(2N).
#[derive(Clone, Debug, PartialEq)]
pub struct SampledLoop {
    pub points: Vec<[f64; 2]>,
    /// Half-step indices where the loop may have a corner, including both ends.
    pub breaks: Vec<usize>,
    /// Number of integrator steps N.
    pub steps: usize,
}

impl LoopSpec {
    pub fn rectangle(p: f64, a: f64, b: f64, q: f64, samples: usize) -> Self {
        Self {
            shape: LoopShape::Rectangle { p, a, b, q },
            orientation: 1,
            samples: Some(samples),
        }
    }

    pub fn circle(cx: f64, cy: f64, r: f64, samples: usize) -> Self {
        Self {
            shape: LoopShape::Circle { cx, cy, r },
            orientation: 1,
            samples: Some(samples),
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            orientation: -self.orientation,
            ..self.clone()
        }
    }

    /// The same loop with N integrator steps (no effect on chart loops).
    pub fn with_steps(&self, steps: usize) -> Self {
        Self {
            samples: Some(steps),
            ..self.clone()
        }
    }

    /// Fills in the step count when the loop does not set one.
    pub fn with_default_steps(&self, steps: usize) -> Self {
        Self {
            samples: Some(self.samples.unwrap_or(steps)),
            ..self.clone()
        }
    }

    /// Number of integrator steps N.
    pub fn steps(&self) -> usize {
        match &self.shape {
            LoopShape::Chart { points } => points.len().saturating_sub(1) / 2,
            _ => self.samples.unwrap_or(DEFAULT_STEPS),
        }
    }

    /// Chart loops and circles are smooth closed curves; rectangles have corners.
    pub fn is_smooth_closed(&self) -> bool {
        !matches!(self.shape, LoopShape::Rectangle { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if self.orientation != 1 && self.orientation != -1 {
            return Err(Error::InvalidLoop(format!(
                "orientation must be ±1, got {}",
                self.orientation
            )));
        }
        match &self.shape {
            LoopShape::Rectangle { p, a, b, q } => {
                if ![*p, *a, *b, *q].iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidLoop("non-finite rectangle parameter".into()));
                }
                if !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::InvalidLoop(format!(
                        "rectangle needs a > 0 and b > 0, got a = {a}, b = {b}"
                    )));
                }
                if self.steps() < 8 {
                    return Err(Error::InvalidLoop(format!(
                        "rectangle needs at least 8 steps, got {}",
                        self.steps()
                    )));
                }
            }
            LoopShape::Circle { cx, cy, r } => {
                if ![*cx, *cy, *r].iter().all(|v| v.is_finite()) || !(*r > 0.0) {
                    return Err(Error::InvalidLoop(format!(
                        "circle needs finite center and r > 0, got ({cx}, {cy}), r = {r}"
                    )));
                }
                if self.steps() < 2 {
                    return Err(Error::InvalidLoop(format!(
                        "circle needs at least 2 steps, got {}",
                        self.steps()
                    )));
                }
            }
            LoopShape::Chart { points } => {
                if points.len() < 5 || points.len() % 2 == 0 {
                    return Err(Error::InvalidLoop(format!(
                        "chart loop needs an odd number (>= 5) of half-step samples, got {}",
                        points.len()
                    )));
                }
                if points.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidLoop("non-finite chart point".into()));
                }
                let (first, last) = (points[0], points[points.len() - 1]);
                let gap = (first[0] - last[0]).hypot(first[1] - last[1]);
                if gap > tolerance::CLOSED {
                    return Err(Error::NotClosed { gap });
                }
            }
        }
        Ok(())
    }

    /// The loop on its half-step grid, in traversal order.
    pub fn sample(&self) -> Result<SampledLoop> {
        self.validate()?;
        let n = self.steps();
        let (mut points, mut breaks) = match &self.shape {
            LoopShape::Rectangle { p, a, b, q } => {
                let (p, a, b, q) = (*p, *a, *b, *q);
                let corners = [[p, q], [p + a, q], [p + a, q + b], [p, q + b], [p, q]];
                let mut points = vec![corners[0]];
                let mut breaks = vec![0];
                for e in 0..4 {
                    let edge_steps = n / 4 + usize::from(e < n % 4);
                    let half = 2 * edge_steps;
                    let (s, t) = (corners[e], corners[e + 1]);
                    for k in 1..=half {
                        let u = k as f64 / half as f64;
                        points.push([s[0] + (t[0] - s[0]) * u, s[1] + (t[1] - s[1]) * u]);
                    }
                    // land exactly on the corner
                    *points.last_mut().expect("non-empty") = t;
                    breaks.push(points.len() - 1);
                }
                (points, breaks)
            }
            LoopShape::Circle { cx, cy, r } => {
                let total = 2 * n;
                let points = (0..=total)
                    .map(|k| {
                        let phi = std::f64::consts::TAU * (k % total) as f64 / total as f64;
                        [cx + r * phi.cos(), cy + r * phi.sin()]
                    })
                    .collect();
                (points, vec![0, total])
            }
            LoopShape::Chart { points } => (points.clone(), vec![0, points.len() - 1]),
        };
        if self.orientation < 0 {
            let last = points.len() - 1;
            points.reverse();
            breaks = breaks.iter().rev().map(|&b| last - b).collect();
        }
        Ok(SampledLoop {
            points,
            breaks,
            steps: n,
        })
    }
}

/// Signed area enclosed by the loop in the surface's chart metric, by the
/// line integral ∮ G(x) dy with G' the area density, composite trapezoid rule.
pub fn area_numeric(spec: &SurfaceSpec, lp: &LoopSpec) -> Result<f64> {
    let sampled = lp.sample()?;
    for &[x, y] in &sampled.points {
        spec.check_domain(x, y)?;
    }
    let g: fn(f64) -> f64 = match spec.kind() {
        // ∫₀ˣ 2·sin 2s ds = 2·sin² x
        SurfaceKind::Complex => |x| 2.0 * x.sin().powi(2),
        SurfaceKind::Flat | SurfaceKind::NotTotallyGeodesic => |x| x,
    };
    Ok(sampled
        .points
        .windows(2)
        .map(|w| 0.5 * (g(w[0][0]) + g(w[1][0])) * (w[1][1] - w[0][1]))
        .sum())
}

/// The 𝔲(n) block of [X̂, Ŷ]; zero iff the bracket lies in 𝔲(m).
pub fn bracket_un_block(x: &MTangent, y: &MTangent) -> Result<CMatrix> {
    let c = bracket(&hat(x), &hat(y))?;
    Ok(c.matrix().block(0, 0, x.n(), x.n()))
}
