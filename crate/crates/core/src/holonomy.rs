//! Horizontal lifts of closed base loops and their holonomy displacement.
//!
//! The connection is the metric one: a curve of frames F(t) is horizontal when
//! F*Ḟ = 0. Over a projector curve P(t) the horizontal lift solves Ḟ = Ṗ·F,
//! integrated here with classical RK4 and a polar retraction after each step.
//!
//! A [`BasePath`] stores P on a half-step grid t_k = k/(2N), so that the RK4
//! midpoint stages read sampled data instead of interpolating. Velocities Ṗ
//! come from five-point fourth-order stencils on that grid. A path may be
//! split into smooth segments (rectangle edges); stencils never reach across
//! a segment boundary and no RK4 step straddles one.

use std::io::Write;

use rayon::prelude::*;

use crate::cmat::{polar_retract, CMatrix, Unitary, C64};
use crate::error::{shape, Error, Result};
use crate::grassmann::{frame_project, GrassmannPoint, StiefelFrame};
use crate::surfaces::{area_numeric, LoopSpec, SampledLoop, SurfaceKind, SurfaceSpec};
use crate::tolerance;

const CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const SHIFTED: [[f64; 5]; 5] = [
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
    CENTRAL,
    [-1.0, 6.0, -18.0, 10.0, 3.0],
    [3.0, -16.0, 36.0, -48.0, 25.0],
];

#[derive(Clone, Debug)]
struct Segment {
    /// Half-step index of the first sample.
    start: usize,
    p: Vec<CMatrix>,
    p_dot: Vec<CMatrix>,
}

fn combine(samples: &[&CMatrix; 5], weights: &[f64; 5], scale: f64) -> CMatrix {
    let mut acc = CMatrix::zeros(samples[0].rows(), samples[0].cols());
    for (s, &w) in samples.iter().zip(weights) {
        if w != 0.0 {
            acc = &acc + &s.scale_re(w);
        }
    }
    acc.scale_re(scale)
}

impl Segment {
    fn new(start: usize, p: Vec<CMatrix>, delta: f64, periodic: bool) -> Self {
        let len = p.len() - 1;
        let scale = 1.0 / (12.0 * delta);
        let p_dot = (0..=len)
            .map(|k| {
                if periodic {
                    // p[len] repeats p[0]; wrap on the len distinct samples.
                    let at = |o: isize| &p[(k as isize + o).rem_euclid(len as isize) as usize];
                    combine(&[at(-2), at(-1), at(0), at(1), at(2)], &CENTRAL, scale)
                } else {
                    let (row, base) = match k {
                        0 => (0, 0),
                        1 => (1, 0),
                        _ if k + 1 == len => (3, len - 4),
                        _ if k == len => (4, len - 4),
                        _ => (2, k - 2),
                    };
                    let s = [
                        &p[base],
                        &p[base + 1],
                        &p[base + 2],
                        &p[base + 3],
                        &p[base + 4],
                    ];
                    combine(&s, &SHIFTED[row], scale)
                }
            })
            .collect();
        Self { start, p, p_dot }
    }

    fn steps(&self) -> usize {
        (self.p.len() - 1) / 2
    }
}

/// A sampled projector curve t ∈ [0, 1] ↦ P(t) with N integrator steps.
#[derive(Clone, Debug)]
pub struct BasePath {
    n: usize,
    steps: usize,
    segments: Vec<Segment>,
    periodic: bool,
}

impl BasePath {
    /// Builds a path from 2N+1 half-step samples. `breaks` lists the half-step
    /// indices where P may fail to be smooth; it must start at 0, end at 2N,
    /// and consist of even indices at least 4 apart. A `periodic` path is a
    /// smooth closed curve (a single segment whose stencils wrap around).
    pub fn from_samples(
        points: Vec<GrassmannPoint>,
        breaks: &[usize],
        periodic: bool,
    ) -> Result<Self> {
        if points.len() < 5 || points.len().is_multiple_of(2) {
            return Err(Error::InvalidLoop(format!(
                "need an odd number (>= 5) of half-step samples, got {}",
                points.len()
            )));
        }
        let last = points.len() - 1;
        let n = points[0].n();
        let dim = points[0].matrix().rows();
        if let Some(bad) = points
            .iter()
            .find(|p| p.n() != n || p.matrix().rows() != dim)
        {
            return Err(shape(
                format!("rank-{n} projectors of size {dim}"),
                format!("rank {} of size {}", bad.n(), bad.matrix().rows()),
            ));
        }
        let breaks: Vec<usize> = if periodic {
            vec![0, last]
        } else {
            breaks.to_vec()
        };
        let valid = breaks.first() == Some(&0)
            && breaks.last() == Some(&last)
            && breaks.iter().all(|b| b % 2 == 0)
            && breaks.windows(2).all(|w| w[1] >= w[0] + 4);
        if !valid {
            return Err(Error::InvalidLoop(format!(
                "segment breaks {breaks:?} must be even, at least 4 apart, and span 0..={last}"
            )));
        }
        if periodic {
            let gap = points[0].dist(&points[last]);
            if gap > tolerance::CLOSED {
                return Err(Error::NotClosed { gap });
            }
        }
        let steps = last / 2;
        let delta = 0.5 / steps as f64;
        let mut mats: Vec<CMatrix> = points.into_iter().map(|p| p.matrix().clone()).collect();
        let segments = breaks
            .windows(2)
            .rev()
            .map(|w| {
                let tail = mats.split_off(w[0]);
                mats.push(tail[0].clone());
                Segment::new(w[0], tail, delta, periodic)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        Ok(Self {
            n,
            steps,
            segments,
            periodic,
        })
    }

    /// Samples a smooth curve t ↦ P(t) with N steps.
    pub fn from_fn(steps: usize, f: impl Fn(f64) -> Result<GrassmannPoint> + Sync) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidLoop(format!(
                "need at least 2 steps, got {steps}"
            )));
        }
        let points = (0..=2 * steps)
            .into_par_iter()
            .map(|k| f(k as f64 / (2 * steps) as f64))
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(points, &[0, 2 * steps], false)
    }

    /// The constant path at P.
    pub fn constant(p: &GrassmannPoint, steps: usize) -> Result<Self> {
        Self::from_fn(steps, |_| Ok(p.clone()))
    }

    /// The image of a chart loop on a surface. Complex and flat surfaces use
    /// their chart; other planes use exponential coordinates.
    pub fn from_loop(spec: &SurfaceSpec, lp: &LoopSpec) -> Result<Self> {
        let sampled = lp.sample()?;
        Self::from_sampled(spec, &sampled, lp.is_smooth_closed())
    }

    fn from_sampled(spec: &SurfaceSpec, sampled: &SampledLoop, periodic: bool) -> Result<Self> {
        let points = sampled
            .points
            .par_iter()
            .map(|&[x, y]| Ok(frame_project(&surface_frame(spec, x, y)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(points, &sampled.breaks, periodic)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of integrator steps N.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// P at half-step index k, i.e. t = k/(2N).
    pub fn point(&self, k: usize) -> &CMatrix {
        let seg = self
            .segments
            .iter()
            .find(|s| k < s.start + s.p.len())
            .expect("half-step index in range");
        &seg.p[k - seg.start]
    }

    pub fn start(&self) -> &CMatrix {
        &self.segments[0].p[0]
    }

    pub fn end(&self) -> &CMatrix {
        let seg = self.segments.last().expect("non-empty");
        seg.p.last().expect("non-empty")
    }

    /// ‖P(1) − P(0)‖_F.
    pub fn closure_gap(&self) -> f64 {
        self.start().dist(self.end())
    }

    pub fn is_closed(&self) -> bool {
        self.closure_gap() <= tolerance::CLOSED
    }

    /// Full-step indices j (t = j/N) where segments meet, including 0 and N.
    pub fn step_breaks(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.segments.iter().map(|s| s.start / 2).collect();
        b.push(self.steps);
        b
    }
}

/// A frame over the surface point with coordinates (x, y).
pub fn surface_frame(spec: &SurfaceSpec, x: f64, y: f64) -> Result<StiefelFrame> {
    match spec.kind() {
        SurfaceKind::NotTotallyGeodesic => {
            spec.check_domain(x, y)?;
            spec.plane_exp_frame(x, y)
        }
        _ => spec.chart_frame(x, y),
    }
}

/// A horizontal lift sampled at the full steps t_j = j/N.
#[derive(Clone, Debug)]
pub struct Lift {
    frames: Vec<StiefelFrame>,
    breaks: Vec<usize>,
}

fn rk4_step(f: &CMatrix, h: f64, v0: &CMatrix, vm: &CMatrix, v1: &CMatrix) -> CMatrix {
    let k1 = v0 * f;
    let k2 = vm * &(f + &k1.scale_re(0.5 * h));
    let k3 = vm * &(f + &k2.scale_re(0.5 * h));
    let k4 = v1 * &(f + &k3.scale_re(h));
    let incr = &(&k1 + &k2.scale_re(2.0)) + &(&k3.scale_re(2.0) + &k4);
    f + &incr.scale_re(h / 6.0)
}

/// Integrates Ḟ = Ṗ·F from F₀ along the path.
pub fn horizontal_lift(path: &BasePath, f0: &StiefelFrame) -> Result<Lift> {
    if f0.n() != path.n || f0.matrix().rows() != path.start().rows() {
        return Err(shape(
            format!("{}x{} frame", path.start().rows(), path.n),
            format!("{:?}", f0.matrix().shape()),
        ));
    }
    let residual = frame_project(f0).matrix().dist(path.start());
    if residual > tolerance::INITIAL_FRAME {
        return Err(Error::FrameMismatch { residual });
    }
    let h = 1.0 / path.steps as f64;
    let mut frames = Vec::with_capacity(path.steps + 1);
    frames.push(f0.clone());
    let mut f = f0.matrix().clone();
    for seg in &path.segments {
        for j in 0..seg.steps() {
            let v = &seg.p_dot[2 * j..=2 * j + 2];
            let next = rk4_step(&f, h, &v[0], &v[1], &v[2]);
            f = polar_retract(&next).map_err(|e| match e {
                Error::RankDeficient { sigma_min } => Error::Integrator(format!(
                    "retraction failed at step {}: smallest singular value {sigma_min:e}",
                    seg.start / 2 + j
                )),
                other => other,
            })?;
            frames.push(StiefelFrame::from_matrix_unchecked(f.clone()));
        }
    }
    Ok(Lift {
        frames,
        breaks: path.step_breaks(),
    })
}

impl Lift {
    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn frames(&self) -> &[StiefelFrame] {
        &self.frames
    }

    pub fn start(&self) -> &StiefelFrame {
        &self.frames[0]
    }

    pub fn end(&self) -> &StiefelFrame {
        self.frames.last().expect("non-empty")
    }

    /// ‖F(t_j)*F(t_j) − I‖_F at each step.
    pub fn orthonormality_residuals(&self) -> Vec<f64> {
        self.frames
            .iter()
            .map(|f| f.matrix().orthonormality_residual())
            .collect()
    }

    pub fn max_drift(&self) -> f64 {
        self.orthonormality_residuals()
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// ‖F(t)*·Ḟ(t)‖_F with Ḟ from second-order differences of the samples:
    /// central inside a segment, one-sided at its ends.
    pub fn horizontality_residuals(&self) -> Vec<f64> {
        let h = 1.0 / self.steps() as f64;
        let mut out = vec![0.0f64; self.frames.len()];
        for w in self.breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            for (j, slot) in out.iter_mut().enumerate().take(b + 1).skip(a) {
                let fr = |i: usize| self.frames[i].matrix();
                let d = if j == a {
                    (&(&fr(j + 1).scale_re(4.0) - &fr(j).scale_re(3.0)) - fr(j + 2))
                        .scale_re(0.5 / h)
                } else if j == b {
                    (&(&fr(j).scale_re(3.0) - &fr(j - 1).scale_re(4.0)) + fr(j - 2))
                        .scale_re(0.5 / h)
                } else {
                    (fr(j + 1) - fr(j - 1)).scale_re(0.5 / h)
                };
                let r = (fr(j).adjoint() * d).norm_fro();
                // Where segments meet, keep the smaller one-sided value.
                *slot = if j == a && j > 0 { slot.min(r) } else { r };
            }
        }
        out
    }

    /// Indices j where the central horizontality difference is defined.
    pub fn interior_steps(&self) -> Vec<usize> {
        self.breaks
            .windows(2)
            .flat_map(|w| (w[0] + 1)..w[1])
            .collect()
    }

    /// ‖F(t_j)F(t_j)* − P(t_j)‖_F at each step.
    pub fn fiber_residuals(&self, path: &BasePath) -> Result<Vec<f64>> {
        if path.steps != self.steps() {
            return Err(shape(
                format!("path with {} steps", self.steps()),
                format!("{} steps", path.steps),
            ));
        }
        Ok(self
            .frames
            .iter()
            .enumerate()
            .map(|(j, f)| frame_project(f).matrix().dist(path.point(2 * j)))
            .collect())
    }

    pub fn trace(&self) -> LiftTrace {
        let steps = self.steps() as f64;
        let ortho = self.orthonormality_residuals();
        let horiz = self.horizontality_residuals();
        LiftTrace {
            rows: self
                .frames
                .iter()
                .enumerate()
                .map(|(j, f)| TraceRow {
                    t: j as f64 / steps,
                    frame: f.matrix().col_major(),
                    orthonormality: ortho[j],
                    horizontality: horiz[j],
                })
                .collect(),
            rows_dim: self.frames[0].matrix().rows(),
            cols_dim: self.frames[0].n(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    /// vec(F), column-major.
    pub frame: Vec<C64>,
    pub orthonormality: f64,
    pub horizontality: f64,
}

/// Per-step record of a lift, exportable as CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftTrace {
    pub rows: Vec<TraceRow>,
    rows_dim: usize,
    cols_dim: usize,
}

impl LiftTrace {
    /// Header `t, F_r_c_re, F_r_c_im, ..., orthonormality, horizontality`,
    /// entries in column-major order, numbers with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut header = vec!["t".to_string()];
        for c in 0..self.cols_dim {
            for r in 0..self.rows_dim {
                header.push(format!("F_{r}_{c}_re"));
                header.push(format!("F_{r}_{c}_im"));
            }
        }
        header.push("orthonormality".into());
        header.push("horizontality".into());
        writeln!(w, "{}", header.join(","))?;
        for row in &self.rows {
            let mut fields = vec![format!("{:.16e}", row.t)];
            for z in &row.frame {
                fields.push(format!("{:.16e}", z.re));
                fields.push(format!("{:.16e}", z.im));
            }
            fields.push(format!("{:.16e}", row.orthonormality));
            fields.push(format!("{:.16e}", row.horizontality));
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// Holonomy displacement of a closed loop.
#[derive(Clone, Debug)]
pub struct HolonomyResult {
    pub v: Unitary,
    /// arg(tr V / n) in (−π, π].
    pub theta: f64,
    /// ‖V − e^{iθ}Iₙ‖_F.
    pub scalar_residual: f64,
    /// Signed area enclosed by the loop, when known.
    pub area: Option<f64>,
    /// θ / area, absent when the area is negligible.
    pub ratio: Option<f64>,
    /// max_t ‖F*F − I‖_F along the lift.
    pub max_drift: f64,
}

/// Area below which θ/area is not reported.
pub const RATIO_AREA_FLOOR: f64 = 1e-12;

impl HolonomyResult {
    pub fn with_area(mut self, area: f64) -> Self {
        self.area = Some(area);
        self.ratio = (area.abs() > RATIO_AREA_FLOOR).then(|| self.theta / area);
        self
    }

    /// ‖V − Iₙ‖_F.
    pub fn identity_residual(&self) -> f64 {
        self.v.matrix().dist(&CMatrix::identity(self.v.dim()))
    }

    /// ½·area − θ reduced to (−π, π], when the area is known.
    pub fn phase_defect(&self) -> Option<f64> {
        self.area.map(|a| wrap_angle(0.5 * a - self.theta))
    }
}

/// Reduces an angle to (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let r = a - TAU * (a / TAU).round();
    if r <= -PI {
        r + TAU
    } else if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Phase and residual of a unitary displacement.
pub fn scalar_phase(v: &Unitary) -> (f64, f64) {
    let n = v.dim();
    let mut theta = (v.matrix().trace() / n as f64).arg();
    if theta <= -std::f64::consts::PI {
        theta = std::f64::consts::PI;
    }
    let target = CMatrix::identity(n).scale(C64::from_polar(1.0, theta));
    (theta, v.matrix().dist(&target))
}

/// V = F₀*·F(1) for the horizontal lift of a closed loop from F₀.
pub fn holonomy_displacement(path: &BasePath, f0: &StiefelFrame) -> Result<HolonomyResult> {
    let gap = path.closure_gap();
    if gap > tolerance::CLOSED {
        return Err(Error::NotClosed { gap });
    }
    let lift = horizontal_lift(path, f0)?;
    displacement_of(&lift)
}

fn displacement_of(lift: &Lift) -> Result<HolonomyResult> {
    let v = lift.start().matrix().adjoint() * lift.end().matrix();
    let v = Unitary::with_tolerance(v, tolerance::HOLONOMY_UNITARY).map_err(|e| match e {
        Error::NotUnitary { residual } => Error::Integrator(format!(
            "holonomy displacement is not unitary (‖V*V − I‖_F = {residual:e}); the lift left the fiber"
        )),
        other => other,
    })?;
    let (theta, scalar_residual) = scalar_phase(&v);
    Ok(HolonomyResult {
        v,
        theta,
        scalar_residual,
        area: None,
        ratio: None,
        max_drift: lift.max_drift(),
    })
}

/// Holonomy of a chart loop on a surface, starting from the frame the chart
/// assigns to the loop's first point, with the loop's chart area attached.
pub fn loop_holonomy(spec: &SurfaceSpec, lp: &LoopSpec) -> Result<(HolonomyResult, Lift)> {
    let path = BasePath::from_loop(spec, lp)?;
    let [x0, y0] = lp.sample()?.points[0];
    let f0 = surface_frame(spec, x0, y0)?;
    let gap = path.closure_gap();
    if gap > tolerance::CLOSED {
        return Err(Error::NotClosed { gap });
    }
    let lift = horizontal_lift(&path, &f0)?;
    let res = displacement_of(&lift)?.with_area(area_numeric(spec, lp)?);
    Ok((res, lift))
}

/// ∫ sin²x(t)·y'(t) dt along a sampled chart path, by the trapezoid rule.
pub fn z_ode_delta(xy: &[[f64; 2]]) -> f64 {
    xy.windows(2)
        .map(|w| 0.5 * (w[0][0].sin().powi(2) + w[1][0].sin().powi(2)) * (w[1][1] - w[0][1]))
        .sum()
}

/// ‖V(F₀·g) − g*·V(F₀)·g‖_F and the two phases.
pub fn gauge_transport_check(
    path: &BasePath,
    f0: &StiefelFrame,
    g: &Unitary,
) -> Result<(f64, f64, f64)> {
    let base = holonomy_displacement(path, f0)?;
    let moved = holonomy_displacement(path, &f0.right_mul(g)?)?;
    let expected = g.adjoint().matrix() * base.v.matrix() * g.matrix();
    Ok((moved.v.matrix().dist(&expected), base.theta, moved.theta))
}
