//! Invariant checks shared by the property tests and the acceptance suite.
//!
//! Each property draws small structural parameters (sizes, seeds, shapes)
//! through proptest and builds matrices from a seeded ChaCha stream, so a
//! failure shrinks to a short reproducible case. Runners use a fixed seed.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stiefel_holonomy::cli::{execute, Cli};
use stiefel_holonomy::cmat::{expm_skew, frobenius_inner, polar_retract, CMatrix, C64, I};
use stiefel_holonomy::grassmann::{
    base_geodesic, frame_project, projector_speed, su2_project, GrassmannPoint, SU2Element,
    StiefelFrame,
};
use stiefel_holonomy::holonomy::{
    gauge_transport_check, horizontal_lift, loop_holonomy, surface_frame, wrap_angle, z_ode_delta,
    BasePath,
};
use stiefel_holonomy::lie::{
    bracket, double_bracket_oracle, hat, hm_decompose, lemma_coeffs, metric_inner, su2_embed,
    unhat, MTangent,
};
use stiefel_holonomy::sample;
use stiefel_holonomy::surfaces::{
    area_numeric, chart_point, classify, rectangle_area_closed, LoopSpec, SurfaceKind, SurfaceSpec,
};

pub const SEED: [u8; 32] = *b"stiefel-holonomy-property-suite!";

type Outcome = Result<(), TestCaseError>;

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Outcome,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn fail<E: std::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// (n, m) with 1 <= n <= m <= 5, n <= 3.
fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), n..=5))
}

fn skew_of_norm(seed: u64, k: usize, norm: f64) -> stiefel_holonomy::cmat::SkewHermitian {
    let a = sample::skew_hermitian(&mut rng(seed), k);
    let s = norm / a.matrix().norm_fro().max(1e-300);
    a.scale(s)
}

pub fn expm_inverse() -> Result<(), String> {
    check(
        64,
        (1usize..=6, any::<u64>(), 0.0..10.0f64),
        |(k, seed, norm)| {
            let a = skew_of_norm(seed, k, norm);
            let u = expm_skew(&a).map_err(fail)?;
            let v = expm_skew(&a.neg()).map_err(fail)?;
            let r = (u.matrix() * v.matrix()).dist(&CMatrix::identity(k));
            prop_assert!(r <= 1e-10, "‖e^A e^-A − I‖ = {r:e}");
            Ok(())
        },
    )
}

pub fn expm_adjoint() -> Result<(), String> {
    check(
        64,
        (1usize..=6, any::<u64>(), 0.0..10.0f64),
        |(k, seed, norm)| {
            let a = skew_of_norm(seed, k, norm);
            let u = expm_skew(&a).map_err(fail)?;
            let v = expm_skew(&a.neg()).map_err(fail)?;
            let r = u.matrix().adjoint().dist(v.matrix());
            prop_assert!(r <= 1e-10, "‖(e^A)* − e^-A‖ = {r:e}");
            Ok(())
        },
    )
}

pub fn polar_idempotent() -> Result<(), String> {
    check(64, (dims(), any::<u64>()), |((n, m), seed)| {
        let a = sample::cmatrix(&mut rng(seed), n + m, n);
        let once = polar_retract(&a).map_err(fail)?;
        let twice = polar_retract(&once).map_err(fail)?;
        let r = once.dist(&twice);
        prop_assert!(r <= 1e-12, "‖R(R(A)) − R(A)‖ = {r:e}");
        Ok(())
    })
}

pub fn frobenius_conjugate_symmetry() -> Result<(), String> {
    check(
        64,
        (1usize..=5, 1usize..=5, any::<u64>()),
        |(r, c, seed)| {
            let mut g = rng(seed);
            let a = sample::cmatrix(&mut g, r, c);
            let b = sample::cmatrix(&mut g, r, c);
            let ab = frobenius_inner(&a, &b).map_err(fail)?;
            let ba = frobenius_inner(&b, &a).map_err(fail)?;
            prop_assert!((ab - ba.conj()).norm() <= 1e-12 * (1.0 + ab.norm()));
            Ok(())
        },
    )
}

pub fn lemma_matches_oracle() -> Result<(), String> {
    check(1000, (dims(), any::<u64>()), |((n, m), seed)| {
        let mut g = rng(seed);
        let x = MTangent::new(sample::cmatrix(&mut g, m, n)).map_err(fail)?;
        let y = MTangent::new(sample::cmatrix(&mut g, m, n)).map_err(fail)?;
        let z = lemma_coeffs(&x, &y).map_err(fail)?;
        let o = double_bracket_oracle(&x, &y).map_err(fail)?;
        let rel = z.matrix().dist(o.matrix()) / o.matrix().norm_fro();
        prop_assert!(rel <= 1e-12, "relative error {rel:e}");
        Ok(())
    })
}

pub fn jacobi_identity() -> Result<(), String> {
    check(64, (1usize..=6, any::<u64>()), |(k, seed)| {
        let mut g = rng(seed);
        let (a, b, c) = (
            sample::skew_hermitian(&mut g, k),
            sample::skew_hermitian(&mut g, k),
            sample::skew_hermitian(&mut g, k),
        );
        let cyc = |x: &_, y: &_, z: &_| bracket(x, &bracket(y, z).unwrap()).unwrap();
        let sum = cyc(&a, &b, &c)
            .add(&cyc(&b, &c, &a))
            .unwrap()
            .add(&cyc(&c, &a, &b))
            .unwrap();
        let scale = a.matrix().norm_fro() * b.matrix().norm_fro() * c.matrix().norm_fro();
        let rel = sum.matrix().norm_fro() / scale;
        prop_assert!(rel <= 1e-12, "Jacobi residual {rel:e}");
        Ok(())
    })
}

pub fn hm_parts_orthogonal() -> Result<(), String> {
    check(64, (dims(), any::<u64>()), |((n, m), seed)| {
        let a = sample::skew_hermitian(&mut rng(seed), n + m);
        let (h, mt) = hm_decompose(&a, n).map_err(fail)?;
        let (hh, mh) = (h.assemble(), hat(&mt));
        let ip = metric_inner(&hh, &mh).map_err(fail)?;
        prop_assert!(ip.abs() <= 1e-12 * (1.0 + metric_inner(&a, &a).unwrap()));
        let back = hh.add(&mh).map_err(fail)?;
        prop_assert!(back.matrix().dist(a.matrix()) <= 1e-14 * (1.0 + a.matrix().norm_fro()));
        Ok(())
    })
}

/// X with X*X = λIₙ and Y = cX + Z, where X*Z = 0, so X*Y = λc·Iₙ.
fn star_pair(
    seed: u64,
    n: usize,
    m: usize,
    lambda: f64,
    c: C64,
    z_scale: f64,
) -> (MTangent, MTangent) {
    let mut g = rng(seed);
    let x = sample::star_tangent(&mut g, n, m, lambda).unwrap();
    let w = sample::cmatrix(&mut g, m, n);
    let proj = &CMatrix::identity(m) - &(x.matrix() * x.matrix().adjoint()).scale_re(1.0 / lambda);
    let z = (&proj * &w).scale_re(z_scale);
    let y = &x.matrix().scale(c) + &z;
    (x, MTangent::new(y).unwrap())
}

pub fn star_double_bracket_identity() -> Result<(), String> {
    let s = (
        dims(),
        any::<u64>(),
        0.3..3.0f64,
        -2.0..2.0f64,
        0.1..2.0f64,
        0.0..1.0f64,
    );
    check(128, s, |((n, m), seed, lambda, re, im, zs)| {
        let c = C64::new(re, im);
        let (x, y) = star_pair(seed, n, m, lambda, c, zs);
        let mu = c * lambda;
        let (xh, yh) = (hat(&x), hat(&y));
        let dbl = bracket(&bracket(&xh, &yh).map_err(fail)?, &xh).map_err(fail)?;
        let got = unhat(&dbl, n).map_err(fail)?;
        let coeff = C64::new(-mu.re, 3.0 * mu.im);
        let want = &x.matrix().scale(coeff) + &y.matrix().scale_re(lambda);
        let r = got.matrix().dist(&want) / (1.0 + want.norm_fro());
        prop_assert!(r <= 1e-10, "identity residual {r:e}");
        Ok(())
    })
}

pub fn su2_embedding_brackets() -> Result<(), String> {
    check(
        64,
        (dims(), any::<u64>(), 0.1..5.0f64),
        |((n, m), seed, lambda)| {
            let x = sample::star_tangent(&mut rng(seed), n, m, lambda).map_err(fail)?;
            let e = su2_embed(&x).map_err(fail)?;
            let two = |s: &stiefel_holonomy::cmat::SkewHermitian| s.scale(2.0);
            let r1 = bracket(&e.a, &e.b)
                .unwrap()
                .matrix()
                .dist(two(&e.k).matrix());
            let r2 = bracket(&e.k, &e.a)
                .unwrap()
                .matrix()
                .dist(two(&e.b).matrix());
            let r3 = bracket(&e.k, &e.b)
                .unwrap()
                .matrix()
                .dist(two(&e.a).neg().matrix());
            let worst = r1.max(r2).max(r3);
            prop_assert!(worst <= 1e-10, "bracket residual {worst:e}");
            Ok(())
        },
    )
}

pub fn su2_fiber_iff_circle() -> Result<(), String> {
    check(
        256,
        (any::<u64>(), -PI..PI, 1e-3..1.0f64),
        |(seed, z, off)| {
            let mut g = rng(seed);
            let w = SU2Element::new(sample::unit_quaternion(&mut g)).map_err(fail)?;
            let pw = su2_project(&w);
            let same = su2_project(&w.mul(&SU2Element::circle(z)));
            let d_same = (0..3).map(|k| (same[k] - pw[k]).abs()).fold(0.0, f64::max);
            prop_assert!(
                d_same <= 1e-10,
                "circle element moved the point by {d_same:e}"
            );

            // v off the circle: a unit quaternion whose (w₃, w₄) part has norm `off`.
            let [a, b, c, d] = sample::unit_quaternion(&mut g);
            let head = a.hypot(b).max(1e-12);
            let tail = c.hypot(d).max(1e-12);
            let k = (1.0 - off * off).sqrt();
            let v = SU2Element::new([a / head * k, b / head * k, c / tail * off, d / tail * off])
                .map_err(fail)?;
            let moved = su2_project(&w.mul(&v));
            let d_off = (0..3)
                .map(|k| (moved[k] - pw[k]).powi(2))
                .sum::<f64>()
                .sqrt();
            prop_assert!(d_off > 1e-10, "non-circle element fixed the point");
            Ok(())
        },
    )
}

pub fn projector_round_trip() -> Result<(), String> {
    check(64, (dims(), any::<u64>()), |((n, m), seed)| {
        let f = StiefelFrame::new(sample::frame(&mut rng(seed), n + m, n)).map_err(fail)?;
        let p = frame_project(&f);
        let checked = GrassmannPoint::new(p.matrix().clone(), n).map_err(fail)?;
        prop_assert!(checked.n() == n);
        let sq = (p.matrix() * p.matrix()).dist(p.matrix());
        prop_assert!(sq <= 1e-12);
        Ok(())
    })
}

pub fn geodesic_constant_speed() -> Result<(), String> {
    check(
        32,
        (dims(), any::<u64>(), 0.2..3.0f64),
        |((n, m), seed, lambda)| {
            let x = sample::star_tangent(&mut rng(seed), n, m, lambda).map_err(fail)?;
            let f0 = StiefelFrame::standard(n, m);
            let eps = 1e-4;
            let expected = x.matrix().norm_fro();
            for t in [0.0, 0.37, 1.1, 2.5] {
                let a = base_geodesic(&x, t - eps, &f0).map_err(fail)?;
                let b = base_geodesic(&x, t + eps, &f0).map_err(fail)?;
                let speed = projector_speed(&(b.matrix() - a.matrix()).scale_re(0.5 / eps));
                prop_assert!(
                    (speed - expected).abs() <= 1e-6 * expected,
                    "speed {speed} vs {expected}"
                );
            }
            Ok(())
        },
    )
}

pub fn classify_complex_for_ix() -> Result<(), String> {
    check(
        64,
        (dims(), any::<u64>(), 0.1..5.0f64),
        |((n, m), seed, lambda)| {
            let x = sample::star_tangent(&mut rng(seed), n, m, lambda).map_err(fail)?;
            let c = classify(&x, &x.scale(I)).map_err(fail)?;
            prop_assert_eq!(c.kind, SurfaceKind::Complex);
            prop_assert!((c.mu - C64::new(0.0, c.lambda)).norm() <= 1e-10 * lambda);
            Ok(())
        },
    )
}

pub fn classify_scale_invariant() -> Result<(), String> {
    let s = (dims(), any::<u64>(), 0..4usize, 0.2..5.0f64, any::<bool>());
    check(128, s, |((n, m), seed, family, mag, neg)| {
        let (x, y) = match family {
            0 => star_pair(seed, n, m, 1.3, I, 0.0),
            1 if m >= 2 * n => sample::flat_pair(&mut rng(seed), n, m, 0.7).unwrap(),
            2 => star_pair(seed, n, m, 0.8, C64::new(0.4, 0.9), 0.5),
            _ => star_pair(seed, n, m, 2.0, C64::new(0.6, 0.0), 0.7),
        };
        let Ok(base) = classify(&x, &y) else {
            return Ok(());
        };
        let c = C64::new(if neg { -mag } else { mag }, 0.0);
        let scaled = classify(&x.scale(c), &y.scale(c)).map_err(fail)?;
        prop_assert_eq!(base.kind, scaled.kind);
        prop_assert!((scaled.lambda - base.lambda * mag * mag).abs() <= 1e-9 * scaled.lambda.abs());
        Ok(())
    })
}

fn hopf_like(seed: u64) -> SurfaceSpec {
    let x = sample::star_tangent(&mut rng(seed), 1, 1, 1.0).unwrap();
    SurfaceSpec::new(x.clone(), x.scale(I)).unwrap()
}

pub fn area_second_order() -> Result<(), String> {
    let s = (
        0.0..0.8f64,
        0.05..0.7f64,
        0.1..3.0f64,
        0.2..0.7f64,
        0.05..0.2f64,
    );
    check(32, s, |(p, a, b, cx, r)| {
        let spec = hopf_like(1);
        // Rectangles: the trapezoid rule is exact along the chart axes.
        let exact = rectangle_area_closed(p, a, b);
        for n in [40usize, 80] {
            let got = area_numeric(&spec, &LoopSpec::rectangle(p, a, b, 0.0, n)).map_err(fail)?;
            prop_assert!((got - exact).abs() <= 1e-12 + 10.0 / (n * n) as f64);
        }
        // Circles: the error falls by 4 per doubling.
        let fine = area_numeric(&spec, &LoopSpec::circle(cx + 0.3, 0.0, r, 4000)).map_err(fail)?;
        let e1 = (area_numeric(&spec, &LoopSpec::circle(cx + 0.3, 0.0, r, 20)).map_err(fail)?
            - fine)
            .abs();
        let e2 = (area_numeric(&spec, &LoopSpec::circle(cx + 0.3, 0.0, r, 40)).map_err(fail)?
            - fine)
            .abs();
        let order = (e1 / e2).log2();
        prop_assert!((1.8..=2.2).contains(&order), "observed order {order}");
        Ok(())
    })
}

pub fn chart_in_exponential_orbit() -> Result<(), String> {
    check(
        16,
        (dims(), any::<u64>(), 0.2..3.0f64),
        |((n, m), seed, lambda)| {
            let x = sample::star_tangent(&mut rng(seed), n, m, lambda).map_err(fail)?;
            let spec = SurfaceSpec::new(x.clone(), x.scale(I)).map_err(fail)?;
            let xu = x.scale(C64::new(1.0 / lambda.sqrt(), 0.0));
            for i in 0..=4 {
                for j in 0..=4 {
                    let (cx, cy) = (FRAC_PI_2 * i as f64 / 4.0, 1.5 * j as f64 - 3.0);
                    let p = chart_point(&spec, cx, cy).map_err(fail)?;
                    let dir = xu.scale(C64::from_polar(1.0, -cy));
                    let q = base_geodesic(&dir, cx, &spec.basepoint_frame()).map_err(fail)?;
                    prop_assert!(
                        p.dist(&q) <= 1e-8,
                        "distance {:e} at ({cx}, {cy})",
                        p.dist(&q)
                    );
                }
            }
            Ok(())
        },
    )
}

/// A random complex surface and loop inside its chart domain; circles have
/// radius below `max_r`.
fn complex_case_within(max_r: f64) -> impl Strategy<Value = (usize, usize, u64, f64, LoopSpec)> {
    let rect = (0.05..0.6f64, 0.1..0.8f64, 0.1..1.5f64, -1.0..1.0f64)
        .prop_map(|(p, a, b, q)| LoopSpec::rectangle(p, a, b, q, 1000));
    let circ = (0.45..1.1f64, -1.0..1.0f64, 0.05..max_r)
        .prop_map(|(cx, cy, r)| LoopSpec::circle(cx, cy, r, 1000));
    (
        dims(),
        any::<u64>(),
        0.3..3.0f64,
        prop_oneof![rect, circ],
        any::<bool>(),
    )
        .prop_map(|((n, m), seed, lambda, lp, rev)| {
            let lp = if rev { lp.reversed() } else { lp };
            (n.min(2), m.min(3).max(n.min(2)), seed, lambda, lp)
        })
}

fn complex_case() -> impl Strategy<Value = (usize, usize, u64, f64, LoopSpec)> {
    complex_case_within(0.4)
}

fn complex_spec(n: usize, m: usize, seed: u64, lambda: f64) -> SurfaceSpec {
    let x = sample::star_tangent(&mut rng(seed), n, m, lambda).unwrap();
    SurfaceSpec::new(x.clone(), x.scale(I)).unwrap()
}

pub fn lift_drift_and_horizontality() -> Result<(), String> {
    // The h² constant of the central difference grows like the square of the
    // loop's speed (about 3 for a circle of radius 0.2), so the 5h² bound
    // only holds for loops of moderate size.
    check(12, complex_case_within(0.2), |(n, m, seed, lambda, lp)| {
        let spec = complex_spec(n, m, seed, lambda);
        let (_, lift) = loop_holonomy(&spec, &lp).map_err(fail)?;
        prop_assert!(lift.max_drift() <= 1e-9, "drift {:e}", lift.max_drift());
        let h = 1.0 / lift.steps() as f64;
        let res = lift.horizontality_residuals();
        for j in lift.interior_steps() {
            prop_assert!(
                res[j] <= 5.0 * h * h + 1e-8,
                "horizontality {:e} at step {j}",
                res[j]
            );
        }
        Ok(())
    })
}

pub fn fiber_consistency() -> Result<(), String> {
    check(6, complex_case(), |(n, m, seed, lambda, lp)| {
        let spec = complex_spec(n, m, seed, lambda);
        let worst = |steps: usize| -> Result<f64, TestCaseError> {
            let lp = lp.with_steps(steps);
            let path = BasePath::from_loop(&spec, &lp).map_err(fail)?;
            let [x0, y0] = lp.sample().map_err(fail)?.points[0];
            let f0 = surface_frame(&spec, x0, y0).map_err(fail)?;
            let lift = horizontal_lift(&path, &f0).map_err(fail)?;
            Ok(lift
                .fiber_residuals(&path)
                .map_err(fail)?
                .into_iter()
                .fold(0.0, f64::max))
        };
        let (r1, r2) = (worst(40)?, worst(80)?);
        // Richardson: fit C from the coarse pair, then bound the next level.
        let c = r1.max(r2 * 16.0) * 40f64.powi(4);
        let r3 = worst(160)?;
        prop_assert!(
            r3 <= 2.0 * c / 160f64.powi(4) + 1e-12,
            "r = ({r1:e}, {r2:e}, {r3:e})"
        );
        Ok(())
    })
}

pub fn reversal_and_gauge() -> Result<(), String> {
    check(
        8,
        (complex_case(), any::<u64>()),
        |((n, m, seed, lambda, lp), gseed)| {
            let spec = complex_spec(n, m, seed, lambda);
            let (fwd, _) = loop_holonomy(&spec, &lp).map_err(fail)?;
            let (bwd, _) = loop_holonomy(&spec, &lp.reversed()).map_err(fail)?;
            prop_assert!(bwd.v.matrix().dist(fwd.v.adjoint().matrix()) <= 1e-7);
            prop_assert!(wrap_angle(fwd.theta + bwd.theta).abs() <= 1e-7);

            let path = BasePath::from_loop(&spec, &lp).map_err(fail)?;
            let [x0, y0] = lp.sample().map_err(fail)?.points[0];
            let f0 = surface_frame(&spec, x0, y0).map_err(fail)?;
            let g = sample::unitary(&mut rng(gseed), n);
            let (r, t0, t1) = gauge_transport_check(&path, &f0, &g).map_err(fail)?;
            prop_assert!(r <= 1e-7, "gauge residual {r:e}");
            prop_assert!(wrap_angle(t0 - t1).abs() <= 1e-7);
            Ok(())
        },
    )
}

pub fn complex_holonomy_is_scalar() -> Result<(), String> {
    check(6, complex_case(), |(n, m, seed, lambda, lp)| {
        let spec = complex_spec(n, m, seed, lambda);
        let (res, _) = loop_holonomy(&spec, &lp.with_steps(10_000)).map_err(fail)?;
        prop_assert!(
            res.scalar_residual <= 1e-6 * n as f64,
            "scalar residual {:e}",
            res.scalar_residual
        );
        Ok(())
    })
}

pub fn hopf_phase_matches_z_ode() -> Result<(), String> {
    let s = (
        any::<u64>(),
        0.0..0.8f64,
        0.05..0.7f64,
        0.1..3.0f64,
        -2.0..2.0f64,
    );
    check(16, s, |(seed, p, a, b, q)| {
        let spec = hopf_like(seed);
        let lp = LoopSpec::rectangle(p, a, b, q, 2000);
        let (res, _) = loop_holonomy(&spec, &lp).map_err(fail)?;
        let z = z_ode_delta(&lp.sample().map_err(fail)?.points);
        prop_assert!(
            wrap_angle(res.theta - z).abs() <= 1e-6,
            "θ = {}, z = {z}",
            res.theta
        );
        Ok(())
    })
}

pub fn cli_reports_deterministic() -> Result<(), String> {
    check(4, (any::<u64>(), 0..2usize), |(seed, which)| {
        let seed = seed.to_string();
        let mut args = vec![
            "stiefel-holonomy",
            "holonomy",
            "--seed",
            seed.as_str(),
            "--steps",
            "200",
        ];
        if which == 1 {
            args.extend([
                "--surface",
                "flat",
                "--n",
                "1",
                "--m",
                "2",
                "--output",
                "csv",
            ]);
        }
        let cli = || <Cli as clap::Parser>::try_parse_from(&args).unwrap();
        let a = execute(&cli()).map_err(fail)?;
        let b = execute(&cli()).map_err(fail)?;
        prop_assert_eq!(a.report, b.report);
        Ok(())
    })
}

pub type Property = (&'static str, fn() -> Result<(), String>);

pub const ALL: &[Property] = &[
    ("expm_inverse", expm_inverse),
    ("expm_adjoint", expm_adjoint),
    ("polar_idempotent", polar_idempotent),
    ("frobenius_conjugate_symmetry", frobenius_conjugate_symmetry),
    ("lemma_matches_oracle", lemma_matches_oracle),
    ("jacobi_identity", jacobi_identity),
    ("hm_parts_orthogonal", hm_parts_orthogonal),
    ("star_double_bracket_identity", star_double_bracket_identity),
    ("su2_embedding_brackets", su2_embedding_brackets),
    ("su2_fiber_iff_circle", su2_fiber_iff_circle),
    ("projector_round_trip", projector_round_trip),
    ("geodesic_constant_speed", geodesic_constant_speed),
    ("classify_complex_for_ix", classify_complex_for_ix),
    ("classify_scale_invariant", classify_scale_invariant),
    ("area_second_order", area_second_order),
    ("chart_in_exponential_orbit", chart_in_exponential_orbit),
    ("lift_drift_and_horizontality", lift_drift_and_horizontality),
    ("fiber_consistency", fiber_consistency),
    ("reversal_and_gauge", reversal_and_gauge),
    ("complex_holonomy_is_scalar", complex_holonomy_is_scalar),
    ("hopf_phase_matches_z_ode", hopf_phase_matches_z_ode),
    ("cli_reports_deterministic", cli_reports_deterministic),
];
