//! Seeded randomized checks of the classification theorems.
//!
//! Each case draws its samples from a ChaCha8 generator seeded with the
//! suite seed and switched to a per-case stream, so filtering cases does
//! not change the samples of the others. Samples are evaluated in parallel
//! and aggregated in draw order, which keeps reports byte-for-byte stable.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_constant_axis, AxisFit};
use super::{flatness, tangent_surface_axis, FLATNESS_TOL};
use crate::curve::{
    arclength_reparametrize, helix_from_lambda, helix_test, unit_speed_curve, HelixSpec,
    ParametricCurve, ScalarFunction,
};
use crate::error::{GeometryError, Result};
use crate::generators::{
    cone, constant_angle_surface, cylinder, tangent_developable, AlphaSpec, GeneratorConfig,
};
use crate::interval::Interval;
use crate::lorentz::{hyperbolic_angle, AmbientVector, Isometry, E3};
use crate::surface::{first_fundamental, ParametricSurface};

const GRID: usize = 16;
/// Residual below which a positive sample counts as constant angle.
const POSITIVE_TOL: f64 = 1e-6;
/// Tighter bound for the exact canonical parametrization.
const CANONICAL_TOL: f64 = 1e-8;
/// Plane residual bound for cylinders over lines.
const PLANE_TOL: f64 = 1e-10;
/// Residual above which a negative sample counts as refuted.
const NEGATIVE_TOL: f64 = 1e-3;
/// Agreement required of recovered axes and angles.
const RECOVERY_TOL: f64 = 1e-6;
/// Minimal spread of `τ/κ` accepted for non-helix samples.
const NON_HELIX_SPREAD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremCase {
    /// Canonical parametrization gives constant angle surfaces.
    #[serde(rename = "theorem35")]
    Canonical,
    /// Tangent developables: constant angle iff helix with `τ² < κ²`.
    Tangent,
    /// Constant angle cylinders are planes.
    Cylinder,
    /// Constant angle cones are over circles in spacelike planes.
    Cone,
}

impl TheoremCase {
    pub const ALL: [TheoremCase; 4] = [Self::Canonical, Self::Tangent, Self::Cylinder, Self::Cone];

    pub fn name(self) -> &'static str {
        match self {
            Self::Canonical => "theorem35",
            Self::Tangent => "tangent",
            Self::Cylinder => "cylinder",
            Self::Cone => "cone",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Self::Canonical => "canonical parametrization has constant angle with E3, is flat, and has E=1, F=0",
            Self::Tangent => "tangent developable is constant angle iff the curve is a helix with tau^2 < kappa^2",
            Self::Cylinder => "the only constant angle spacelike cylinders are planes",
            Self::Cone => "a constant angle cone is generated by a circle in a spacelike plane",
        }
    }

    fn stream(self) -> u64 {
        match self {
            Self::Canonical => 1,
            Self::Tangent => 2,
            Self::Cylinder => 3,
            Self::Cone => 4,
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremCase {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| GeometryError::InvalidInput(format!("unknown theorem case {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub label: String,
    pub expect_constant_angle: bool,
    pub residual: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub case: TheoremCase,
    pub statement: String,
    pub passed: bool,
    pub positives: usize,
    pub negatives: usize,
    /// Largest residual among samples expected to be constant angle.
    pub worst_positive_residual: Option<f64>,
    /// Smallest residual among samples expected not to be.
    pub worst_negative_residual: Option<f64>,
    pub samples: Vec<SampleResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub all_passed: bool,
    pub checks: Vec<TheoremCheck>,
}

#[derive(Debug, Clone)]
enum Sample {
    Canonical {
        theta: f64,
        alpha: usize,
        coeffs: [f64; 3],
        iso: Isometry,
    },
    Helix {
        theta: f64,
        a: f64,
        b: f64,
        iso: Isometry,
    },
    NonHelix {
        r0: f64,
        r1: f64,
        a: f64,
    },
    CurvedCylinder {
        phi: [f64; 3],
        iso: Isometry,
    },
    LineCylinder {
        azimuth: f64,
        offset: [f64; 3],
        iso: Isometry,
    },
    Circle {
        rho: f64,
        iso: Isometry,
    },
    NonCircle {
        h0: f64,
        amp: f64,
    },
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval { lo, hi }
}

fn random_isometry(rng: &mut ChaCha8Rng) -> Isometry {
    Isometry::new(rng.gen_range(0.0..1.5), rng.gen_range(0.0..TAU))
}

fn draw(case: TheoremCase, rng: &mut ChaCha8Rng) -> Vec<Sample> {
    let mut out = Vec::new();
    match case {
        TheoremCase::Canonical => {
            for k in 0..4 {
                out.push(Sample::Canonical {
                    theta: rng.gen_range(0.2..2.5),
                    alpha: k,
                    coeffs: [
                        rng.gen_range(0.5..1.5),
                        rng.gen_range(-0.2..0.2),
                        rng.gen_range(0.0..0.2),
                    ],
                    iso: random_isometry(rng),
                });
            }
        }
        TheoremCase::Tangent => {
            for _ in 0..10 {
                out.push(Sample::Helix {
                    theta: rng.gen_range(0.2..2.5),
                    a: rng.gen_range(0.5..1.5),
                    b: rng.gen_range(0.0..0.5),
                    iso: random_isometry(rng),
                });
            }
            let mut accepted = 0;
            while accepted < 10 {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let s = Sample::NonHelix {
                    r0: rng.gen_range(0.5..1.5),
                    r1: sign * rng.gen_range(0.25..0.4),
                    a: rng.gen_range(1.0..2.0),
                };
                if non_helix_curve(&s).is_ok_and(|c| ratio_spread(&c) >= NON_HELIX_SPREAD) {
                    out.push(s);
                    accepted += 1;
                }
            }
        }
        TheoremCase::Cylinder => {
            for _ in 0..5 {
                out.push(Sample::CurvedCylinder {
                    phi: [
                        rng.gen_range(-0.5..0.5),
                        rng.gen_range(0.3..1.2),
                        rng.gen_range(-0.1..0.1),
                    ],
                    iso: random_isometry(rng),
                });
            }
            for _ in 0..3 {
                out.push(Sample::LineCylinder {
                    azimuth: rng.gen_range(0.0..TAU),
                    offset: [
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    ],
                    iso: random_isometry(rng),
                });
            }
        }
        TheoremCase::Cone => {
            for _ in 0..3 {
                out.push(Sample::Circle {
                    rho: rng.gen_range(0.3..2.0),
                    iso: random_isometry(rng),
                });
            }
            for _ in 0..5 {
                out.push(Sample::NonCircle {
                    h0: rng.gen_range(-0.5..0.5),
                    amp: rng.gen_range(0.2..0.4),
                });
            }
        }
    }
    out
}

fn ratio_spread(c: &ParametricCurve) -> f64 {
    let grid = c.domain().linspace(33);
    let ratios: Vec<f64> = grid
        .iter()
        .filter_map(|&s| c.frenet(s).ok().map(|f| f.tau / f.kappa))
        .collect();
    if ratios.len() < grid.len() {
        return 0.0;
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    max - min
}

fn non_helix_curve(s: &Sample) -> Result<ParametricCurve> {
    let Sample::NonHelix { r0, r1, a } = *s else {
        return Err(GeometryError::InvalidInput("not a non-helix sample".into()));
    };
    unit_speed_curve(
        ScalarFunction::Polynomial(vec![r0, r1]),
        ScalarFunction::Polynomial(vec![0.0, a]),
        iv(0.0, 4.0),
        AmbientVector::ZERO,
    )
}

/// Circle of hyperbolic radius `rho` on the de Sitter sphere, unit speed.
pub(crate) fn desitter_circle(rho: f64, domain: Interval) -> ParametricCurve {
    let (ch, sh) = (rho.cosh(), rho.sinh());
    ParametricCurve::analytic(
        domain,
        move |s: f64| AmbientVector::new(ch * (s / ch).cos(), ch * (s / ch).sin(), -sh),
        move |s: f64| AmbientVector::new(-(s / ch).sin(), (s / ch).cos(), 0.0),
        move |s: f64| AmbientVector::new(-(s / ch).cos() / ch, -(s / ch).sin() / ch, 0.0),
        move |s: f64| {
            AmbientVector::new((s / ch).sin() / (ch * ch), -(s / ch).cos() / (ch * ch), 0.0)
        },
    )
}

/// Unit-speed de Sitter curve `(cosh h cos s, cosh h sin s, sinh h)` with
/// `h = h₀ + amp·sin 2s`, reparametrized by arc length.
pub(crate) fn desitter_wave(h0: f64, amp: f64) -> Result<ParametricCurve> {
    let raw = ParametricCurve::finite_difference(iv(0.0, 3.0), move |s: f64| {
        let h = h0 + amp * (2.0 * s).sin();
        AmbientVector::new(h.cosh() * s.cos(), h.cosh() * s.sin(), h.sinh())
    });
    arclength_reparametrize(&raw, 400)
}

struct Outcome {
    residual: f64,
    ok: bool,
    detail: String,
}

fn fit_grid(surf: &ParametricSurface) -> Result<AxisFit> {
    fit_constant_axis(surf, &surf.grid(GRID, GRID))
}

fn positive(fit: &AxisFit, tol: f64, extra: Vec<(&str, f64, f64)>) -> Outcome {
    let mut failures = Vec::new();
    if !(fit.residual <= tol) {
        failures.push(format!("residual {:e} > {tol:e}", fit.residual));
    }
    for (name, err, bound) in &extra {
        if !(err <= bound) {
            failures.push(format!("{name} error {err:e} > {bound:e}"));
        }
    }
    Outcome {
        residual: fit.residual,
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("theta {:.12}", fit.theta)
        } else {
            failures.join("; ")
        },
    }
}

fn negative(fit: &AxisFit) -> Outcome {
    let ok = fit.residual > NEGATIVE_TOL;
    Outcome {
        residual: fit.residual,
        ok,
        detail: if ok {
            "not constant angle".into()
        } else {
            format!("residual {:e} <= {NEGATIVE_TOL:e}", fit.residual)
        },
    }
}

fn evaluate(sample: &Sample) -> Result<Outcome> {
    match *sample {
        Sample::Canonical {
            theta,
            alpha,
            coeffs,
            iso,
        } => {
            let (spec, v) = match alpha {
                0 => (AlphaSpec::zero(), iv(0.0, 6.0)),
                1 => (AlphaSpec::one(), iv(0.0, 6.0)),
                2 => (AlphaSpec::inv_sin(), iv(0.3, 2.8)),
                _ => (AlphaSpec::polynomial(coeffs.to_vec())?, iv(0.0, 2.0)),
            };
            let cfg = GeneratorConfig::new(theta, iv(-2.0, -0.5), v, GRID, GRID)?;
            let base = constant_angle_surface(&cfg, &spec)?;
            let surf = base.map_linear(move |x| iso.apply(x));
            let grid = surf.grid(GRID, GRID);
            let fit = fit_constant_axis(&surf, &grid)?;
            let (kmax, _) = flatness(&surf, &grid)?;
            let mut metric = 0.0f64;
            for &p in &grid {
                let (e, f, _) = first_fundamental(&surf, p)?;
                metric = metric.max((e - 1.0).abs()).max(f.abs());
            }
            Ok(positive(
                &fit,
                CANONICAL_TOL,
                vec![
                    ("theta", (fit.theta - theta).abs(), RECOVERY_TOL),
                    ("axis", fit.axis.max_abs_diff(iso.apply(E3)), RECOVERY_TOL),
                    ("flatness", kmax, FLATNESS_TOL),
                    ("metric", metric, 1e-10),
                ],
            ))
        }
        Sample::Helix { theta, a, b, iso } => {
            let spec = HelixSpec::new(
                theta,
                ScalarFunction::Polynomial(vec![0.0, a, b]),
                iv(0.2, 2.2),
            )?;
            let curve = helix_from_lambda(&spec)?.map_linear(move |x| iso.apply(x));
            let surf = tangent_developable(&curve, iv(0.05, 1.0))?;
            let fit = fit_grid(&surf)?;
            let mut axis_err = 0.0f64;
            let mut theta_err = 0.0f64;
            for s in curve.domain().linspace(5) {
                let (axis, th) = tangent_surface_axis(&curve, s)?;
                axis_err = axis_err.max(axis.max_abs_diff(fit.axis));
                theta_err = theta_err.max((th - fit.theta).abs());
            }
            Ok(positive(
                &fit,
                POSITIVE_TOL,
                vec![
                    ("axis vs Frenet formula", axis_err, RECOVERY_TOL),
                    ("theta", theta_err, RECOVERY_TOL),
                ],
            ))
        }
        Sample::NonHelix { .. } => {
            let curve = non_helix_curve(sample)?;
            if helix_test(&curve, &curve.domain().linspace(33))?.is_helix {
                return Ok(Outcome {
                    residual: 0.0,
                    ok: false,
                    detail: "sample unexpectedly passes the helix test".into(),
                });
            }
            let surf = tangent_developable(&curve, iv(0.05, 1.0))?;
            Ok(negative(&fit_grid(&surf)?))
        }
        Sample::CurvedCylinder { phi, iso } => {
            let profile = unit_speed_curve(
                ScalarFunction::Polynomial(phi.to_vec()),
                ScalarFunction::Constant(PI / 2.0),
                iv(-1.0, 1.0),
                AmbientVector::ZERO,
            )?
            .map_linear(move |x| iso.apply(x));
            let surf = cylinder(
                &profile,
                iso.apply(AmbientVector::new(1.0, 0.0, 0.0)),
                iv(-1.0, 1.0),
            )?;
            Ok(negative(&fit_grid(&surf)?))
        }
        Sample::LineCylinder {
            azimuth,
            offset,
            iso,
        } => {
            let w = iso.apply(AmbientVector::new(azimuth.cos(), azimuth.sin(), 0.0));
            let d = iso.apply(AmbientVector::new(-azimuth.sin(), azimuth.cos(), 0.0));
            let p = AmbientVector::from_array(offset);
            let line = ParametricCurve::analytic(
                iv(-1.0, 1.0),
                move |s| p + w * s,
                move |_| w,
                |_| AmbientVector::ZERO,
                |_| AmbientVector::ZERO,
            );
            let surf = cylinder(&line, d, iv(-1.0, 1.0))?;
            let fit = fit_grid(&surf)?;
            // the plane's normal is the boosted E₃, at hyperbolic angle `rapidity` from E₃
            let tilt = hyperbolic_angle(fit.axis, E3)?;
            Ok(positive(
                &fit,
                PLANE_TOL,
                vec![
                    ("theta", fit.theta, RECOVERY_TOL),
                    ("tilt", (tilt - iso.rapidity).abs(), RECOVERY_TOL),
                ],
            ))
        }
        Sample::Circle { rho, iso } => {
            let curve = desitter_circle(rho, iv(0.0, 5.0)).map_linear(move |x| iso.apply(x));
            let surf = cone(&curve, iv(0.2, 2.0))?;
            let fit = fit_grid(&surf)?;
            Ok(positive(
                &fit,
                POSITIVE_TOL,
                vec![
                    ("theta", (fit.theta - rho).abs(), RECOVERY_TOL),
                    ("axis", fit.axis.max_abs_diff(iso.apply(E3)), RECOVERY_TOL),
                ],
            ))
        }
        Sample::NonCircle { h0, amp } => {
            let curve = desitter_wave(h0, amp)?;
            let surf = cone(&curve, iv(0.2, 2.0))?;
            Ok(negative(&fit_grid(&surf)?))
        }
    }
}

fn label(sample: &Sample) -> (String, bool) {
    match sample {
        Sample::Canonical { theta, alpha, .. } => {
            let name = ["zero", "one", "invsin", "poly"][(*alpha).min(3)];
            (format!("canonical theta={theta:.6} alpha={name}"), true)
        }
        Sample::Helix { theta, a, b, .. } => (
            format!("helix theta={theta:.6} lambda={a:.6}s+{b:.6}s^2"),
            true,
        ),
        Sample::NonHelix { r0, r1, a } => (
            format!("non-helix rapidity={r0:.6}{r1:+.6}s lambda={a:.6}s"),
            false,
        ),
        Sample::CurvedCylinder { phi, .. } => (
            format!(
                "curved cylinder phi={:.6}{:+.6}s{:+.6}s^2",
                phi[0], phi[1], phi[2]
            ),
            false,
        ),
        Sample::LineCylinder { iso, .. } => {
            (format!("line cylinder tilt={:.6}", iso.rapidity), true)
        }
        Sample::Circle { rho, .. } => (format!("de Sitter circle radius={rho:.6}"), true),
        Sample::NonCircle { h0, amp } => (format!("de Sitter wave h={h0:.6}{amp:+.6}sin2s"), false),
    }
}

fn run_case(seed: u64, case: TheoremCase) -> TheoremCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case.stream());
    let samples = draw(case, &mut rng);
    let results: Vec<SampleResult> = samples
        .par_iter()
        .map(|s| {
            let (label, expect) = label(s);
            match evaluate(s) {
                Ok(o) => SampleResult {
                    label,
                    expect_constant_angle: expect,
                    residual: o.residual,
                    passed: o.ok,
                    detail: o.detail,
                },
                Err(e) => SampleResult {
                    label,
                    expect_constant_angle: expect,
                    residual: f64::INFINITY,
                    passed: false,
                    detail: format!("{}: {e}", e.name()),
                },
            }
        })
        .collect();
    let pos: Vec<f64> = results
        .iter()
        .filter(|r| r.expect_constant_angle)
        .map(|r| r.residual)
        .collect();
    let neg: Vec<f64> = results
        .iter()
        .filter(|r| !r.expect_constant_angle)
        .map(|r| r.residual)
        .collect();
    TheoremCheck {
        case,
        statement: case.statement().into(),
        passed: results.iter().all(|r| r.passed),
        positives: pos.len(),
        negatives: neg.len(),
        worst_positive_residual: pos
            .iter()
            .cloned()
            .reduce(f64::max)
            .filter(|r| r.is_finite()),
        worst_negative_residual: neg
            .iter()
            .cloned()
            .reduce(f64::min)
            .filter(|r| r.is_finite()),
        samples: results,
    }
}

/// Runs the selected theorem checks with samples drawn from `seed`.
///
/// Failures are recorded in the report, never raised.
pub fn check_theorem_suite(seed: u64, cases: &[TheoremCase]) -> SuiteReport {
    let checks: Vec<TheoremCheck> = cases.iter().map(|&c| run_case(seed, c)).collect();
    SuiteReport {
        seed,
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
