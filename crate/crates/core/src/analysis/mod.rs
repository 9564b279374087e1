//! Detection and verification of the constant angle property.

mod fit;
mod suite;

pub use fit::{
    angle_spread, brute_force_min_residual, fit_axis_to_normals, fit_constant_axis,
    verify_constant_angle, AxisFit, Verification, MIN_SAMPLES,
};
pub use suite::{check_theorem_suite, SampleResult, SuiteReport, TheoremCase, TheoremCheck};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{frenet_frame, helix_test, helix_tolerance, ParametricCurve, KAPPA_MIN};
use crate::error::{GeometryError, Result};
use crate::lorentz::AmbientVector;
use crate::surface::{shape_operator, ParamPoint, ParametricSurface};

/// Bound on `|K|` expected of constant angle surfaces.
pub const FLATNESS_TOL: f64 = 1e-5;

/// Axis and angle of the tangent developable of a helix at parameter `s`:
///
/// ```text
/// U = (−τ T + κ B)/√(κ² − τ²),   cosh θ = κ/√(κ² − τ²),
/// ```
///
/// with `U` made future-directed.
pub fn tangent_surface_axis(c: &ParametricCurve, s: f64) -> Result<(AmbientVector, f64)> {
    let grid = c.domain().linspace(33);
    let report = helix_test(c, &grid)?;
    if !report.is_helix {
        return Err(GeometryError::NotAHelix {
            deviation: report.max_deviation,
        });
    }
    let f = frenet_frame(c, s)?;
    let gap = f.kappa * f.kappa - f.tau * f.tau;
    if !(gap > 0.0) {
        return Err(GeometryError::TorsionDominates { at: s });
    }
    let root = gap.sqrt();
    let axis = ((f.tangent * -f.tau + f.binormal * f.kappa) / root).future_directed();
    // sinh θ = |τ|/√(κ² − τ²) keeps precision near θ = 0
    let theta = (f.tau.abs() / root).asinh();
    Ok((axis, theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    pub fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Self {
                min: 0.0,
                max: 0.0,
                mean: 0.0,
            };
        }
        Self {
            min: xs.iter().cloned().fold(f64::INFINITY, f64::min),
            max: xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            mean: xs.iter().sum::<f64>() / xs.len() as f64,
        }
    }

    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveClassification {
    pub is_line: bool,
    pub is_circle_spacelike_plane: bool,
    pub is_helix: bool,
    pub kappa_stats: Stats,
    pub tau_stats: Stats,
}

/// Line, circle-in-a-spacelike-plane and helix tests on a sampled curve.
///
/// A circle needs `τ ≈ 0`, `κ ≈ const` and a constant timelike binormal,
/// with the helix tolerance of the curve's derivative mode.
pub fn classify_curve(c: &ParametricCurve, grid: &[f64]) -> Result<CurveClassification> {
    if grid.is_empty() {
        return Err(GeometryError::InvalidInput(
            "curve classification needs a non-empty grid".into(),
        ));
    }
    let rough_kappa: Vec<f64> = grid
        .iter()
        .map(|&s| {
            let (v, a) = (c.derivative(1, s), c.derivative(2, s));
            let q = v.square();
            (a - v * (a.dot(v) / q)).euclidean_norm() / q
        })
        .collect();
    if rough_kappa.iter().all(|&k| k < KAPPA_MIN) {
        return Ok(CurveClassification {
            is_line: true,
            is_circle_spacelike_plane: false,
            is_helix: false,
            kappa_stats: Stats::of(&rough_kappa),
            tau_stats: Stats::of(&vec![0.0; grid.len()]),
        });
    }
    let frames = grid
        .iter()
        .map(|&s| frenet_frame(c, s))
        .collect::<Result<Vec<_>>>()?;
    let kappas: Vec<f64> = frames.iter().map(|f| f.kappa).collect();
    let taus: Vec<f64> = frames.iter().map(|f| f.tau).collect();
    let (kappa_stats, tau_stats) = (Stats::of(&kappas), Stats::of(&taus));
    let tol = helix_tolerance(c.mode());
    let b0 = frames[0].binormal;
    let circle = taus.iter().all(|t| t.abs() <= tol)
        && kappa_stats.spread() <= tol * (1.0 + kappa_stats.max)
        && frames
            .iter()
            .all(|f| f.binormal.max_abs_diff(b0) <= tol && f.binormal.is_timelike());
    Ok(CurveClassification {
        is_line: false,
        is_circle_spacelike_plane: circle,
        is_helix: helix_test(c, grid)?.is_helix,
        kappa_stats,
        tau_stats,
    })
}

/// The four flat families, plus surfaces of unknown origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceFamily {
    Plane,
    Cone,
    Cylinder,
    TangentDevelopable,
    Unknown,
}

impl fmt::Display for SurfaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Plane => "plane",
            Self::Cone => "cone",
            Self::Cylinder => "cylinder",
            Self::TangentDevelopable => "tangent_developable",
            Self::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

impl FromStr for SurfaceFamily {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane" => Ok(Self::Plane),
            "cone" => Ok(Self::Cone),
            "cylinder" => Ok(Self::Cylinder),
            "tangent_developable" | "tangent" => Ok(Self::TangentDevelopable),
            "unknown" => Ok(Self::Unknown),
            _ => Err(GeometryError::InvalidInput(format!(
                "unknown surface family {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub family: SurfaceFamily,
    pub is_constant_angle: bool,
    pub axis_fit: AxisFit,
    /// `max |K|` over the grid.
    pub flatness_max: f64,
    pub flatness_mean: f64,
    pub notes: String,
}

/// `max |K|` and `mean |K|` over a grid.
pub fn flatness(surf: &ParametricSurface, grid: &[ParamPoint]) -> Result<(f64, f64)> {
    let ks = grid
        .par_iter()
        .map(|&p| shape_operator(surf, p).map(|f| f.gaussian_curvature.abs()))
        .collect::<Result<Vec<f64>>>()?;
    let max = ks.iter().cloned().fold(0.0, f64::max);
    let mean = ks.iter().sum::<f64>() / ks.len().max(1) as f64;
    Ok((max, mean))
}

/// Constant angle verdict and flatness of a surface of known family.
pub fn classify_surface(
    surf: &ParametricSurface,
    family: SurfaceFamily,
    grid: &[ParamPoint],
    tol: f64,
) -> Result<ClassificationReport> {
    let verdict = verify_constant_angle(surf, grid, tol, None)?;
    let (flatness_max, flatness_mean) = flatness(surf, grid)?;
    let mut notes = Vec::new();
    if verdict.ok {
        notes.push(format!(
            "normals make hyperbolic angle {:.12} with axis {}",
            verdict.fit.theta, verdict.fit.axis
        ));
        if flatness_max >= FLATNESS_TOL {
            notes.push(format!(
                "inconsistent: constant angle but max |K| = {flatness_max:e}"
            ));
        }
    } else {
        notes.push(format!(
            "no axis with residual <= {tol:e} (best {:e})",
            verdict.fit.residual
        ));
    }
    Ok(ClassificationReport {
        family,
        is_constant_angle: verdict.ok,
        axis_fit: verdict.fit,
        flatness_max,
        flatness_mean,
        notes: notes.join("; "),
    })
}
