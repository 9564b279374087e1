//! Surface and curve descriptions reachable from the command line.

use std::fmt;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use casurf::analysis::SurfaceFamily;
use casurf::curve::{arclength_reparametrize, helix_from_lambda, read_curve_csv};
use casurf::generators::{
    cone, constant_angle_surface, cylinder, tangent_developable, tilted_plane, AlphaSpec,
    GeneratorConfig,
};
use casurf::{
    AmbientVector, HelixSpec, Interval, ParametricCurve, ParametricSurface, ScalarFunction,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Canonical parametrization from `θ` and `α`.
    #[serde(rename = "theorem35")]
    Canonical,
    Tangent,
    Cylinder,
    Cone,
    Plane,
}

impl Family {
    pub fn surface_family(self) -> SurfaceFamily {
        match self {
            Self::Canonical => SurfaceFamily::Unknown,
            Self::Tangent => SurfaceFamily::TangentDevelopable,
            Self::Cylinder => SurfaceFamily::Cylinder,
            Self::Cone => SurfaceFamily::Cone,
            Self::Plane => SurfaceFamily::Plane,
        }
    }

    /// Whether the parameters are named `(s, t)` rather than `(u, v)`.
    pub fn is_ruled_over_curve(self) -> bool {
        matches!(self, Self::Tangent | Self::Cylinder | Self::Cone)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Canonical => "theorem35",
            Self::Tangent => "tangent",
            Self::Cylinder => "cylinder",
            Self::Cone => "cone",
            Self::Plane => "plane",
        })
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "theorem35" => Ok(Self::Canonical),
            "tangent" => Ok(Self::Tangent),
            "cylinder" => Ok(Self::Cylinder),
            "cone" => Ok(Self::Cone),
            "plane" => Ok(Self::Plane),
            _ => Err(CliError::Usage(format!(
                "unknown family {s:?} (expected theorem35|tangent|cylinder|cone|plane)"
            ))),
        }
    }
}

/// Comma separated reals.
pub fn parse_reals(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bad number {c:?} in {s:?}")))
        })
        .collect()
}

/// `poly:c0,c1,...`.
pub fn parse_poly(s: &str) -> Result<Vec<f64>, CliError> {
    let body = s
        .strip_prefix("poly:")
        .ok_or_else(|| CliError::Usage(format!("expected poly:c0,c1,... got {s:?}")))?;
    parse_reals(body)
}

pub fn parse_range(s: &str) -> Result<Interval, CliError> {
    s.parse::<Interval>()
        .map_err(|e| CliError::Usage(format!("bad range {s:?}: {e}")))
}

/// `zero | one | invsin | poly:c0,... | file:PATH` (CSV with columns `v,alpha`).
pub fn parse_alpha(s: &str) -> Result<AlphaSpec, CliError> {
    match s {
        "zero" => Ok(AlphaSpec::zero()),
        "one" => Ok(AlphaSpec::one()),
        "invsin" => Ok(AlphaSpec::inv_sin()),
        _ if s.starts_with("poly:") => {
            AlphaSpec::polynomial(parse_poly(s)?).map_err(CliError::from)
        }
        _ => {
            let path = s.strip_prefix("file:").ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown alpha {s:?} (expected zero|one|invsin|poly:..|file:PATH)"
                ))
            })?;
            let (nodes, values) = read_alpha_csv(Path::new(path))?;
            AlphaSpec::sampled(nodes, values).map_err(CliError::from)
        }
    }
}

fn read_alpha_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let (mut nodes, mut values) = (Vec::new(), Vec::new());
    for row in rdr.deserialize::<(f64, f64)>() {
        let (v, a) = row.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        nodes.push(v);
        values.push(a);
    }
    Ok((nodes, values))
}

/// Named curves, or `file:PATH` with columns `s,x1,x2,x3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvePreset {
    /// Helix with `λ(s) = s`.
    Example2,
    /// Helix with `λ(s) = s²`.
    Example3,
    /// Unit circle in the plane `x₃ = 0`.
    Circle,
    Line,
    /// `(0, sinh s, cosh s)`.
    Hyperbola,
    /// A non-circular curve on the de Sitter surface.
    DesitterWave,
}

impl CurvePreset {
    pub const NAMES: &'static str = "example2|example3|circle|line|hyperbola|desitter-wave";

    pub fn default_range(self) -> Interval {
        let (lo, hi) = match self {
            Self::Example2 => (0.0, std::f64::consts::TAU),
            Self::Example3 => (0.2, 2.5),
            Self::Circle | Self::DesitterWave => (0.0, 3.0),
            Self::Line | Self::Hyperbola => (-1.0, 1.0),
        };
        Interval { lo, hi }
    }
}

impl FromStr for CurvePreset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "example2" => Ok(Self::Example2),
            "example3" => Ok(Self::Example3),
            "circle" => Ok(Self::Circle),
            "line" => Ok(Self::Line),
            "hyperbola" => Ok(Self::Hyperbola),
            "desitter-wave" => Ok(Self::DesitterWave),
            _ => Err(CliError::Usage(format!(
                "unknown curve {s:?} (expected file:PATH or {})",
                Self::NAMES
            ))),
        }
    }
}

/// Builds a curve from `file:PATH` or a preset name on `s_range`.
pub fn build_curve(
    spec: &str,
    theta: f64,
    s_range: Option<Interval>,
) -> Result<ParametricCurve, CliError> {
    if let Some(path) = spec.strip_prefix("file:") {
        let file = File::open(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        let c = read_curve_csv(file)?;
        return match s_range {
            Some(r) if !c.domain().contains_interval(&r) => Err(CliError::Usage(format!(
                "s range {r} leaves the sampled range {} of {path}",
                c.domain()
            ))),
            Some(r) => Ok(c.with_domain(r)),
            None => Ok(c),
        };
    }
    let preset: CurvePreset = spec.parse()?;
    let s = s_range.unwrap_or(preset.default_range());
    let curve = match preset {
        CurvePreset::Example2 => helix_from_lambda(&HelixSpec::circular(theta, s)?)?,
        CurvePreset::Example3 => helix_from_lambda(&HelixSpec::fresnel(theta, s)?)?,
        CurvePreset::Circle => ParametricCurve::analytic(
            s,
            |s: f64| AmbientVector::new(s.cos(), s.sin(), 0.0),
            |s: f64| AmbientVector::new(-s.sin(), s.cos(), 0.0),
            |s: f64| AmbientVector::new(-s.cos(), -s.sin(), 0.0),
            |s: f64| AmbientVector::new(s.sin(), -s.cos(), 0.0),
        ),
        CurvePreset::Line => ParametricCurve::analytic(
            s,
            |s: f64| AmbientVector::new(s, 0.0, 0.0),
            |_| AmbientVector::new(1.0, 0.0, 0.0),
            |_| AmbientVector::ZERO,
            |_| AmbientVector::ZERO,
        ),
        CurvePreset::Hyperbola => ParametricCurve::analytic(
            s,
            |s: f64| AmbientVector::new(0.0, s.sinh(), s.cosh()),
            |s: f64| AmbientVector::new(0.0, s.cosh(), s.sinh()),
            |s: f64| AmbientVector::new(0.0, s.sinh(), s.cosh()),
            |s: f64| AmbientVector::new(0.0, s.cosh(), s.sinh()),
        ),
        CurvePreset::DesitterWave => {
            let raw = ParametricCurve::finite_difference(s, |s: f64| {
                let h = 0.3 * (2.0 * s).sin();
                AmbientVector::new(h.cosh() * s.cos(), h.cosh() * s.sin(), h.sinh())
            });
            arclength_reparametrize(&raw, 400)?
        }
    };
    Ok(curve)
}

/// Everything needed to rebuild a surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub family: Family,
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub helix_lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
    /// `u` range, or `s` for surfaces over a curve.
    pub first: Interval,
    /// `v` range, or `t` for surfaces over a curve.
    pub second: Interval,
    pub nu: usize,
    pub nv: usize,
}

impl Recipe {
    pub fn build(&self) -> Result<ParametricSurface, CliError> {
        match self.family {
            Family::Canonical => {
                let alpha = parse_alpha(self.alpha.as_deref().unwrap_or("zero"))?;
                let cfg =
                    GeneratorConfig::new(self.theta, self.first, self.second, self.nu, self.nv)?;
                Ok(constant_angle_surface(&cfg, &alpha)?)
            }
            Family::Plane => Ok(tilted_plane(self.theta, self.first, self.second)?),
            Family::Tangent => {
                let curve = match (&self.helix_lambda, &self.curve) {
                    (Some(lambda), None) => {
                        let spec = HelixSpec::new(
                            self.theta,
                            ScalarFunction::Polynomial(parse_poly(lambda)?),
                            self.first,
                        )?;
                        helix_from_lambda(&spec)?
                    }
                    (None, Some(c)) => build_curve(c, self.theta, Some(self.first))?,
                    _ => {
                        return Err(CliError::Usage(
                            "tangent family needs exactly one of --helix-lambda or --curve".into(),
                        ))
                    }
                };
                Ok(tangent_developable(&curve, self.second)?)
            }
            Family::Cylinder => {
                let curve = build_curve(self.required_curve()?, self.theta, Some(self.first))?;
                let [a, b, c] = self.direction.unwrap_or([1.0, 0.0, 0.0]);
                Ok(cylinder(&curve, AmbientVector::new(a, b, c), self.second)?)
            }
            Family::Cone => {
                let curve = build_curve(self.required_curve()?, self.theta, Some(self.first))?;
                Ok(cone(&curve, self.second)?)
            }
        }
    }

    fn required_curve(&self) -> Result<&str, CliError> {
        self.curve
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("family {} needs --curve", self.family)))
    }
}
