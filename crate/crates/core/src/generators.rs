//! Constructors for spacelike constant angle surfaces and the flat ruled families.
//!
//! The canonical constant angle surface with axis `E₃` and angle `θ > 0` is
//!
//! ```text
//! x(u, v) = (u cosh θ cos v + ψ₁(v), u cosh θ sin v + ψ₂(v), −u sinh θ),
//! ψ(v)    = sinh θ (∫ α(v) sin v dv, −∫ α(v) cos v dv),
//! ```
//!
//! with induced metric `du² + β² dv²`, `β = u cosh θ − α(v) sinh θ`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::curve::{
    helix_from_lambda, poly_derivative, HelixSpec, ParametricCurve, ScalarFunction,
};
use crate::error::{GeometryError, Result};
use crate::interval::Interval;
use crate::lorentz::{AmbientVector, CausalCharacter, Isometry};
use crate::quadrature::Primitive;
use crate::spline::CubicSpline;
use crate::surface::{ParametricSurface, Partials};

/// Regularity threshold for ruled surfaces (`t·κ`, `t·|γ × γ'|`).
pub const EPS_REG: f64 = 1e-6;
/// Margin kept from the zeros of `sin v` by the `1/sin v` preset.
pub const INVSIN_MARGIN: f64 = 1e-2;
/// Tolerance on `⟨γ, γ⟩ = 1` for cone generating curves.
pub const DESITTER_TOL: f64 = 1e-8;
/// Number of curve samples used to validate generator preconditions.
const CHECK_SAMPLES: usize = 65;

/// The function `α(v)` of the canonical parametrization.
#[derive(Debug, Clone)]
pub enum AlphaKind {
    Zero,
    One,
    /// `α(v) = 1/sin v`.
    InvSin,
    /// `α(v) = Σ cᵢ vⁱ`.
    Polynomial(Vec<f64>),
    /// Natural cubic spline through samples.
    Sampled(CubicSpline),
    /// `α(v) = −coth θ · λ⁻¹(v − π)` for a monotone turning function `λ`.
    InverseTurning {
        coth: f64,
        helix: HelixSpec,
    },
}

/// `α` together with an optional normalization of `ψ`.
#[derive(Debug, Clone)]
pub struct AlphaSpec {
    pub kind: AlphaKind,
    /// `ψ(v₀) = (p₁, p₂)`; without it closed forms are used as written and
    /// numeric primitives vanish at the start of the `v` range.
    pub anchor: Option<(f64, [f64; 2])>,
}

impl AlphaSpec {
    pub fn new(kind: AlphaKind) -> Self {
        Self { kind, anchor: None }
    }

    pub fn zero() -> Self {
        Self::new(AlphaKind::Zero)
    }

    pub fn one() -> Self {
        Self::new(AlphaKind::One)
    }

    pub fn inv_sin() -> Self {
        Self::new(AlphaKind::InvSin)
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::InvalidInput(
                "alpha polynomial needs finite coefficients".into(),
            ));
        }
        Ok(Self::new(AlphaKind::Polynomial(coeffs)))
    }

    /// Spline through `(vᵢ, αᵢ)` samples; its domain is the sample range.
    pub fn sampled(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(AlphaKind::Sampled(CubicSpline::natural(
            nodes, values,
        )?)))
    }

    pub fn with_anchor(mut self, v: f64, psi: [f64; 2]) -> Self {
        self.anchor = Some((v, psi));
        self
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AlphaKind::Zero => "zero",
            AlphaKind::One => "one",
            AlphaKind::InvSin => "invsin",
            AlphaKind::Polynomial(_) => "poly",
            AlphaKind::Sampled(_) => "sampled",
            AlphaKind::InverseTurning { .. } => "inverse-turning",
        }
    }

    pub fn eval(&self, v: f64) -> f64 {
        match &self.kind {
            AlphaKind::Zero => 0.0,
            AlphaKind::One => 1.0,
            AlphaKind::InvSin => 1.0 / v.sin(),
            AlphaKind::Polynomial(c) => poly_derivative(c, 0, v),
            AlphaKind::Sampled(s) => s.eval(v),
            AlphaKind::InverseTurning { coth, helix } => {
                helix.inverse_lambda(v - PI).map_or(f64::NAN, |s| -coth * s)
            }
        }
    }

    pub fn derivative(&self, v: f64) -> f64 {
        match &self.kind {
            AlphaKind::Zero | AlphaKind::One => 0.0,
            AlphaKind::InvSin => -v.cos() / (v.sin() * v.sin()),
            AlphaKind::Polynomial(c) => poly_derivative(c, 1, v),
            AlphaKind::Sampled(s) => s.derivative(v, 1),
            AlphaKind::InverseTurning { coth, helix } => helix
                .inverse_lambda(v - PI)
                .map_or(f64::NAN, |s| -coth / helix.lambda.derivative(1, s)),
        }
    }

    /// Interval on which `α` is defined, if bounded.
    pub fn domain(&self) -> Option<Interval> {
        match &self.kind {
            AlphaKind::Sampled(s) => {
                let (lo, hi) = s.domain();
                Interval::new(lo, hi).ok()
            }
            AlphaKind::InverseTurning { helix, .. } => {
                let a = PI + helix.lambda.eval(helix.domain.lo);
                let b = PI + helix.lambda.eval(helix.domain.hi);
                Interval::new(a.min(b), a.max(b)).ok()
            }
            _ => None,
        }
    }

    /// Checks that `v_range` avoids the singularities of `α`.
    pub fn check_domain(&self, v_range: Interval) -> Result<()> {
        if let AlphaKind::InvSin = self.kind {
            let k = (v_range.lo / PI).floor();
            let (lo, hi) = (k * PI + INVSIN_MARGIN, (k + 1.0) * PI - INVSIN_MARGIN);
            if v_range.lo < lo || v_range.hi > hi {
                return Err(GeometryError::DomainError(format!(
                    "v range {v_range} meets a zero of sin v (allowed: [{lo}, {hi}])"
                )));
            }
            return Ok(());
        }
        if let Some(d) = self.domain() {
            // tolerate rounding in the image of the turning function
            let slack = 1e-12 * (1.0 + d.lo.abs().max(d.hi.abs()));
            if v_range.lo < d.lo - slack || v_range.hi > d.hi + slack {
                return Err(GeometryError::DomainError(format!(
                    "v range {v_range} leaves the alpha domain {d}"
                )));
            }
        }
        Ok(())
    }
}

/// Parameters of the canonical parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub theta: f64,
    pub u_range: Interval,
    pub v_range: Interval,
    pub grid_nu: usize,
    pub grid_nv: usize,
}

impl GeneratorConfig {
    pub fn new(
        theta: f64,
        u_range: Interval,
        v_range: Interval,
        grid_nu: usize,
        grid_nv: usize,
    ) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(GeometryError::InvalidInput(format!(
                "theta must be positive, got {theta} (use the plane constructor for theta = 0)"
            )));
        }
        if grid_nu < 2 || grid_nv < 2 {
            return Err(GeometryError::InvalidInput(
                "grid needs at least 2 points per direction".into(),
            ));
        }
        Ok(Self {
            theta,
            u_range,
            v_range,
            grid_nu,
            grid_nv,
        })
    }
}

enum Psi {
    Closed {
        f: fn(f64, f64) -> [f64; 2],
        sh: f64,
        shift: [f64; 2],
    },
    Numeric {
        sin_part: Primitive,
        cos_part: Primitive,
        sh: f64,
    },
}

impl Psi {
    fn build(alpha: &AlphaSpec, sh: f64, v_range: Interval) -> Result<Self> {
        let closed: Option<fn(f64, f64) -> [f64; 2]> = match alpha.kind {
            AlphaKind::Zero => Some(|_, _| [0.0, 0.0]),
            AlphaKind::One => Some(|sh, v| [-sh * v.cos(), -sh * v.sin()]),
            AlphaKind::InvSin => Some(|sh, v| [sh * v, -sh * v.sin().abs().ln()]),
            _ => None,
        };
        if let Some(f) = closed {
            let shift = match alpha.anchor {
                Some((v0, p)) => {
                    let at = f(sh, v0);
                    [p[0] - at[0], p[1] - at[1]]
                }
                None => [0.0, 0.0],
            };
            return Ok(Psi::Closed { f, sh, shift });
        }
        let (v0, p) = alpha.anchor.unwrap_or((v_range.lo, [0.0, 0.0]));
        let a1 = alpha.clone();
        let sin_part = Primitive::new(
            move |v| a1.eval(v) * v.sin(),
            v_range.lo,
            v_range.hi,
            v0,
            p[0] / sh,
        )?;
        let a2 = alpha.clone();
        let cos_part = Primitive::new(
            move |v| a2.eval(v) * v.cos(),
            v_range.lo,
            v_range.hi,
            v0,
            -p[1] / sh,
        )?;
        Ok(Psi::Numeric {
            sin_part,
            cos_part,
            sh,
        })
    }

    fn eval(&self, v: f64) -> [f64; 2] {
        match self {
            Psi::Closed { f, sh, shift } => {
                let p = f(*sh, v);
                [p[0] + shift[0], p[1] + shift[1]]
            }
            Psi::Numeric {
                sin_part,
                cos_part,
                sh,
            } => [sh * sin_part.eval(v), -sh * cos_part.eval(v)],
        }
    }
}

/// The canonical constant angle surface with axis `E₃`, with analytic partials.
///
/// Points with `|β| < ε_reg` (the cuspidal edge of the developable) are
/// excluded.
pub fn constant_angle_surface(
    cfg: &GeneratorConfig,
    alpha: &AlphaSpec,
) -> Result<ParametricSurface> {
    if !(cfg.theta > 0.0 && cfg.theta.is_finite()) {
        return Err(GeometryError::InvalidInput(format!(
            "theta must be positive, got {}",
            cfg.theta
        )));
    }
    alpha.check_domain(cfg.v_range)?;
    let (sh, ch) = (cfg.theta.sinh(), cfg.theta.cosh());
    let psi = Arc::new(Psi::build(alpha, sh, cfg.v_range)?);

    let position = move |u: f64, v: f64| {
        let (s, c) = v.sin_cos();
        let p = psi.eval(v);
        AmbientVector::new(u * ch * c + p[0], u * ch * s + p[1], -u * sh)
    };
    let a = alpha.clone();
    let partials = move |u: f64, v: f64| {
        let (s, c) = v.sin_cos();
        let beta = ch * u - sh * a.eval(v);
        let turn = AmbientVector::new(-s, c, 0.0);
        let inward = AmbientVector::new(-c, -s, 0.0);
        Partials {
            xu: AmbientVector::new(ch * c, ch * s, -sh),
            xv: turn * beta,
            xuu: AmbientVector::ZERO,
            xuv: turn * ch,
            xvv: turn * (-sh * a.derivative(v)) + inward * beta,
        }
    };
    let a = alpha.clone();
    let excluded = move |u: f64, v: f64| {
        let beta = ch * u - sh * a.eval(v);
        !(beta.abs() >= EPS_REG)
    };
    Ok(
        ParametricSurface::analytic(cfg.u_range, cfg.v_range, position, partials)
            .with_excluded(excluded),
    )
}

/// `β(u, v) = u cosh θ − α(v) sinh θ`, so that `G = β²`.
pub fn beta(theta: f64, alpha: &AlphaSpec, u: f64, v: f64) -> f64 {
    theta.cosh() * u - theta.sinh() * alpha.eval(v)
}

/// The plane `origin + u a + v b`; rejected unless `span(a, b)` is spacelike.
pub fn plane(
    origin: AmbientVector,
    a: AmbientVector,
    b: AmbientVector,
    u_range: Interval,
    v_range: Interval,
) -> Result<ParametricSurface> {
    if a.cross(b).causal_character() != CausalCharacter::Timelike {
        return Err(GeometryError::NotSpacelike(
            "plane span is not spacelike".into(),
        ));
    }
    Ok(ParametricSurface::analytic(
        u_range,
        v_range,
        move |u, v| origin + a * u + b * v,
        move |_, _| Partials {
            xu: a,
            xv: b,
            ..Default::default()
        },
    ))
}

/// The plane through the origin whose normal makes hyperbolic angle `θ ≥ 0`
/// with `E₃`; `θ = 0` is the horizontal plane.
pub fn tilted_plane(theta: f64, u_range: Interval, v_range: Interval) -> Result<ParametricSurface> {
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(GeometryError::InvalidInput(format!(
            "plane angle must be >= 0, got {theta}"
        )));
    }
    let iso = Isometry::new(theta, 0.0);
    plane(
        AmbientVector::ZERO,
        iso.apply(AmbientVector::new(1.0, 0.0, 0.0)),
        AmbientVector::new(0.0, 1.0, 0.0),
        u_range,
        v_range,
    )
}

fn check_positive_range(t_range: Interval, what: &str) -> Result<()> {
    if !(t_range.lo > 0.0) {
        return Err(GeometryError::DomainError(format!(
            "{what} range {t_range} must be bounded away from 0"
        )));
    }
    Ok(())
}

/// `x(s, t) = γ(s) + t γ'(s)` for `t > 0`.
pub fn tangent_developable(c: &ParametricCurve, t_range: Interval) -> Result<ParametricSurface> {
    check_positive_range(t_range, "t")?;
    for s in c.domain().linspace(CHECK_SAMPLES) {
        let frame = c.frenet(s).map_err(|e| match e {
            GeometryError::VanishingCurvature { at, kappa } => {
                GeometryError::NotRegular(format!("curvature {kappa} vanishes at s = {at}"))
            }
            other => other,
        })?;
        if t_range.lo * frame.kappa <= EPS_REG {
            return Err(GeometryError::NotRegular(format!(
                "t·κ = {} below regularity threshold at s = {s}",
                t_range.lo * frame.kappa
            )));
        }
    }
    let p = c.clone();
    let d = c.clone();
    Ok(ParametricSurface::analytic(
        c.domain(),
        t_range,
        move |s, t| p.eval(s) + p.derivative(1, s) * t,
        move |s, t| {
            let (d1, d2, d3) = (d.derivative(1, s), d.derivative(2, s), d.derivative(3, s));
            Partials {
                xu: d1 + d2 * t,
                xv: d1,
                xuu: d2 + d3 * t,
                xuv: d2,
                xvv: AmbientVector::ZERO,
            }
        },
    ))
}

/// `x(s, t) = γ(s) + t d` with `d` normalized.
pub fn cylinder(
    c: &ParametricCurve,
    direction: AmbientVector,
    t_range: Interval,
) -> Result<ParametricSurface> {
    if direction.causal_character() != CausalCharacter::Spacelike {
        return Err(GeometryError::NotSpacelike(format!(
            "ruling direction {direction} is {:?}",
            direction.causal_character()
        )));
    }
    let dir = direction / direction.norm();
    for s in c.domain().linspace(CHECK_SAMPLES) {
        let vel = c.derivative(1, s);
        if vel.cross(dir).euclidean_norm() <= EPS_REG * vel.euclidean_norm().max(1.0) {
            return Err(GeometryError::NotRegular(format!(
                "curve is parallel to the ruling at s = {s}"
            )));
        }
    }
    let p = c.clone();
    let d = c.clone();
    Ok(ParametricSurface::analytic(
        c.domain(),
        t_range,
        move |s, t| p.eval(s) + dir * t,
        move |s, _| Partials {
            xu: d.derivative(1, s),
            xv: dir,
            xuu: d.derivative(2, s),
            xuv: AmbientVector::ZERO,
            xvv: AmbientVector::ZERO,
        },
    ))
}

/// `x(s, t) = t γ(s)` for `γ` on the de Sitter sphere and `t` away from 0.
pub fn cone(c: &ParametricCurve, t_range: Interval) -> Result<ParametricSurface> {
    if t_range.contains(0.0) {
        return Err(GeometryError::DomainError(format!(
            "t range {t_range} must be bounded away from 0"
        )));
    }
    let t_min = t_range.lo.abs().min(t_range.hi.abs());
    for s in c.domain().linspace(CHECK_SAMPLES) {
        let g = c.eval(s);
        let square = g.square();
        if (square - 1.0).abs() > DESITTER_TOL {
            return Err(GeometryError::NotOnDeSitter { at: s, square });
        }
        if t_min * g.cross(c.derivative(1, s)).euclidean_norm() <= EPS_REG {
            return Err(GeometryError::NotRegular(format!(
                "cone is singular at s = {s}"
            )));
        }
    }
    let p = c.clone();
    let d = c.clone();
    Ok(ParametricSurface::analytic(
        c.domain(),
        t_range,
        move |s, t| p.eval(s) * t,
        move |s, t| {
            let d1 = d.derivative(1, s);
            Partials {
                xu: d1 * t,
                xv: d.eval(s),
                xuu: d.derivative(2, s) * t,
                xuv: d1,
                xvv: AmbientVector::ZERO,
            }
        },
    ))
}

/// `v/|v|` for spacelike `v`, a point of the de Sitter sphere.
pub fn project_to_desitter(v: AmbientVector) -> Result<AmbientVector> {
    if !(v.square() > 0.0) {
        return Err(GeometryError::NotSpacelike(format!(
            "{v} has Lorentz square {}",
            v.square()
        )));
    }
    Ok(v / v.norm())
}

/// `α(v) = −coth θ · λ⁻¹(v − π)`, anchored so that the canonical surface
/// built from it coincides with the tangent developable of the helix
/// `helix_from_lambda(θ, λ)` under `u = −(s + t)`, `v = π + λ(s)`.
///
/// The helix must start at height zero (`offset.x3 = 0`), since the
/// canonical parametrization has `x₃ = −u sinh θ`.
pub fn bridge_alpha(theta: f64, helix: &HelixSpec) -> Result<AlphaSpec> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(GeometryError::InvalidInput(format!(
            "theta must be positive, got {theta}"
        )));
    }
    let helix = HelixSpec {
        theta,
        ..helix.clone()
    };
    let coth = 1.0 / theta.tanh();
    let kind = match &helix.lambda {
        ScalarFunction::Polynomial(c)
            if c.iter().skip(2).all(|&x| x == 0.0) && c.len() >= 2 && c[1] != 0.0 =>
        {
            // λ⁻¹(w) = (w − c₀)/c₁
            AlphaKind::Polynomial(vec![coth * (PI + c[0]) / c[1], -coth / c[1]])
        }
        _ => {
            for s in helix.domain.linspace(17) {
                helix.inverse_lambda(helix.lambda.eval(s))?;
            }
            AlphaKind::InverseTurning {
                coth,
                helix: helix.clone(),
            }
        }
    };
    let curve = helix_from_lambda(&helix)?;
    let s0 = helix.domain.lo;
    let (l0, g0, ch) = (helix.lambda.eval(s0), curve.eval(s0), theta.cosh());
    let anchor = [g0.x1 - s0 * ch * l0.cos(), g0.x2 - s0 * ch * l0.sin()];
    Ok(AlphaSpec {
        kind,
        anchor: Some((PI + l0, anchor)),
    })
}
