//! Parametric spacelike surfaces in E³₁.
//!
//! Sign conventions. The unit normal `ξ` is always the future-directed one,
//! `⟨ξ, E₃⟩ < 0`. The Weingarten map is `A X = −D_X ξ`. The second
//! fundamental form coefficients follow the convention under which the
//! structure equations read `D_{vᵢ} ξ = σᵢ₁ v₁ + σᵢ₂ v₂`, i.e.
//! `σᵢⱼ = ⟨D_{vᵢ} ξ, vⱼ⟩ = −⟨A vᵢ, vⱼ⟩`. With it the Weingarten matrix of a
//! constant angle surface is `diag(0, −σ₂₂)` and `σ₂₂` obeys the Riccati
//! equation `(σ₂₂)_u = coth θ σ₂₂²`. The Gaussian curvature of a spacelike
//! surface with timelike normal is `K = −det A`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::interval::Interval;
use crate::lorentz::{hyperbolic_angle, AmbientVector, CausalCharacter};

/// Step of central differences for first partials.
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Step of central differences for second partials.
pub const FD_STEP_SECOND: f64 = 1e-4;
/// Below this length the tangential projection of an axis is treated as zero.
pub const DEGENERATE_PROJECTION: f64 = 1e-10;

/// Parameter point `(u, v)`.
pub type ParamPoint = (f64, f64);

type PointFn = Arc<dyn Fn(f64, f64) -> AmbientVector + Send + Sync>;
type PartialsFn = Arc<dyn Fn(f64, f64) -> Partials + Send + Sync>;
type ExcludedFn = Arc<dyn Fn(f64, f64) -> bool + Send + Sync>;

/// First and second partial derivatives of a surface map.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials {
    pub xu: AmbientVector,
    pub xv: AmbientVector,
    pub xuu: AmbientVector,
    pub xuv: AmbientVector,
    pub xvv: AmbientVector,
}

impl Partials {
    fn map(self, f: impl Fn(AmbientVector) -> AmbientVector) -> Self {
        Self {
            xu: f(self.xu),
            xv: f(self.xv),
            xuu: f(self.xuu),
            xuv: f(self.xuv),
            xvv: f(self.xvv),
        }
    }
}

/// A map `(u, v) ↦ x(u, v)` on a rectangle, with a partial-derivative oracle.
#[derive(Clone)]
pub struct ParametricSurface {
    position: PointFn,
    partials: Option<PartialsFn>,
    u_domain: Interval,
    v_domain: Interval,
    excluded: Option<ExcludedFn>,
}

impl fmt::Debug for ParametricSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricSurface")
            .field("u_domain", &self.u_domain)
            .field("v_domain", &self.v_domain)
            .field("analytic", &self.partials.is_some())
            .finish()
    }
}

impl ParametricSurface {
    pub fn analytic(
        u_domain: Interval,
        v_domain: Interval,
        position: impl Fn(f64, f64) -> AmbientVector + Send + Sync + 'static,
        partials: impl Fn(f64, f64) -> Partials + Send + Sync + 'static,
    ) -> Self {
        Self {
            position: Arc::new(position),
            partials: Some(Arc::new(partials)),
            u_domain,
            v_domain,
            excluded: None,
        }
    }

    pub fn finite_difference(
        u_domain: Interval,
        v_domain: Interval,
        position: impl Fn(f64, f64) -> AmbientVector + Send + Sync + 'static,
    ) -> Self {
        Self {
            position: Arc::new(position),
            partials: None,
            u_domain,
            v_domain,
            excluded: None,
        }
    }

    /// Marks parameter values where the map is singular or undefined.
    pub fn with_excluded(
        mut self,
        excluded: impl Fn(f64, f64) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.excluded = Some(Arc::new(excluded));
        self
    }

    pub fn u_domain(&self) -> Interval {
        self.u_domain
    }

    pub fn v_domain(&self) -> Interval {
        self.v_domain
    }

    pub fn is_analytic(&self) -> bool {
        self.partials.is_some()
    }

    pub fn is_excluded(&self, u: f64, v: f64) -> bool {
        self.excluded.as_ref().is_some_and(|f| f(u, v))
    }

    pub fn eval(&self, u: f64, v: f64) -> AmbientVector {
        (self.position)(u, v)
    }

    pub fn partials(&self, u: f64, v: f64) -> Partials {
        match &self.partials {
            Some(p) => p(u, v),
            None => self.fd_partials(u, v),
        }
    }

    /// Central-difference partials regardless of the surface's mode.
    pub fn fd_partials(&self, u: f64, v: f64) -> Partials {
        let x = |a: f64, b: f64| (self.position)(a, b);
        let h = FD_STEP_FIRST;
        let k = FD_STEP_SECOND;
        let centre = x(u, v);
        Partials {
            xu: (x(u + h, v) - x(u - h, v)) / (2.0 * h),
            xv: (x(u, v + h) - x(u, v - h)) / (2.0 * h),
            xuu: (x(u + k, v) - 2.0 * centre + x(u - k, v)) / (k * k),
            xuv: (x(u + k, v + k) - x(u + k, v - k) - x(u - k, v + k) + x(u - k, v - k))
                / (4.0 * k * k),
            xvv: (x(u, v + k) - 2.0 * centre + x(u, v - k)) / (k * k),
        }
    }

    /// Image of the surface under an ambient linear map (e.g. an isometry).
    pub fn map_linear(
        &self,
        f: impl Fn(AmbientVector) -> AmbientVector + Send + Sync + Clone + 'static,
    ) -> Self {
        let pos = self.position.clone();
        let g = f.clone();
        let position: PointFn = Arc::new(move |u, v| g(pos(u, v)));
        let partials = self.partials.as_ref().map(|p| {
            let p = p.clone();
            let g = f.clone();
            Arc::new(move |u, v| p(u, v).map(&g)) as PartialsFn
        });
        Self {
            position,
            partials,
            u_domain: self.u_domain,
            v_domain: self.v_domain,
            excluded: self.excluded.clone(),
        }
    }

    /// Tensor grid of `nu × nv` points over the domain, minus excluded points.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<ParamPoint> {
        let us = self.u_domain.linspace(nu);
        let vs = self.v_domain.linspace(nv);
        us.iter()
            .flat_map(|&u| vs.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| !self.is_excluded(u, v))
            .collect()
    }

    fn check_point(&self, p: ParamPoint) -> Result<()> {
        if self.is_excluded(p.0, p.1) || !p.0.is_finite() || !p.1.is_finite() {
            Err(GeometryError::SingularPoint { u: p.0, v: p.1 })
        } else {
            Ok(())
        }
    }
}

/// `(E, F, G)` at `p`.
pub fn first_fundamental(surf: &ParametricSurface, p: ParamPoint) -> Result<(f64, f64, f64)> {
    surf.check_point(p)?;
    let d = surf.partials(p.0, p.1);
    Ok((d.xu.square(), d.xu.dot(d.xv), d.xv.square()))
}

/// True iff `EG − F² > 0` and the normal is timelike at every grid point.
pub fn is_spacelike(surf: &ParametricSurface, grid: &[ParamPoint]) -> Result<bool> {
    for &p in grid {
        let (e, f, g) = first_fundamental(surf, p)?;
        if !(e * g - f * f > 0.0) {
            return Ok(false);
        }
        let d = surf.partials(p.0, p.1);
        if d.xu.cross(d.xv).causal_character() != CausalCharacter::Timelike {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Unnormalized normal `x_u × x_v`, its Lorentz length and the orientation
/// sign that makes the unit normal future-directed.
fn oriented_normal(p: ParamPoint, d: &Partials) -> Result<(AmbientVector, f64, f64)> {
    let n = d.xu.cross(d.xv);
    let scale = d.xu.euclidean_norm() * d.xv.euclidean_norm();
    if !(n.euclidean_norm() > 1e-14 * scale) || !n.is_finite() {
        return Err(GeometryError::SingularPoint { u: p.0, v: p.1 });
    }
    if n.causal_character() != CausalCharacter::Timelike {
        return Err(GeometryError::NotSpacelike(format!(
            "normal is {:?} at ({}, {})",
            n.causal_character(),
            p.0,
            p.1
        )));
    }
    let len = (-n.square()).sqrt();
    // ⟨n, E₃⟩ = −n₃; future-directed needs −sign·n₃ < 0
    let sign = if n.x3 > 0.0 { 1.0 } else { -1.0 };
    Ok((n, len, sign))
}

/// Future-directed unit normal `ξ` with `⟨ξ, ξ⟩ = −1`.
pub fn unit_normal(surf: &ParametricSurface, p: ParamPoint) -> Result<AmbientVector> {
    surf.check_point(p)?;
    let d = surf.partials(p.0, p.1);
    let (n, len, sign) = oriented_normal(p, &d)?;
    Ok(n * (sign / len))
}

/// Unit normals over a grid, evaluated in parallel; order follows the grid.
pub fn sample_normals(surf: &ParametricSurface, grid: &[ParamPoint]) -> Result<Vec<AmbientVector>> {
    grid.par_iter().map(|&p| unit_normal(surf, p)).collect()
}

/// Fundamental forms and the Weingarten map at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `σᵢⱼ = ⟨D_{vᵢ} ξ, vⱼ⟩` in the orthonormal frame `{v₁, v₂}`.
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
    /// Matrix of `A` in `{v₁, v₂}`: `shape[i][j] = ⟨A vⱼ, vᵢ⟩`.
    pub shape: [[f64; 2]; 2],
    /// Eigenvalues of `A`, ascending.
    pub principal_curvatures: [f64; 2],
    /// `K = −det A`.
    pub gaussian_curvature: f64,
    /// `v₁ = x_u/|x_u|` and the Gram–Schmidt completion `v₂`.
    pub frame: [AmbientVector; 2],
    pub normal: AmbientVector,
}

impl FundamentalForms {
    /// Eigenvalue of smallest magnitude.
    pub fn smallest_principal(&self) -> f64 {
        let [a, b] = self.principal_curvatures;
        if a.abs() <= b.abs() {
            a
        } else {
            b
        }
    }
}

/// Shape operator in the Gram–Schmidt frame of `{x_u, x_v}`.
///
/// The partials of `ξ = n/|n|` (with `n = x_u × x_v`) come from the product
/// and quotient rules applied to the surface's second partials, analytic or
/// finite-difference.
pub fn shape_operator(surf: &ParametricSurface, p: ParamPoint) -> Result<FundamentalForms> {
    surf.check_point(p)?;
    let d = surf.partials(p.0, p.1);
    let (n, len, sign) = oriented_normal(p, &d)?;
    let xi = n * (sign / len);
    let nu = d.xuu.cross(d.xv) + d.xu.cross(d.xuv);
    let nv = d.xuv.cross(d.xv) + d.xu.cross(d.xvv);
    let len3 = len * len * len;
    let xi_u = (nu / len + n * (n.dot(nu) / len3)) * sign;
    let xi_v = (nv / len + n * (n.dot(nv) / len3)) * sign;

    let e = d.xu.square();
    let f = d.xu.dot(d.xv);
    let g = d.xv.square();
    if !(e > 0.0 && e * g - f * f > 0.0) {
        return Err(GeometryError::NotSpacelike(format!(
            "induced metric is not Riemannian at ({}, {})",
            p.0, p.1
        )));
    }
    let a11 = e.sqrt();
    let v1 = d.xu / a11;
    let a12 = d.xv.dot(v1);
    let w = d.xv - v1 * a12;
    let a22 = w.square().sqrt();
    let v2 = w / a22;

    let a_v1 = -xi_u / a11;
    let a_v2 = (-xi_v - a_v1 * a12) / a22;
    let shape = [[a_v1.dot(v1), a_v2.dot(v1)], [a_v1.dot(v2), a_v2.dot(v2)]];
    let off = 0.5 * (shape[0][1] + shape[1][0]);
    let (p11, p22) = (shape[0][0], shape[1][1]);
    let mid = 0.5 * (p11 + p22);
    let rad = (0.25 * (p11 - p22) * (p11 - p22) + off * off).sqrt();
    let det = p11 * p22 - shape[0][1] * shape[1][0];
    Ok(FundamentalForms {
        e,
        f,
        g,
        s11: -shape[0][0],
        s12: -off,
        s22: -shape[1][1],
        shape,
        principal_curvatures: [mid - rad, mid + rad],
        gaussian_curvature: -det,
        frame: [v1, v2],
        normal: xi,
    })
}

/// Frame `{e₁, e₂, ξ}` adapted to a fixed timelike axis `U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptedFrame {
    pub e1: AmbientVector,
    pub e2: AmbientVector,
    pub xi: AmbientVector,
    pub theta: f64,
    /// Tangential projection `U⊤ = U + ⟨U, ξ⟩ ξ`.
    pub u_tangential: AmbientVector,
}

/// Builds `e₁ = U⊤/|U⊤|`, `e₂ = ξ × e₁` (so `det(e₁, e₂, ξ) > 0`) and the
/// hyperbolic angle between `ξ` and `U`, so that `U = sinh θ e₁ + cosh θ ξ`.
/// `U` is normalized and made future-directed first.
pub fn adapted_frame(
    surf: &ParametricSurface,
    p: ParamPoint,
    axis: AmbientVector,
) -> Result<AdaptedFrame> {
    if !axis.is_timelike() {
        return Err(GeometryError::NotTimelike);
    }
    let axis = (axis / axis.norm()).future_directed();
    let xi = unit_normal(surf, p)?;
    let u_tangential = axis + xi * axis.dot(xi);
    let len = u_tangential.square().max(0.0).sqrt();
    if len < DEGENERATE_PROJECTION {
        return Err(GeometryError::DegenerateProjection);
    }
    let e1 = u_tangential / len;
    let e2 = xi.cross(e1);
    let theta = hyperbolic_angle(xi, axis)?;
    Ok(AdaptedFrame {
        e1,
        e2,
        xi,
        theta,
        u_tangential,
    })
}
