//! Parametric curves in E³₁ and their Frenet apparatus.
//!
//! Curves carry a derivative oracle of order one to three. The oracle is
//! either analytic (closures supplied at construction) or central finite
//! differences of the position map. Frenet data is only defined for
//! spacelike curves with spacelike acceleration: then `T`, `N` are spacelike,
//! `B = T × N` is unit timelike and
//!
//! ```text
//! T' = κN,   N' = −κT + τB,   B' = τN,   τ = −⟨N', B⟩.
//! ```

use std::fmt;
use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::interval::Interval;
use crate::lorentz::{AmbientVector, CausalCharacter};
use crate::quadrature::{adaptive_simpson, Primitive, QUADRATURE_MAX_DEPTH};
use crate::spline::CubicSpline;

/// Central-difference step for first derivatives.
pub const FD_STEP_1: f64 = 1e-5;
/// Central-difference step for second derivatives.
pub const FD_STEP_2: f64 = 1e-4;
/// Central-difference step for third derivatives.
pub const FD_STEP_3: f64 = 5e-4;
/// Curvatures at or below this value leave the normal undefined.
pub const KAPPA_MIN: f64 = 1e-8;
/// Helix tolerance on `τ/κ` for analytic curves.
pub const HELIX_TOL_ANALYTIC: f64 = 1e-6;
/// Helix tolerance on `τ/κ` for finite-difference curves.
pub const HELIX_TOL_FD: f64 = 1e-3;
/// Bisection budget for inverting monotone turning functions.
pub const INVERSE_MAX_ITER: usize = 80;

pub type VectorFn = Arc<dyn Fn(f64) -> AmbientVector + Send + Sync>;
type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

/// A map `s ↦ γ(s)` with a derivative oracle on a closed domain.
#[derive(Clone)]
pub struct ParametricCurve {
    position: VectorFn,
    derivatives: Option<[VectorFn; 3]>,
    mode: DerivativeMode,
    domain: Interval,
}

impl fmt::Debug for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricCurve")
            .field("mode", &self.mode)
            .field("domain", &self.domain)
            .finish()
    }
}

impl ParametricCurve {
    /// Curve with analytic first, second and third derivatives.
    pub fn analytic<P, D1, D2, D3>(domain: Interval, position: P, d1: D1, d2: D2, d3: D3) -> Self
    where
        P: Fn(f64) -> AmbientVector + Send + Sync + 'static,
        D1: Fn(f64) -> AmbientVector + Send + Sync + 'static,
        D2: Fn(f64) -> AmbientVector + Send + Sync + 'static,
        D3: Fn(f64) -> AmbientVector + Send + Sync + 'static,
    {
        Self {
            position: Arc::new(position),
            derivatives: Some([Arc::new(d1), Arc::new(d2), Arc::new(d3)]),
            mode: DerivativeMode::Analytic,
            domain,
        }
    }

    /// Curve whose derivatives come from central differences of `position`.
    pub fn finite_difference<P>(domain: Interval, position: P) -> Self
    where
        P: Fn(f64) -> AmbientVector + Send + Sync + 'static,
    {
        Self {
            position: Arc::new(position),
            derivatives: None,
            mode: DerivativeMode::FiniteDifference,
            domain,
        }
    }

    /// Finite-difference curve through samples, interpolated componentwise
    /// by natural cubic splines. The domain is the sample range.
    pub fn from_samples(params: &[f64], points: &[AmbientVector]) -> Result<Self> {
        let comp = |f: fn(&AmbientVector) -> f64| {
            CubicSpline::natural(params.to_vec(), points.iter().map(f).collect())
        };
        let (sx, sy, sz) = (comp(|p| p.x1)?, comp(|p| p.x2)?, comp(|p| p.x3)?);
        let (lo, hi) = sx.domain();
        Ok(Self::finite_difference(Interval::new(lo, hi)?, move |s| {
            AmbientVector::new(sx.eval(s), sy.eval(s), sz.eval(s))
        }))
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn eval(&self, s: f64) -> AmbientVector {
        (self.position)(s)
    }

    /// Derivative of order `k` (0..=3) from the curve's oracle.
    pub fn derivative(&self, k: usize, s: f64) -> AmbientVector {
        match (k, &self.derivatives) {
            (0, _) => self.eval(s),
            (1..=3, Some(d)) => (d[k - 1])(s),
            (1..=3, None) => self.fd_derivative(k, s),
            _ => AmbientVector::ZERO,
        }
    }

    /// Central-difference derivative regardless of the curve's mode.
    pub fn fd_derivative(&self, k: usize, s: f64) -> AmbientVector {
        fd_derivative_with(&*self.position, k, s, step_for(k))
    }

    pub fn velocity(&self, s: f64) -> AmbientVector {
        self.derivative(1, s)
    }

    pub fn acceleration(&self, s: f64) -> AmbientVector {
        self.derivative(2, s)
    }

    /// Applies an ambient linear map to the curve and all its derivatives.
    pub fn map_linear(
        &self,
        f: impl Fn(AmbientVector) -> AmbientVector + Send + Sync + Clone + 'static,
    ) -> Self {
        let p = self.position.clone();
        let g = f.clone();
        let position: VectorFn = Arc::new(move |s| g(p(s)));
        let derivatives = self.derivatives.as_ref().map(|ds| {
            let wrap = |d: &VectorFn| -> VectorFn {
                let d = d.clone();
                let g = f.clone();
                Arc::new(move |s| g(d(s)))
            };
            [wrap(&ds[0]), wrap(&ds[1]), wrap(&ds[2])]
        });
        Self {
            position,
            derivatives,
            mode: self.mode,
            domain: self.domain,
        }
    }

    pub fn frenet(&self, s: f64) -> Result<FrenetData> {
        frenet_frame(self, s)
    }
}

fn step_for(k: usize) -> f64 {
    match k {
        1 => FD_STEP_1,
        2 => FD_STEP_2,
        _ => FD_STEP_3,
    }
}

/// Central-difference stencils of order two for derivatives one to three.
pub fn fd_derivative_with(
    f: &dyn Fn(f64) -> AmbientVector,
    k: usize,
    s: f64,
    h: f64,
) -> AmbientVector {
    match k {
        0 => f(s),
        1 => (f(s + h) - f(s - h)) / (2.0 * h),
        2 => (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h),
        3 => {
            (f(s + 2.0 * h) - 2.0 * f(s + h) + 2.0 * f(s - h) - f(s - 2.0 * h)) / (2.0 * h * h * h)
        }
        _ => AmbientVector::ZERO,
    }
}

/// Frenet frame with curvature and torsion at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetData {
    pub tangent: AmbientVector,
    pub normal: AmbientVector,
    pub binormal: AmbientVector,
    pub kappa: f64,
    pub tau: f64,
}

/// Frenet apparatus of a spacelike curve with spacelike acceleration.
///
/// For an arc-length curve this is `T = γ'`, `N = γ''/κ`, `κ = |γ''|`,
/// `B = T × N`, `τ = −⟨N', B⟩ = −⟨γ''', B⟩/κ`. The implementation uses the
/// parametrization-invariant form (speed `σ`): the acceleration component
/// normal to `γ'` equals `σ²κN` and `⟨γ''', B⟩ = −σ³κτ`, so curves that are
/// only approximately unit speed still get the right invariants.
pub fn frenet_frame(c: &ParametricCurve, s: f64) -> Result<FrenetData> {
    let vel = c.derivative(1, s);
    let acc = c.derivative(2, s);
    let jerk = c.derivative(3, s);
    let q = vel.square();
    if vel.causal_character() != CausalCharacter::Spacelike {
        return Err(GeometryError::NotSpacelikeVelocity { at: s });
    }
    let speed = q.sqrt();
    let tangent = vel / speed;
    let acc_normal = acc - (acc.dot(vel) / q) * vel;
    if acc_normal.euclidean_norm() / q <= KAPPA_MIN {
        return Err(GeometryError::VanishingCurvature {
            at: s,
            kappa: acc_normal.norm() / q,
        });
    }
    if acc_normal.causal_character() != CausalCharacter::Spacelike {
        return Err(GeometryError::NonSpacelikeAcceleration { at: s });
    }
    let acc_len = acc_normal.norm();
    let kappa = acc_len / q;
    if kappa <= KAPPA_MIN {
        return Err(GeometryError::VanishingCurvature { at: s, kappa });
    }
    let normal = acc_normal / acc_len;
    let binormal = tangent.cross(normal);
    let tau = -jerk.dot(binormal) / (speed * speed * speed * kappa);
    Ok(FrenetData {
        tangent,
        normal,
        binormal,
        kappa,
        tau,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixReport {
    pub is_helix: bool,
    /// Median of `τ/κ` over the grid.
    pub ratio: f64,
    /// Largest `|τ/κ − ratio|` over the grid.
    pub max_deviation: f64,
    /// Whether `τ² < κ²` held at every grid point.
    pub torsion_below_curvature: bool,
}

pub fn helix_tolerance(mode: DerivativeMode) -> f64 {
    match mode {
        DerivativeMode::Analytic => HELIX_TOL_ANALYTIC,
        DerivativeMode::FiniteDifference => HELIX_TOL_FD,
    }
}

/// Decides whether `τ/κ` is constant on the grid.
pub fn helix_test(c: &ParametricCurve, grid: &[f64]) -> Result<HelixReport> {
    if grid.is_empty() {
        return Err(GeometryError::InvalidInput(
            "helix test needs a non-empty grid".into(),
        ));
    }
    let frames = grid
        .iter()
        .map(|&s| frenet_frame(c, s))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = frames.iter().map(|f| f.tau / f.kappa).collect();
    let ratio = median(&ratios);
    let max_deviation = ratios.iter().map(|r| (r - ratio).abs()).fold(0.0, f64::max);
    Ok(HelixReport {
        is_helix: max_deviation <= helix_tolerance(c.mode()),
        ratio,
        max_deviation,
        torsion_below_curvature: frames.iter().all(|f| f.tau * f.tau < f.kappa * f.kappa),
    })
}

pub(crate) fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Real function of one variable with its first two derivatives.
#[derive(Clone)]
pub enum ScalarFunction {
    Constant(f64),
    /// `Σ cᵢ xⁱ`.
    Polynomial(Vec<f64>),
    Custom {
        value: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
    },
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Polynomial(p) => write!(f, "Polynomial({p:?})"),
            Self::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl ScalarFunction {
    pub fn custom(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::Custom {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }
    }

    /// Derivative of order `k` (0..=2; the polynomial case supports any order).
    pub fn derivative(&self, k: usize, x: f64) -> f64 {
        match self {
            Self::Constant(c) => {
                if k == 0 {
                    *c
                } else {
                    0.0
                }
            }
            Self::Polynomial(coeffs) => poly_derivative(coeffs, k, x),
            Self::Custom { value, d1, d2 } => match k {
                0 => value(x),
                1 => d1(x),
                2 => d2(x),
                _ => f64::NAN,
            },
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Self::Constant(_) => true,
            Self::Polynomial(c) => c.iter().skip(1).all(|&a| a == 0.0),
            Self::Custom { .. } => false,
        }
    }
}

/// Horner evaluation of the `k`-th derivative of `Σ cᵢ xⁱ`.
pub fn poly_derivative(coeffs: &[f64], k: usize, x: f64) -> f64 {
    let mut acc = 0.0;
    for (i, &c) in coeffs.iter().enumerate().skip(k).rev() {
        let falling: f64 = (0..k).map(|j| (i - j) as f64).product();
        acc = acc * x + c * falling;
    }
    acc
}

/// Constant-angle helix data: hyperbolic angle `θ` and turning function `λ`.
#[derive(Debug, Clone)]
pub struct HelixSpec {
    pub theta: f64,
    pub lambda: ScalarFunction,
    pub domain: Interval,
    /// Translation added to the integrated curve.
    pub offset: AmbientVector,
}

impl HelixSpec {
    /// Validates `θ ≥ 0` and strict monotonicity of `λ` on the domain.
    pub fn new(theta: f64, lambda: ScalarFunction, domain: Interval) -> Result<Self> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(GeometryError::InvalidInput(format!(
                "helix angle must be >= 0, got {theta}"
            )));
        }
        let spec = Self {
            theta,
            lambda,
            domain,
            offset: AmbientVector::ZERO,
        };
        spec.check_monotone()?;
        Ok(spec)
    }

    pub fn with_offset(mut self, offset: AmbientVector) -> Self {
        self.offset = offset;
        self
    }

    /// The closed-form helix with `λ(s) = s`, placed at
    /// `γ(s) = (cosh θ sin s, −cosh θ cos s, sinh θ s)`.
    pub fn circular(theta: f64, domain: Interval) -> Result<Self> {
        Ok(
            Self::new(theta, ScalarFunction::Polynomial(vec![0.0, 1.0]), domain)?
                .with_offset(AmbientVector::new(0.0, -theta.cosh(), 0.0)),
        )
    }

    /// The Fresnel helix with `λ(s) = s²`.
    pub fn fresnel(theta: f64, domain: Interval) -> Result<Self> {
        Self::new(
            theta,
            ScalarFunction::Polynomial(vec![0.0, 0.0, 1.0]),
            domain,
        )
    }

    fn check_monotone(&self) -> Result<()> {
        let slopes: Vec<f64> = self
            .domain
            .linspace(257)
            .iter()
            .map(|&s| self.lambda.derivative(1, s))
            .collect();
        let all_pos = slopes.iter().all(|&d| d > 0.0);
        let all_neg = slopes.iter().all(|&d| d < 0.0);
        if all_pos || all_neg {
            Ok(())
        } else {
            Err(GeometryError::InvalidInput(
                "turning function must be strictly monotone on the helix domain".into(),
            ))
        }
    }

    /// `λ⁻¹(w)` by bisection over the domain.
    pub fn inverse_lambda(&self, w: f64) -> Result<f64> {
        invert_monotone(&self.lambda, self.domain, w)
    }
}

/// Inverts a strictly monotone function on `domain` by bisection.
///
/// Values outside the image by no more than rounding slack are mapped by
/// linear extrapolation of the end slope; anything further out fails.
pub fn invert_monotone(f: &ScalarFunction, domain: Interval, w: f64) -> Result<f64> {
    let (mut a, mut b) = (domain.lo, domain.hi);
    let (fa, fb) = (f.eval(a), f.eval(b));
    if !w.is_finite() || !fa.is_finite() || !fb.is_finite() || fa == fb {
        return Err(GeometryError::InverseFailure(w));
    }
    let sign = if fb > fa { 1.0 } else { -1.0 };
    let slack = 1e-9 * (1.0 + fa.abs().max(fb.abs()));
    if sign * (w - fa) <= 0.0 || sign * (w - fb) >= 0.0 {
        let (end, value) = if (w - fa).abs() <= (w - fb).abs() {
            (a, fa)
        } else {
            (b, fb)
        };
        let inside = sign * (w - fa) >= 0.0 && sign * (w - fb) <= 0.0;
        if !inside && (w - value).abs() > slack {
            return Err(GeometryError::InverseFailure(w));
        }
        let slope = f.derivative(1, end);
        if w == value {
            return Ok(end);
        }
        if !(slope.abs() > 0.0) {
            return Err(GeometryError::InverseFailure(w));
        }
        return Ok(end + (w - value) / slope);
    }
    for _ in 0..INVERSE_MAX_ITER {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if sign * (f.eval(m) - w) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let m = 0.5 * (a + b);
    if (f.eval(m) - w).abs() <= 1e-9 * (1.0 + w.abs()) {
        Ok(m)
    } else {
        Err(GeometryError::InverseFailure(w))
    }
}

/// Unit-speed spacelike curve with prescribed inclination `r(s)` against the
/// horizontal plane and turning angle `λ(s)`:
///
/// ```text
/// γ'(s) = (cosh r cos λ, cosh r sin λ, sinh r),   γ(0) = offset.
/// ```
///
/// With constant `r = θ` this is the helix family with axis `E₃`.
pub fn unit_speed_curve(
    rapidity: ScalarFunction,
    turning: ScalarFunction,
    domain: Interval,
    offset: AmbientVector,
) -> Result<ParametricCurve> {
    let r1 = rapidity.clone();
    let l1 = turning.clone();
    let cx = Primitive::new(
        move |s| r1.eval(s).cosh() * l1.eval(s).cos(),
        domain.lo,
        domain.hi,
        0.0,
        0.0,
    )?;
    let r2 = rapidity.clone();
    let l2 = turning.clone();
    let cy = Primitive::new(
        move |s| r2.eval(s).cosh() * l2.eval(s).sin(),
        domain.lo,
        domain.hi,
        0.0,
        0.0,
    )?;
    let cz = if rapidity.is_constant() {
        None
    } else {
        let r3 = rapidity.clone();
        Some(Primitive::new(
            move |s| r3.eval(s).sinh(),
            domain.lo,
            domain.hi,
            0.0,
            0.0,
        )?)
    };
    let height = rapidity.eval(0.0).sinh();
    let position = move |s: f64| {
        let z = cz.as_ref().map_or(height * s, |p| p.eval(s));
        offset + AmbientVector::new(cx.eval(s), cy.eval(s), z)
    };

    let (ra, la) = (rapidity.clone(), turning.clone());
    let d1 = move |s: f64| {
        let (r, l) = (ra.eval(s), la.eval(s));
        AmbientVector::new(r.cosh() * l.cos(), r.cosh() * l.sin(), r.sinh())
    };
    let (rb, lb) = (rapidity.clone(), turning.clone());
    let d2 = move |s: f64| {
        let (r, r1) = (rb.eval(s), rb.derivative(1, s));
        let (l, l1) = (lb.eval(s), lb.derivative(1, s));
        let (sh, ch) = (r.sinh(), r.cosh());
        let (sl, cl) = l.sin_cos();
        r1 * AmbientVector::new(sh * cl, sh * sl, ch) + (l1 * ch) * AmbientVector::new(-sl, cl, 0.0)
    };
    let (rc, lc) = (rapidity, turning);
    let d3 = move |s: f64| {
        let (r, r1, r2) = (rc.eval(s), rc.derivative(1, s), rc.derivative(2, s));
        let (l, l1, l2) = (lc.eval(s), lc.derivative(1, s), lc.derivative(2, s));
        let (sh, ch) = (r.sinh(), r.cosh());
        let (sl, cl) = l.sin_cos();
        let lift = AmbientVector::new(sh * cl, sh * sl, ch);
        let radial = AmbientVector::new(ch * cl, ch * sl, sh);
        let turn = AmbientVector::new(-sl, cl, 0.0);
        let inward = AmbientVector::new(-cl, -sl, 0.0);
        r2 * lift
            + (r1 * r1) * radial
            + (2.0 * r1 * l1 * sh + l2 * ch) * turn
            + (l1 * l1 * ch) * inward
    };
    Ok(ParametricCurve::analytic(domain, position, d1, d2, d3))
}

/// Integrates the helix `γ'(s) = (cosh θ cos λ, cosh θ sin λ, sinh θ)`.
///
/// Its Frenet data satisfies `κ = cosh θ λ'` and `τ = −sinh θ λ'`.
pub fn helix_from_lambda(spec: &HelixSpec) -> Result<ParametricCurve> {
    unit_speed_curve(
        ScalarFunction::Constant(spec.theta),
        spec.lambda.clone(),
        spec.domain,
        spec.offset,
    )
}

/// Reparametrizes a spacelike curve by arc length.
///
/// The cumulative length is tabulated on `n_samples` nodes; evaluation
/// inverts it with a safeguarded Newton iteration started from monotone
/// linear interpolation of the table. Derivatives follow from the chain rule
/// applied to the original oracle, so the result keeps the input's mode and
/// has `⟨γ', γ'⟩ = 1` up to the accuracy of that oracle. The new parameter
/// starts at zero.
pub fn arclength_reparametrize(c: &ParametricCurve, n_samples: usize) -> Result<ParametricCurve> {
    let n = n_samples.max(2);
    let domain = c.domain();
    let nodes = domain.linspace(n);
    for &t in &nodes {
        if c.velocity(t).causal_character() != CausalCharacter::Spacelike {
            return Err(GeometryError::NotSpacelikeVelocity { at: t });
        }
    }
    let speed = {
        let c = c.clone();
        move |t: f64| c.velocity(t).square().max(0.0).sqrt()
    };
    let mut lengths = Vec::with_capacity(n);
    lengths.push(0.0);
    let cell_tol = 1e-13;
    for w in nodes.windows(2) {
        let piece = adaptive_simpson(&speed, w[0], w[1], cell_tol, QUADRATURE_MAX_DEPTH)?;
        lengths.push(lengths.last().copied().unwrap_or(0.0) + piece);
    }
    let total = *lengths.last().unwrap_or(&0.0);
    let table = Arc::new(ArcLengthTable {
        nodes,
        lengths,
        curve: c.clone(),
    });

    let t = table.clone();
    let position = move |s: f64| {
        let p = t.parameter(s);
        t.curve.eval(p)
    };
    let t = table.clone();
    let d1 = move |s: f64| {
        let p = t.parameter(s);
        let v = t.curve.velocity(p);
        v / v.square().sqrt()
    };
    let t = table.clone();
    let d2 = move |s: f64| {
        let p = t.parameter(s);
        let (v, a) = (t.curve.velocity(p), t.curve.acceleration(p));
        let q = v.square();
        let pa = v.dot(a);
        a / q - v * (pa / (q * q))
    };
    let t = table;
    let d3 = move |s: f64| {
        let p = t.parameter(s);
        let (v, a, j) = (
            t.curve.velocity(p),
            t.curve.acceleration(p),
            t.curve.derivative(3, p),
        );
        let q = v.square();
        let (pa, r, w) = (v.dot(a), a.dot(a), v.dot(j));
        let dt = j / q - a * (3.0 * pa / (q * q)) - v * ((r + w) / (q * q))
            + v * (4.0 * pa * pa / (q * q * q));
        dt / q.sqrt()
    };
    let mut out = ParametricCurve::analytic(Interval::new(0.0, total)?, position, d1, d2, d3);
    out.mode = c.mode();
    Ok(out)
}

struct ArcLengthTable {
    nodes: Vec<f64>,
    lengths: Vec<f64>,
    curve: ParametricCurve,
}

impl ArcLengthTable {
    /// Original parameter `t` with arc length `s` measured from the start.
    fn parameter(&self, s: f64) -> f64 {
        let n = self.nodes.len();
        let k = match self.lengths.binary_search_by(|l| l.total_cmp(&s)) {
            Ok(i) => return self.nodes[i],
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let (t0, t1) = (self.nodes[k], self.nodes[k + 1]);
        let (l0, l1) = (self.lengths[k], self.lengths[k + 1]);
        let speed = |t: f64| self.curve.velocity(t).square().max(0.0).sqrt();
        let mut t = t0 + (t1 - t0) * ((s - l0) / (l1 - l0));
        let (mut lo, mut hi) = (t0.min(t1), t0.max(t1));
        let inside = s >= l0 && s <= l1;
        for _ in 0..50 {
            let g = match adaptive_simpson(speed, t0, t, 1e-15, QUADRATURE_MAX_DEPTH) {
                Ok(v) => l0 + v - s,
                Err(_) => break,
            };
            if inside {
                if g > 0.0 {
                    hi = t;
                } else {
                    lo = t;
                }
            }
            let step = g / speed(t);
            let mut next = t - step;
            if inside && !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - t).abs() <= 1e-15 * (1.0 + t.abs());
            t = next;
            if done {
                break;
            }
        }
        t
    }
}

/// Reads an `s,x1,x2,x3` CSV (header row required) into a finite-difference curve.
pub fn read_curve_csv<R: Read>(reader: R) -> Result<ParametricCurve> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| GeometryError::InvalidInput(format!("curve csv: {e}")))?
        .clone();
    let expected = ["s", "x1", "x2", "x3"];
    if headers.len() != 4 || headers.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(GeometryError::InvalidInput(format!(
            "curve csv header must be s,x1,x2,x3, got {:?}",
            headers.iter().collect::<Vec<_>>()
        )));
    }
    let mut params = Vec::new();
    let mut points = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| GeometryError::InvalidInput(format!("curve csv: {e}")))?;
        let vals = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| GeometryError::InvalidInput(format!("curve csv row {}: {e}", line + 2)))?;
        params.push(vals[0]);
        points.push(AmbientVector::new(vals[1], vals[2], vals[3]));
    }
    ParametricCurve::from_samples(&params, &points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit_circle() -> ParametricCurve {
        ParametricCurve::analytic(
            Interval::new(0.0, 2.0 * PI).unwrap(),
            |s: f64| AmbientVector::new(s.cos(), s.sin(), 0.0),
            |s: f64| AmbientVector::new(-s.sin(), s.cos(), 0.0),
            |s: f64| AmbientVector::new(-s.cos(), -s.sin(), 0.0),
            |s: f64| AmbientVector::new(s.sin(), -s.cos(), 0.0),
        )
    }

    fn twisted_cubic() -> ParametricCurve {
        ParametricCurve::analytic(
            Interval::new(-0.5, 0.8).unwrap(),
            |t: f64| AmbientVector::new(t, t * t / 2.0, t * t * t / 10.0),
            |t: f64| AmbientVector::new(1.0, t, 0.3 * t * t),
            |t: f64| AmbientVector::new(0.0, 1.0, 0.6 * t),
            |_| AmbientVector::new(0.0, 0.0, 0.6),
        )
    }

    #[test]
    fn circle_frenet_by_hand() {
        let c = unit_circle();
        for s in [0.0, 0.4, 2.0, 5.5] {
            let f = frenet_frame(&c, s).unwrap();
            assert_abs_diff_eq!(f.kappa, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(f.tau, 0.0, epsilon = 1e-14);
            // counterclockwise traversal: T × N points down in the Lorentzian product
            assert_abs_diff_eq!(
                f.binormal.max_abs_diff(AmbientVector::new(0.0, 0.0, -1.0)),
                0.0,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn example_two_curvature_and_torsion() {
        for theta in [0.3, 1.0, 2.0] {
            let spec = HelixSpec::circular(theta, Interval::new(-3.0, 7.0).unwrap()).unwrap();
            let c = helix_from_lambda(&spec).unwrap();
            for s in [-2.0, 0.0, 1.3, 6.0] {
                let f = frenet_frame(&c, s).unwrap();
                assert_abs_diff_eq!(f.kappa, theta.cosh(), epsilon = 1e-12 * theta.cosh());
                assert_abs_diff_eq!(f.tau, -theta.sinh(), epsilon = 1e-12 * theta.cosh());
                let expected = AmbientVector::new(
                    theta.cosh() * s.sin(),
                    -theta.cosh() * s.cos(),
                    theta.sinh() * s,
                );
                assert!(c.eval(s).max_abs_diff(expected) < 1e-9, "s={s}");
            }
        }
    }

    #[test]
    fn example_three_curvature_and_torsion() {
        let theta = 2.0f64;
        let c = helix_from_lambda(
            &HelixSpec::fresnel(theta, Interval::new(0.1, 2.5).unwrap()).unwrap(),
        )
        .unwrap();
        for s in [0.2, 0.9, 1.7, 2.4] {
            let f = frenet_frame(&c, s).unwrap();
            assert_abs_diff_eq!(f.kappa, 2.0 * theta.cosh() * s, epsilon = 1e-11);
            assert_abs_diff_eq!(f.tau, -2.0 * theta.sinh() * s, epsilon = 1e-11);
        }
    }

    #[test]
    fn degenerate_angle_gives_planar_circle() {
        let spec = HelixSpec::circular(0.0, Interval::new(0.0, 6.0).unwrap()).unwrap();
        let c = helix_from_lambda(&spec).unwrap();
        for s in [0.0, 1.0, 4.5] {
            assert!(
                c.eval(s)
                    .max_abs_diff(AmbientVector::new(s.sin(), -s.cos(), 0.0))
                    < 1e-10
            );
        }
    }

    #[test]
    fn line_has_vanishing_curvature() {
        let line = ParametricCurve::analytic(
            Interval::new(0.0, 1.0).unwrap(),
            |s: f64| AmbientVector::new(s, 0.0, 0.0),
            |_| AmbientVector::new(1.0, 0.0, 0.0),
            |_| AmbientVector::ZERO,
            |_| AmbientVector::ZERO,
        );
        assert!(matches!(
            frenet_frame(&line, 0.5),
            Err(GeometryError::VanishingCurvature { .. })
        ));
    }

    #[test]
    fn timelike_acceleration_is_rejected() {
        // γ = (s, sinh... ) style: velocity spacelike, acceleration timelike
        let c = ParametricCurve::analytic(
            Interval::new(-1.0, 1.0).unwrap(),
            |s: f64| AmbientVector::new(s.cosh(), 2.0 * s, s.sinh()),
            |s: f64| AmbientVector::new(s.sinh(), 2.0, s.cosh()),
            |s: f64| AmbientVector::new(s.cosh(), 0.0, s.sinh()),
            |s: f64| AmbientVector::new(s.sinh(), 0.0, s.cosh()),
        );
        // acceleration (cosh, 0, sinh) is spacelike; swap to make it timelike
        assert!(frenet_frame(&c, 0.3).is_ok());
        let d = ParametricCurve::analytic(
            Interval::new(-1.0, 1.0).unwrap(),
            |s: f64| AmbientVector::new(s.sinh(), 2.0 * s, s.cosh()),
            |s: f64| AmbientVector::new(s.cosh(), 2.0, s.sinh()),
            |s: f64| AmbientVector::new(s.sinh(), 0.0, s.cosh()),
            |s: f64| AmbientVector::new(s.cosh(), 0.0, s.sinh()),
        );
        assert!(matches!(
            frenet_frame(&d, 0.3),
            Err(GeometryError::NonSpacelikeAcceleration { .. })
        ));
    }

    #[test]
    fn helix_test_examples() {
        let theta = 1.2f64;
        let dom = Interval::new(0.0, 5.0).unwrap();
        let c = helix_from_lambda(&HelixSpec::circular(theta, dom).unwrap()).unwrap();
        let rep = helix_test(&c, &dom.linspace(40)).unwrap();
        assert!(rep.is_helix);
        assert_abs_diff_eq!(rep.ratio, -theta.tanh(), epsilon = 1e-12);
        assert!(rep.torsion_below_curvature);

        let circle = unit_circle();
        let rep = helix_test(&circle, &Interval::new(0.0, 6.0).unwrap().linspace(30)).unwrap();
        assert!(rep.is_helix);
        assert_abs_diff_eq!(rep.ratio, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn twisted_cubic_is_not_a_helix() {
        let c = arclength_reparametrize(&twisted_cubic(), 200).unwrap();
        let grid = c.domain().linspace(50);
        // brute-force oracle: τ/κ from the textbook cross-product formulas on the raw curve
        let raw = twisted_cubic();
        let ratios: Vec<f64> = Interval::new(-0.5, 0.8)
            .unwrap()
            .linspace(50)
            .iter()
            .map(|&t| {
                let (v, a, j) = (
                    raw.derivative(1, t),
                    raw.derivative(2, t),
                    raw.derivative(3, t),
                );
                let n = v.cross(a);
                // γ'×γ'' = σ³κB, so ⟨n,n⟩ = −σ⁶κ² and ⟨n,γ'''⟩ = −σ⁶κ²τ
                let tau = n.dot(j) / n.square();
                let kappa = (-n.square()).sqrt() / v.square().powf(1.5);
                let f = frenet_frame(&raw, t).unwrap();
                assert_abs_diff_eq!(f.kappa, kappa, epsilon = 1e-12);
                assert_abs_diff_eq!(f.tau, tau, epsilon = 1e-12);
                tau / kappa
            })
            .collect();
        let spread = ratios.iter().cloned().fold(f64::MIN, f64::max)
            - ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 1e-2);
        let rep = helix_test(&c, &grid).unwrap();
        assert!(!rep.is_helix);
        assert!(rep.max_deviation > 1e-3);
    }

    #[test]
    fn arclength_examples() {
        let line = ParametricCurve::analytic(
            Interval::new(1.0, 3.0).unwrap(),
            |t: f64| AmbientVector::new(2.0 * t, 0.0, 0.0),
            |_| AmbientVector::new(2.0, 0.0, 0.0),
            |_| AmbientVector::ZERO,
            |_| AmbientVector::ZERO,
        );
        let r = arclength_reparametrize(&line, 16).unwrap();
        assert_abs_diff_eq!(r.domain().hi, 4.0, epsilon = 1e-12);
        for s in [0.0, 0.7, 3.9] {
            assert!(
                r.eval(s)
                    .max_abs_diff(AmbientVector::new(2.0 + s, 0.0, 0.0))
                    < 1e-12
            );
        }

        let circle = unit_circle();
        let r = arclength_reparametrize(&circle, 64).unwrap();
        for s in [0.0, 1.0, 3.3] {
            assert!(r.eval(s).max_abs_diff(circle.eval(s)) < 1e-12);
        }

        let parabola = ParametricCurve::analytic(
            Interval::new(0.0, 1.0).unwrap(),
            |t: f64| AmbientVector::new(t, t * t, 0.0),
            |t: f64| AmbientVector::new(1.0, 2.0 * t, 0.0),
            |_| AmbientVector::new(0.0, 2.0, 0.0),
            |_| AmbientVector::ZERO,
        );
        let r = arclength_reparametrize(&parabola, 100).unwrap();
        // length of (t, t²) on [0,1]
        let exact = 5f64.sqrt() / 2.0 + 2f64.asinh() / 4.0;
        assert_abs_diff_eq!(r.domain().hi, exact, epsilon = 1e-11);
        for s in r.domain().linspace(100) {
            assert!((r.velocity(s).square() - 1.0).abs() < 1e-8);
            // finite differences of the position agree with the oracle
            assert!((r.fd_derivative(1, s).square() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn arclength_rejects_timelike_velocity() {
        let c = ParametricCurve::analytic(
            Interval::new(0.0, 1.0).unwrap(),
            |t: f64| AmbientVector::new(0.0, 0.0, t),
            |_| AmbientVector::new(0.0, 0.0, 1.0),
            |_| AmbientVector::ZERO,
            |_| AmbientVector::ZERO,
        );
        assert!(matches!(
            arclength_reparametrize(&c, 10),
            Err(GeometryError::NotSpacelikeVelocity { .. })
        ));
    }

    #[test]
    fn reparametrized_derivatives_match_finite_differences() {
        let r = arclength_reparametrize(&twisted_cubic(), 300).unwrap();
        for s in r.domain().linspace(9).into_iter().skip(1).take(7) {
            // each order against a central difference of the order below
            let h = 1e-5;
            for k in 1..=3 {
                let exact = r.derivative(k, s);
                let fd = (r.derivative(k - 1, s + h) - r.derivative(k - 1, s - h)) / (2.0 * h);
                assert!(
                    exact.max_abs_diff(fd) < 1e-7,
                    "k={k} s={s}: {exact} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn polynomial_derivatives() {
        let c = [1.0, -2.0, 0.5, 3.0];
        assert_abs_diff_eq!(poly_derivative(&c, 0, 2.0), 1.0 - 4.0 + 2.0 + 24.0);
        assert_abs_diff_eq!(poly_derivative(&c, 1, 2.0), -2.0 + 2.0 + 36.0);
        assert_abs_diff_eq!(poly_derivative(&c, 2, 2.0), 1.0 + 36.0);
        assert_abs_diff_eq!(poly_derivative(&c, 3, 2.0), 18.0);
        assert_abs_diff_eq!(poly_derivative(&c, 4, 2.0), 0.0);
    }

    #[test]
    fn monotone_inverse() {
        let f = ScalarFunction::Polynomial(vec![0.0, 2.0]);
        let dom = Interval::new(0.0, 3.0).unwrap();
        assert_abs_diff_eq!(invert_monotone(&f, dom, 1.0).unwrap(), 0.5, epsilon = 1e-14);
        let g = ScalarFunction::Polynomial(vec![0.0, 0.0, -1.0]);
        let dom = Interval::new(0.5, 2.0).unwrap();
        assert_abs_diff_eq!(
            invert_monotone(&g, dom, -2.25).unwrap(),
            1.5,
            epsilon = 1e-13
        );
        assert!(HelixSpec::new(
            1.0,
            ScalarFunction::Polynomial(vec![0.0, 0.0, 1.0]),
            Interval::new(-1.0, 1.0).unwrap()
        )
        .is_err());
        // rounding just below the image extrapolates, far outside fails
        let sq = ScalarFunction::Polynomial(vec![0.0, 0.0, 1.0]);
        let dom = Interval::new(0.3, 1.6).unwrap();
        let w = (std::f64::consts::PI + 0.09) - std::f64::consts::PI;
        assert_abs_diff_eq!(invert_monotone(&sq, dom, w).unwrap(), 0.3, epsilon = 1e-13);
        assert!(matches!(
            invert_monotone(&sq, dom, 0.0),
            Err(GeometryError::InverseFailure(_))
        ));
        assert!(matches!(
            invert_monotone(&sq, dom, 3.0),
            Err(GeometryError::InverseFailure(_))
        ));
    }

    #[test]
    fn csv_ingestion_builds_a_curve() {
        let mut text = String::from("s,x1,x2,x3\n");
        for k in 0..=200 {
            let s = 2.0 * PI * k as f64 / 200.0;
            text.push_str(&format!("{s},{},{},0\n", s.cos(), s.sin()));
        }
        let c = read_curve_csv(text.as_bytes()).unwrap();
        assert_eq!(c.mode(), DerivativeMode::FiniteDifference);
        let f = frenet_frame(&c, 2.0).unwrap();
        assert_abs_diff_eq!(f.kappa, 1.0, epsilon = 1e-4);
        assert_abs_diff_eq!(f.tau, 0.0, epsilon = 1e-6);
        assert!(read_curve_csv("a,b,c,d\n1,2,3,4\n".as_bytes()).is_err());
    }
}
