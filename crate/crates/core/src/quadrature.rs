//! Adaptive Simpson quadrature and cached antiderivatives.

use std::sync::Arc;

use crate::error::{GeometryError, Result};

/// Default absolute tolerance of the adaptive Simpson rule.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Maximum bisection depth of the adaptive Simpson rule.
pub const QUADRATURE_MAX_DEPTH: u32 = 40;
/// Node density of cached antiderivatives, per unit parameter length.
pub const NODES_PER_UNIT: f64 = 512.0;

/// Integrates `f` over `[a, b]` with adaptive Simpson and Richardson correction.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = simpson_step(&f, a, b, fa, fm, fb, whole, tol, max_depth)
        .ok_or(GeometryError::QuadratureFailure { a, b })?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(GeometryError::QuadratureFailure { a, b })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return None;
    }
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    Some(
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
    )
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Antiderivative `F(x) = F(x₀) + ∫_{x₀}^x f` tabulated on a uniform grid.
///
/// Node values come from adaptive Simpson on each cell; between nodes the
/// primitive is a cubic Hermite interpolant whose slopes are the exact
/// integrand values. Outside the tabulated range the integral is completed
/// with a direct quadrature from the nearest end node.
#[derive(Clone)]
pub struct Primitive {
    integrand: ScalarFn,
    start: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl std::fmt::Debug for Primitive {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Primitive")
            .field("start", &self.start)
            .field("step", &self.step)
            .field("nodes", &self.values.len())
            .finish()
    }
}

impl Primitive {
    /// Tabulates the primitive of `integrand` on `[lo, hi]`, normalized so
    /// that it takes `anchor_value` at `anchor` (which may lie outside).
    pub fn new(
        integrand: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lo: f64,
        hi: f64,
        anchor: f64,
        anchor_value: f64,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(GeometryError::DomainError(format!(
                "invalid primitive range [{lo}, {hi}]"
            )));
        }
        let integrand: ScalarFn = Arc::new(integrand);
        let cells = (((hi - lo) * NODES_PER_UNIT).ceil() as usize).max(8);
        let step = (hi - lo) / cells as f64;
        let cell_tol = QUADRATURE_TOLERANCE / cells as f64;
        let mut values = Vec::with_capacity(cells + 1);
        let mut slopes = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        values.push(0.0);
        slopes.push(integrand(lo));
        for k in 0..cells {
            let a = lo + k as f64 * step;
            let b = if k + 1 == cells { hi } else { a + step };
            if b > a {
                acc += adaptive_simpson(&*integrand, a, b, cell_tol, QUADRATURE_MAX_DEPTH)?;
            }
            values.push(acc);
            slopes.push(integrand(b));
        }
        let mut out = Self {
            integrand,
            start: lo,
            step,
            values,
            slopes,
        };
        let shift = anchor_value - out.eval_raw(anchor)?;
        for v in &mut out.values {
            *v += shift;
        }
        Ok(out)
    }

    fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    fn eval_raw(&self, x: f64) -> Result<f64> {
        let end = self.end();
        if x < self.start {
            let tail = adaptive_simpson(
                &*self.integrand,
                x,
                self.start,
                QUADRATURE_TOLERANCE,
                QUADRATURE_MAX_DEPTH,
            )?;
            return Ok(self.values[0] - tail);
        }
        if x > end {
            let tail = adaptive_simpson(
                &*self.integrand,
                end,
                x,
                QUADRATURE_TOLERANCE,
                QUADRATURE_MAX_DEPTH,
            )?;
            return Ok(self.values[self.values.len() - 1] + tail);
        }
        if self.step == 0.0 {
            return Ok(self.values[0]);
        }
        let cells = self.values.len() - 1;
        let k = (((x - self.start) / self.step).floor() as usize).min(cells - 1);
        let x0 = self.start + k as f64 * self.step;
        let h = if k + 1 == cells { end - x0 } else { self.step };
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        Ok(hermite(
            self.values[k],
            self.values[k + 1],
            self.slopes[k] * h,
            self.slopes[k + 1] * h,
            t,
        ))
    }

    /// Value of the primitive at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        // Tabulated range never fails; extrapolation uses the same quadrature
        // that already succeeded at construction, so fall back to NaN only if
        // the integrand itself blows up outside the table.
        self.eval_raw(x).unwrap_or(f64::NAN)
    }

    /// The integrand, i.e. the exact derivative of the primitive.
    pub fn derivative(&self, x: f64) -> f64 {
        (self.integrand)(x)
    }
}

/// Cubic Hermite basis on `[0, 1]` with endpoint values and scaled slopes.
#[inline]
pub fn hermite(p0: f64, p1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * p0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * p1
        + (t3 - t2) * m1
}
