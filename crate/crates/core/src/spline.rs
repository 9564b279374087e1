//! Natural cubic spline through scattered samples.

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    // second derivatives at the knots
    moments: Vec<f64>,
}

impl CubicSpline {
    /// Builds the natural spline through `(knots[i], values[i])`.
    ///
    /// Knots must be strictly increasing and at least three in number.
    pub fn natural(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n != values.len() {
            return Err(GeometryError::InvalidInput(format!(
                "spline needs matching knots and values ({n} vs {})",
                values.len()
            )));
        }
        if n < 3 {
            return Err(GeometryError::InvalidInput(
                "spline needs at least three samples".into(),
            ));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidInput(
                "spline knots must be strictly increasing and values finite".into(),
            ));
        }
        // Tridiagonal system for the interior moments (Thomas algorithm).
        let mut moments = vec![0.0; n];
        let m = n - 2;
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for i in 0..m {
            let h0 = knots[i + 1] - knots[i];
            let h1 = knots[i + 2] - knots[i + 1];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] =
                6.0 * ((values[i + 2] - values[i + 1]) / h1 - (values[i + 1] - values[i]) / h0);
        }
        for i in 1..m {
            let lower = knots[i + 1] - knots[i];
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for i in (0..m).rev() {
            let next = if i + 1 < m { moments[i + 2] } else { 0.0 };
            moments[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
        }
        Ok(Self {
            knots,
            values,
            moments,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.knots.len();
        match self.knots.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Derivative of order `order` (0..=3); the end cubics extend past the knots.
    pub fn derivative(&self, x: f64, order: usize) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let h = x1 - x0;
        let a = x1 - x;
        let b = x - x0;
        match order {
            0 => {
                m0 * a.powi(3) / (6.0 * h)
                    + m1 * b.powi(3) / (6.0 * h)
                    + (y0 / h - m0 * h / 6.0) * a
                    + (y1 / h - m1 * h / 6.0) * b
            }
            1 => {
                -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - (y0 / h - m0 * h / 6.0)
                    + (y1 / h - m1 * h / 6.0)
            }
            2 => m0 * a / h + m1 * b / h,
            3 => (m1 - m0) / h,
            _ => 0.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }
}
