//! Vector algebra of Minkowski 3-space E³₁.
//!
//! The metric is `dx₁² + dx₂² − dx₃²`. A timelike vector is future-directed
//! when it lies in the same timelike cone as `E₃ = (0, 0, 1)`, that is when
//! `⟨v, E₃⟩ < 0`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Relative width of the band around the light cone inside which a vector
/// is classified as lightlike.
pub const CAUSAL_TOLERANCE: f64 = 1e-10;

/// A point or vector of E³₁ in canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AmbientVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// The unit timelike, future-directed basis vector `(0, 0, 1)`.
pub const E3: AmbientVector = AmbientVector::new(0.0, 0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

impl AmbientVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Lorentzian bilinear form `u₁v₁ + u₂v₂ − u₃v₃`.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 - self.x3 * other.x3
    }

    /// Lorentz square `⟨v, v⟩`.
    #[inline]
    pub fn square(self) -> f64 {
        self.dot(self)
    }

    /// `sqrt(|⟨v, v⟩|)`.
    #[inline]
    pub fn norm(self) -> f64 {
        self.square().abs().sqrt()
    }

    pub fn euclidean_norm_squared(self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn euclidean_norm(self) -> f64 {
        self.euclidean_norm_squared().sqrt()
    }

    /// Lorentzian cross product, the unique vector with `⟨u×v, w⟩ = det(u, v, w)`.
    #[inline]
    pub fn cross(self, v: Self) -> Self {
        let u = self;
        Self::new(
            u.x2 * v.x3 - u.x3 * v.x2,
            u.x3 * v.x1 - u.x1 * v.x3,
            u.x2 * v.x1 - u.x1 * v.x2,
        )
    }

    pub fn causal_character(self) -> CausalCharacter {
        let scale = self.euclidean_norm_squared();
        let band = CAUSAL_TOLERANCE * scale.max(1.0);
        let sq = self.square();
        if sq > band {
            CausalCharacter::Spacelike
        } else if sq < -band {
            CausalCharacter::Timelike
        } else if self.to_array().iter().all(|c| c.abs() < band) {
            CausalCharacter::Zero
        } else {
            CausalCharacter::Lightlike
        }
    }

    pub fn is_spacelike(self) -> bool {
        self.causal_character() == CausalCharacter::Spacelike
    }

    pub fn is_timelike(self) -> bool {
        self.causal_character() == CausalCharacter::Timelike
    }

    /// Timelike and in the cone of `E₃`.
    pub fn is_future_directed(self) -> bool {
        self.is_timelike() && self.dot(E3) < 0.0
    }

    /// Returns `v / |v|`, or `None` for (numerically) null vectors.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() && self.causal_character() != CausalCharacter::Lightlike {
            Some(self / n)
        } else {
            None
        }
    }

    /// Flips a timelike vector into the future cone; other vectors are returned as is.
    pub fn future_directed(self) -> Self {
        if self.dot(E3) > 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.x1.abs().max(d.x2.abs()).max(d.x3.abs())
    }
}

/// `det(u, v, w)` of the matrix with columns `u, v, w`.
pub fn det(u: AmbientVector, v: AmbientVector, w: AmbientVector) -> f64 {
    u.x1 * (v.x2 * w.x3 - v.x3 * w.x2) - v.x1 * (u.x2 * w.x3 - u.x3 * w.x2)
        + w.x1 * (u.x2 * v.x3 - u.x3 * v.x2)
}

pub fn lorentz_inner(u: AmbientVector, v: AmbientVector) -> f64 {
    u.dot(v)
}

pub fn lorentz_cross(u: AmbientVector, v: AmbientVector) -> AmbientVector {
    u.cross(v)
}

pub fn causal_character(v: AmbientVector) -> CausalCharacter {
    v.causal_character()
}

/// Hyperbolic angle `θ ≥ 0` with `⟨u, v⟩ = −|u||v| cosh θ`.
///
/// Evaluated as `asinh(|u×v| / (|u||v|))`, which stays accurate for nearly
/// parallel vectors where `acosh` of a value close to one loses half the
/// significant digits. Uses `⟨u×v, u×v⟩ = ⟨u,v⟩² − ⟨u,u⟩⟨v,v⟩`.
pub fn hyperbolic_angle(u: AmbientVector, v: AmbientVector) -> Result<f64> {
    if !u.is_timelike() || !v.is_timelike() {
        return Err(GeometryError::NotTimelike);
    }
    if u.dot(v) > 0.0 {
        return Err(GeometryError::OppositeCones);
    }
    let scale = u.norm() * v.norm();
    let sinh = u.cross(v).square().max(0.0).sqrt() / scale;
    Ok(sinh.asinh())
}

/// Rotation about the x₃-axis followed by a boost in the x₁x₃-plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Isometry {
    pub rapidity: f64,
    pub rotation: f64,
}

impl Isometry {
    pub fn new(rapidity: f64, rotation: f64) -> Self {
        Self { rapidity, rotation }
    }

    pub fn apply(&self, v: AmbientVector) -> AmbientVector {
        let (s, c) = self.rotation.sin_cos();
        let r = AmbientVector::new(c * v.x1 - s * v.x2, s * v.x1 + c * v.x2, v.x3);
        let (sh, ch) = (self.rapidity.sinh(), self.rapidity.cosh());
        AmbientVector::new(ch * r.x1 + sh * r.x3, r.x2, sh * r.x1 + ch * r.x3)
    }
}

pub fn apply_isometry(boost_rapidity: f64, rotation_angle: f64, v: AmbientVector) -> AmbientVector {
    Isometry::new(boost_rapidity, rotation_angle).apply(v)
}

impl fmt::Display for AmbientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

impl Add for AmbientVector {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl AddAssign for AmbientVector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for AmbientVector {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl SubAssign for AmbientVector {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for AmbientVector {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for AmbientVector {
    type Output = Self;
    #[inline]
    fn mul(self, k: f64) -> Self {
        Self::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Mul<AmbientVector> for f64 {
    type Output = AmbientVector;
    #[inline]
    fn mul(self, v: AmbientVector) -> AmbientVector {
        v * self
    }
}

impl Div<f64> for AmbientVector {
    type Output = Self;
    #[inline]
    fn div(self, k: f64) -> Self {
        Self::new(self.x1 / k, self.x2 / k, self.x3 / k)
    }
}
