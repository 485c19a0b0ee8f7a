//! Hamilton quaternions, stored scalar-first as `(w, x, y, z)`.

use core::ops::{Add, Mul, Neg, Sub};

use crate::error::AlgebraError;
use crate::tolerance::Tolerances;
use crate::vector::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Pure quaternion `[0, v]`.
    pub const fn pure(v: Vec3) -> Self {
        Self::new(0.0, v.x, v.y, v.z)
    }

    pub const fn from_scalar_vector(w: f64, v: Vec3) -> Self {
        Self::new(w, v.x, v.y, v.z)
    }

    /// Rotation by `angle` radians about `axis`. The axis is normalized here;
    /// a zero axis yields the identity.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let n = axis.norm();
        if n == 0.0 {
            return Self::IDENTITY;
        }
        let half = 0.5 * angle;
        Self::from_scalar_vector(libm::cos(half), axis.scale(libm::sin(half) / n))
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub const fn vector(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Four-vector dot product.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    pub fn scale(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn conjugate(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn normalize(self) -> Result<Quaternion, AlgebraError> {
        self.normalize_with(&Tolerances::DEFAULT)
    }

    pub fn normalize_with(self, tol: &Tolerances) -> Result<Quaternion, AlgebraError> {
        let norm = self.norm();
        if !(norm > tol.min_norm) {
            return Err(AlgebraError::NearZeroNorm { norm });
        }
        Ok(self.scale(1.0 / norm))
    }

    /// Half of the relative rotation angle, `arccos(min(1, |a . b|))`, in `[0, pi/2]`.
    ///
    /// Invariant under the sign of either argument. Evaluated as
    /// `2 atan2(|a - b|, |a + b|)` after aligning signs, which equals the
    /// arccos form for unit inputs and stays exact near zero.
    pub fn geodesic(self, other: Quaternion) -> f64 {
        let b = if self.dot(other) < 0.0 { -other } else { other };
        2.0 * libm::atan2((self - b).norm(), (self + b).norm())
    }

    /// Spherical linear interpolation along the shorter arc.
    ///
    /// `other` is negated when `self . other < 0`; nearly parallel inputs fall
    /// back to normalized linear interpolation.
    pub fn slerp(self, other: Quaternion, s: f64) -> Quaternion {
        self.slerp_with(other, s, &Tolerances::DEFAULT)
    }

    pub fn slerp_with(self, other: Quaternion, s: f64, tol: &Tolerances) -> Quaternion {
        let mut cos = self.dot(other);
        let mut end = other;
        if cos < 0.0 {
            cos = -cos;
            end = -end;
        }
        if cos > tol.slerp_linear_threshold {
            let q = self.scale(1.0 - s) + end.scale(s);
            return q.normalize_with(tol).unwrap_or(self);
        }
        let omega = libm::acos(cos.min(1.0));
        let sin_omega = libm::sin(omega);
        let a = libm::sin((1.0 - s) * omega) / sin_omega;
        let b = libm::sin(s * omega) / sin_omega;
        self.scale(a) + end.scale(b)
    }

    /// Rotates `v` by this (unit) quaternion: `q [0, v] q*`.
    pub fn rotate(self, v: Vec3) -> Vec3 {
        let u = self.vector();
        let t = u.cross(v).scale(2.0);
        v + t.scale(self.w) + u.cross(t)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Default for Quaternion {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}
