//! Unit dual quaternions `q = r + e d` encoding rigid-body poses.
//!
//! A pose with rotation `r` and translation `t` maps to `d = 1/2 [0, t] r`.
//! Composition is dual quaternion multiplication; the conjugate of a unit
//! dual quaternion is its inverse.

use core::ops::{Mul, Neg};

use crate::error::AlgebraError;
use crate::quaternion::Quaternion;
use crate::screw::ScrewParameters;
use crate::tolerance::Tolerances;
use crate::vector::Vec3;

/// A rigid-body pose: unit rotation quaternion plus translation (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub rotation: Quaternion,
    pub translation: Vec3,
}

impl Pose {
    pub const IDENTITY: Pose = Pose {
        rotation: Quaternion::IDENTITY,
        translation: Vec3::ZERO,
    };

    pub const fn new(rotation: Quaternion, translation: Vec3) -> Self {
        Self {
            rotation,
            translation,
        }
    }

    pub const fn from_translation(translation: Vec3) -> Self {
        Self::new(Quaternion::IDENTITY, translation)
    }
}

impl Default for Pose {
    fn default() -> Self {
        Self::IDENTITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualQuaternion {
    pub real: Quaternion,
    pub dual: Quaternion,
}

impl DualQuaternion {
    pub const IDENTITY: DualQuaternion = DualQuaternion::new(Quaternion::IDENTITY, Quaternion::ZERO);

    pub const fn new(real: Quaternion, dual: Quaternion) -> Self {
        Self { real, dual }
    }

    pub fn from_rotation(rotation: Quaternion) -> Self {
        Self::new(rotation, Quaternion::ZERO)
    }

    pub fn from_translation(t: Vec3) -> Self {
        Self::new(Quaternion::IDENTITY, Quaternion::pure(t.scale(0.5)))
    }

    /// Encodes a pose, rejecting rotations whose norm is off by more than the
    /// configured tolerance.
    pub fn from_pose(pose: &Pose) -> Result<Self, AlgebraError> {
        Self::from_pose_with(pose, &Tolerances::DEFAULT)
    }

    pub fn from_pose_with(pose: &Pose, tol: &Tolerances) -> Result<Self, AlgebraError> {
        let norm = pose.rotation.norm();
        if !(libm::fabs(norm - 1.0) <= tol.unit_rotation) {
            return Err(AlgebraError::NonUnitRotation { norm });
        }
        Ok(Self::from_pose_unchecked(pose))
    }

    pub(crate) fn from_pose_unchecked(pose: &Pose) -> Self {
        let r = pose.rotation;
        let dual = (Quaternion::pure(pose.translation) * r).scale(0.5);
        Self::new(r, dual)
    }

    /// Decodes the pose, rejecting inputs that violate the unit constraints.
    pub fn to_pose(&self) -> Result<Pose, AlgebraError> {
        self.to_pose_with(&Tolerances::DEFAULT)
    }

    pub fn to_pose_with(&self, tol: &Tolerances) -> Result<Pose, AlgebraError> {
        let real_norm = self.real.norm();
        let dot = self.real.dot(self.dual);
        let ok = libm::fabs(real_norm - 1.0) <= tol.unit_dual_quaternion
            && libm::fabs(dot) <= tol.unit_dual_quaternion;
        if !ok {
            return Err(AlgebraError::NonUnitDualQuaternion { real_norm, dot });
        }
        Ok(Pose::new(self.real, self.translation()))
    }

    /// Translation `vec(2 d r*)`, without checking unit constraints.
    pub fn translation(&self) -> Vec3 {
        (self.dual * self.real.conjugate()).vector().scale(2.0)
    }

    pub fn rotation(&self) -> Quaternion {
        self.real
    }

    /// Quaternion conjugate of both parts; the inverse of a unit dual quaternion.
    pub fn conjugate(&self) -> Self {
        Self::new(self.real.conjugate(), self.dual.conjugate())
    }

    /// Returns `(|real| - 1, real . dual)`, the residuals of the two unit constraints.
    pub fn unit_residuals(&self) -> (f64, f64) {
        (self.real.norm() - 1.0, self.real.dot(self.dual))
    }

    pub fn is_unit(&self, eps: f64) -> bool {
        let (a, b) = self.unit_residuals();
        libm::fabs(a) <= eps && libm::fabs(b) <= eps
    }

    /// `q^s`, computed by scaling the rotation and pitch of the screw by `s`.
    pub fn pow(&self, s: f64) -> Self {
        self.pow_with(s, &Tolerances::DEFAULT)
    }

    pub fn pow_with(&self, s: f64, tol: &Tolerances) -> Self {
        ScrewParameters::from_dual_quaternion_with(self, tol)
            .scaled(s)
            .to_dual_quaternion()
    }

    /// Screw linear interpolation `self (self* other)^s`.
    pub fn sclerp(&self, other: &DualQuaternion, s: f64) -> Self {
        ScrewPath::new(self, other).at(s)
    }

    pub fn to_array(&self) -> [f64; 8] {
        let [a, b, c, d] = self.real.to_array();
        let [e, f, g, h] = self.dual.to_array();
        [a, b, c, d, e, f, g, h]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self::new(
            Quaternion::new(a[0], a[1], a[2], a[3]),
            Quaternion::new(a[4], a[5], a[6], a[7]),
        )
    }
}

impl Default for DualQuaternion {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// `(a_r b_r, a_r b_d + a_d b_r)`.
impl Mul for DualQuaternion {
    type Output = DualQuaternion;
    fn mul(self, b: DualQuaternion) -> DualQuaternion {
        DualQuaternion::new(
            self.real * b.real,
            self.real * b.dual + self.dual * b.real,
        )
    }
}

impl Neg for DualQuaternion {
    type Output = DualQuaternion;
    fn neg(self) -> DualQuaternion {
        DualQuaternion::new(-self.real, -self.dual)
    }
}

/// The constant screw motion between two poses, decomposed once so it can be
/// sampled at many interpolation parameters.
#[derive(Debug, Clone, Copy)]
pub struct ScrewPath {
    start: DualQuaternion,
    relative: ScrewParameters,
}

impl ScrewPath {
    pub fn new(start: &DualQuaternion, end: &DualQuaternion) -> Self {
        let relative = ScrewParameters::from_dual_quaternion(&(start.conjugate() * *end));
        Self {
            start: *start,
            relative,
        }
    }

    /// Screw of the relative displacement `start* end`.
    pub fn relative_screw(&self) -> &ScrewParameters {
        &self.relative
    }

    pub fn at(&self, s: f64) -> DualQuaternion {
        if s == 0.0 {
            return self.start;
        }
        self.start * self.relative.scaled(s).to_dual_quaternion()
    }
}
