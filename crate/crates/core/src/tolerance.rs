//! Numerical thresholds used by the quaternion and dual quaternion algebra.
//!
//! Every function that depends on a threshold has a `*_with` variant taking a
//! [`Tolerances`] record; the plain variant uses [`Tolerances::DEFAULT`].

/// Threshold configuration for the algebra routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Norm at or below which a quaternion cannot be normalized.
    pub min_norm: f64,
    /// Rotation angle (rad) below which a screw is treated as rotation-free.
    pub screw_angle: f64,
    /// Translation norm (m) below which a rotation-free screw is the identity.
    pub screw_translation: f64,
    /// `|a . b|` above which SLERP falls back to normalized linear interpolation.
    pub slerp_linear_threshold: f64,
    /// Allowed deviation of rotation norm from one when building a dual quaternion.
    pub unit_rotation: f64,
    /// Allowed violation of either unit constraint when decoding a dual quaternion.
    pub unit_dual_quaternion: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        min_norm: 1e-12,
        screw_angle: 1e-8,
        screw_translation: 1e-12,
        slerp_linear_threshold: 1.0 - 1e-10,
        unit_rotation: 1e-6,
        unit_dual_quaternion: 1e-6,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
