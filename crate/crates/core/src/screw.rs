//! Screw (Chasles) parameterization of rigid displacements.
//!
//! A unit dual quaternion `q = r + e d` with `r.w >= 0` is written as
//! `cos(T/2) + K sin(T/2)` with dual angle `T = theta + e pitch` and dual axis
//! `K = k + e m`, where `k` is the unit line direction and `m` its moment
//! (`m = p x k` for any point `p` on the axis). Expanding gives
//!
//! ```text
//! r = ( cos(theta/2),            sin(theta/2) k )
//! d = ( -pitch/2 sin(theta/2),   sin(theta/2) m + pitch/2 cos(theta/2) k )
//! ```

use crate::dual_quaternion::DualQuaternion;
use crate::quaternion::Quaternion;
use crate::tolerance::Tolerances;
use crate::vector::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrewParameters {
    /// Unit direction `k` of the screw axis.
    pub axis_direction: Vec3,
    /// Moment `m` of the screw axis about the origin, perpendicular to `k`.
    pub axis_moment: Vec3,
    /// Rotation about the axis, in `[0, pi]` after decomposition.
    pub theta: f64,
    /// Signed translation along the axis (m).
    pub pitch: f64,
}

impl ScrewParameters {
    pub const IDENTITY: ScrewParameters = ScrewParameters {
        axis_direction: Vec3::Z,
        axis_moment: Vec3::ZERO,
        theta: 0.0,
        pitch: 0.0,
    };

    /// Extracts the screw of a unit dual quaternion.
    pub fn from_dual_quaternion(q: &DualQuaternion) -> Self {
        Self::from_dual_quaternion_with(q, &Tolerances::DEFAULT)
    }

    pub fn from_dual_quaternion_with(q: &DualQuaternion, tol: &Tolerances) -> Self {
        // Double cover: pick the representative with a non-negative scalar part.
        let q = if q.real.w < 0.0 { -*q } else { *q };
        let r = q.real;
        let d = q.dual;
        let rv = r.vector();
        let sin_half = rv.norm();
        let theta = 2.0 * libm::atan2(sin_half, r.w);

        if theta < tol.screw_angle {
            let t = (d * r.conjugate()).vector().scale(2.0);
            let len = t.norm();
            if len < tol.screw_translation {
                return Self::IDENTITY;
            }
            return ScrewParameters {
                axis_direction: t.scale(1.0 / len),
                axis_moment: Vec3::ZERO,
                theta: 0.0,
                pitch: len,
            };
        }

        let cos_half = r.w;
        let k = rv.scale(1.0 / sin_half);
        let pitch = -2.0 * d.w / sin_half;
        let m = (d.vector() - k.scale(0.5 * pitch * cos_half)).scale(1.0 / sin_half);
        ScrewParameters {
            axis_direction: k,
            axis_moment: m,
            theta,
            pitch,
        }
    }

    /// Builds the unit dual quaternion `cos(T/2) + K sin(T/2)`.
    pub fn to_dual_quaternion(&self) -> DualQuaternion {
        let half = 0.5 * self.theta;
        let (sin_half, cos_half) = (libm::sin(half), libm::cos(half));
        let half_pitch = 0.5 * self.pitch;
        let k = self.axis_direction;
        let real = Quaternion::from_scalar_vector(cos_half, k.scale(sin_half));
        let dual = Quaternion::from_scalar_vector(
            -half_pitch * sin_half,
            self.axis_moment.scale(sin_half) + k.scale(half_pitch * cos_half),
        );
        DualQuaternion::new(real, dual)
    }

    /// Same axis with rotation and pitch scaled by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        ScrewParameters {
            theta: self.theta * s,
            pitch: self.pitch * s,
            ..*self
        }
    }
}
