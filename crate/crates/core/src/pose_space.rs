//! Pose sampling, the weighted pose metric and the two steering laws.

use core::f64::consts::TAU;

use crate::dual_quaternion::{DualQuaternion, Pose, ScrewPath};
use crate::error::ScenarioError;
use crate::quaternion::Quaternion;
use crate::rng::RngStream;
use crate::vector::Vec3;

/// Distances below this are treated as coincident poses.
pub const COINCIDENT_DISTANCE: f64 = 1e-12;

/// Axis-aligned translation bounds. A zero extent on an axis pins it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkspaceBounds {
    pub min_corner: Vec3,
    pub max_corner: Vec3,
}

impl WorkspaceBounds {
    pub fn new(min_corner: Vec3, max_corner: Vec3) -> Result<Self, ScenarioError> {
        let b = Self {
            min_corner,
            max_corner,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.min_corner.is_finite() && self.max_corner.is_finite()) {
            return Err(ScenarioError::InvalidBounds("non-finite corner".into()));
        }
        let lo = self.min_corner.to_array();
        let hi = self.max_corner.to_array();
        for (axis, (l, h)) in ["x", "y", "z"].iter().zip(lo.iter().zip(hi.iter())) {
            if l > h {
                return Err(ScenarioError::InvalidBounds(alloc::format!(
                    "min {axis} = {l} exceeds max {axis} = {h}"
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, t: Vec3) -> bool {
        let (lo, hi) = (self.min_corner, self.max_corner);
        (lo.x..=hi.x).contains(&t.x) && (lo.y..=hi.y).contains(&t.y) && (lo.z..=hi.z).contains(&t.z)
    }

    pub fn diagonal(&self) -> f64 {
        (self.max_corner - self.min_corner).norm()
    }

    /// Uniform translation inside the box, drawing x, y, z in that order.
    pub fn sample(&self, rng: &mut RngStream) -> Vec3 {
        Vec3::new(
            rng.uniform_range(self.min_corner.x, self.max_corner.x),
            rng.uniform_range(self.min_corner.y, self.max_corner.y),
            rng.uniform_range(self.min_corner.z, self.max_corner.z),
        )
    }
}

/// Weights of the pose metric `w_t |t_a - t_b| + w_r arccos|r_a . r_b|`.
///
/// The rotation term is half the relative rotation angle, so `w_r` is per
/// radian of half-angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricWeights {
    pub translation: f64,
    pub rotation: f64,
}

impl MetricWeights {
    pub const fn new(translation: f64, rotation: f64) -> Self {
        Self {
            translation,
            rotation,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.translation > 0.0
            && self.translation.is_finite()
            && self.rotation >= 0.0
            && self.rotation.is_finite()
    }
}

impl Default for MetricWeights {
    fn default() -> Self {
        Self::new(1.0, 1.0)
    }
}

/// Step limits in metric units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteerConfig {
    /// Maximum metric length of one tree extension.
    pub step_max: f64,
    /// Target metric spacing between collision samples along an edge.
    pub collision_step: f64,
}

impl SteerConfig {
    /// `collision_step` defaults to a tenth of `step_max`.
    pub fn new(step_max: f64) -> Self {
        Self {
            step_max,
            collision_step: step_max / 10.0,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.collision_step > 0.0 && self.collision_step <= self.step_max && self.step_max.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationMode {
    /// Rotations sampled uniformly on SO(3).
    Full,
    /// Rotations frozen at the identity.
    TranslationOnly,
}

impl RotationMode {
    /// Dimension of the sampled configuration space.
    pub fn dimension(self) -> u32 {
        match self {
            RotationMode::Full => 6,
            RotationMode::TranslationOnly => 3,
        }
    }
}

/// Which steering/interpolation law the planner uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlannerMode {
    /// Screw motion (ScLERP) between unit dual quaternions.
    DualQuaternion,
    /// Linear translation with SLERP on the rotation.
    Se3Baseline,
}

/// Continuous path between two poses under a [`PlannerMode`].
#[derive(Debug, Clone, Copy)]
pub enum EdgeInterpolant {
    Screw {
        path: ScrewPath,
        end: DualQuaternion,
    },
    Linear {
        start: Pose,
        end: Pose,
    },
}

impl EdgeInterpolant {
    pub fn new(mode: PlannerMode, a: &DualQuaternion, b: &DualQuaternion) -> Self {
        match mode {
            PlannerMode::DualQuaternion => EdgeInterpolant::Screw {
                path: ScrewPath::new(a, b),
                end: *b,
            },
            PlannerMode::Se3Baseline => EdgeInterpolant::Linear {
                start: Pose::new(a.real, a.translation()),
                end: Pose::new(b.real, b.translation()),
            },
        }
    }

    /// Pose at parameter `s`; `s = 1` returns the end pose exactly.
    pub fn pose_at(&self, s: f64) -> DualQuaternion {
        match self {
            EdgeInterpolant::Screw { end, .. } if s == 1.0 => *end,
            EdgeInterpolant::Screw { path, .. } => path.at(s),
            EdgeInterpolant::Linear { start, end } => {
                DualQuaternion::from_pose_unchecked(&interpolate_se3(start, end, s))
            }
        }
    }

    pub fn translation_at(&self, s: f64) -> Vec3 {
        match self {
            EdgeInterpolant::Linear { start, end } => start.translation.lerp(end.translation, s),
            _ => self.pose_at(s).translation(),
        }
    }
}

/// Metric distance between two poses given as dual quaternions.
pub fn pose_distance(a: &DualQuaternion, b: &DualQuaternion, w: &MetricWeights) -> f64 {
    w.translation * a.translation().distance(b.translation()) + w.rotation * a.real.geodesic(b.real)
}

/// The same metric evaluated on decoded poses.
pub fn se3_distance(a: &Pose, b: &Pose, w: &MetricWeights) -> f64 {
    w.translation * a.translation.distance(b.translation)
        + w.rotation * a.rotation.geodesic(b.rotation)
}

/// Uniform rotation from three uniform variates (subgroup algorithm).
pub fn sample_rotation(rng: &mut RngStream) -> Quaternion {
    let u1 = rng.uniform();
    let u2 = rng.uniform();
    let u3 = rng.uniform();
    let a = libm::sqrt(1.0 - u1);
    let b = libm::sqrt(u1);
    let (s2, c2) = (libm::sin(TAU * u2), libm::cos(TAU * u2));
    let (s3, c3) = (libm::sin(TAU * u3), libm::cos(TAU * u3));
    Quaternion::new(b * c3, a * s2, a * c2, b * s3)
}

/// Random pose: translation uniform in `bounds`, then (in full mode) a
/// uniform rotation.
pub fn sample_pose(bounds: &WorkspaceBounds, rng: &mut RngStream, mode: RotationMode) -> DualQuaternion {
    let translation = bounds.sample(rng);
    let rotation = match mode {
        RotationMode::Full => sample_rotation(rng),
        RotationMode::TranslationOnly => Quaternion::IDENTITY,
    };
    DualQuaternion::from_pose_unchecked(&Pose::new(rotation, translation))
}

/// Extends `near` toward `target` along their screw motion by at most
/// `step_max` in the pose metric.
///
/// The step fraction starts at `step_max / d`. A helical path covers more
/// chord per unit of parameter near its start than a straight line, so if
/// that fraction overshoots it is bisected down to the largest fraction whose
/// endpoint is within `step_max`.
pub fn steer_dq(
    near: &DualQuaternion,
    target: &DualQuaternion,
    w: &MetricWeights,
    cfg: &SteerConfig,
) -> DualQuaternion {
    let d = pose_distance(near, target, w);
    if d < COINCIDENT_DISTANCE {
        return *near;
    }
    if d <= cfg.step_max {
        return *target;
    }
    let path = ScrewPath::new(near, target);
    let alpha = cfg.step_max / d;
    let candidate = path.at(alpha);
    if pose_distance(near, &candidate, w) <= cfg.step_max {
        return candidate;
    }
    let (mut lo, mut hi) = (0.0, alpha);
    let mut best = *near;
    for _ in 0..52 {
        let mid = 0.5 * (lo + hi);
        let q = path.at(mid);
        if pose_distance(near, &q, w) <= cfg.step_max {
            lo = mid;
            best = q;
        } else {
            hi = mid;
        }
    }
    best
}

/// Linear translation + SLERP interpolation between two poses.
pub fn interpolate_se3(a: &Pose, b: &Pose, s: f64) -> Pose {
    if s == 0.0 {
        return *a;
    }
    if s == 1.0 {
        return *b;
    }
    Pose::new(
        a.rotation.slerp(b.rotation, s),
        a.translation.lerp(b.translation, s),
    )
}

/// Baseline steering: fraction `min(1, step_max / d)` of the linear + SLERP
/// interpolant.
pub fn steer_se3(near: &Pose, target: &Pose, w: &MetricWeights, cfg: &SteerConfig) -> Pose {
    let d = se3_distance(near, target, w);
    if d < COINCIDENT_DISTANCE {
        return *near;
    }
    if d <= cfg.step_max {
        return *target;
    }
    interpolate_se3(near, target, cfg.step_max / d)
}
