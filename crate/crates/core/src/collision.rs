//! Keep-out zone clearance for poses, edges and whole paths.
//!
//! The chaser is a point: only the translation of a pose matters. A position
//! is clear of a zone when its distance to the center is strictly greater
//! than the radius; touching the surface is a violation.

use alloc::vec::Vec;

use crate::dual_quaternion::DualQuaternion;
use crate::error::ValidationError;
use crate::planner::PlannedPath;
use crate::pose_space::{pose_distance, EdgeInterpolant, MetricWeights, PlannerMode, SteerConfig};
use crate::vector::Vec3;

/// Spherical keep-out zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeepOutZone {
    pub center: Vec3,
    pub radius: f64,
}

impl KeepOutZone {
    pub const fn new(center: Vec3, radius: f64) -> Self {
        Self { center, radius }
    }

    /// Signed distance from `t` to the sphere surface (negative inside).
    pub fn clearance(&self, t: Vec3) -> f64 {
        t.distance(self.center) - self.radius
    }

    pub fn is_clear(&self, t: Vec3) -> bool {
        t.distance(self.center) > self.radius
    }
}

/// Ordered set of keep-out zones; may be empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObstacleSet {
    pub zones: Vec<KeepOutZone>,
}

impl ObstacleSet {
    pub fn new(zones: Vec<KeepOutZone>) -> Self {
        Self { zones }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.zones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zones.is_empty()
    }

    /// Index of the first zone that `t` violates.
    pub fn first_violated(&self, t: Vec3) -> Option<usize> {
        self.zones.iter().position(|z| !z.is_clear(t))
    }

    /// Minimum clearance over all zones, `+inf` when there are none.
    pub fn min_clearance(&self, t: Vec3) -> f64 {
        self.zones
            .iter()
            .map(|z| z.clearance(t))
            .fold(f64::INFINITY, f64::min)
    }
}

/// True iff `t` is strictly outside every zone.
pub fn point_clear(t: Vec3, obstacles: &ObstacleSet) -> bool {
    obstacles.zones.iter().all(|z| z.is_clear(t))
}

/// Number of segments an edge of metric length `distance` is split into.
///
/// At least `max(2, ceil(distance / collision_step)) + 1`, rounded up to a
/// power of two so that a finer `collision_step` always yields a superset of
/// the sample parameters.
pub fn edge_segments(distance: f64, collision_step: f64) -> usize {
    let raw = libm::ceil(distance / collision_step);
    let base = if raw.is_finite() && raw > 2.0 {
        raw.min((1u64 << 40) as f64) as usize
    } else {
        2
    };
    (base + 1).next_power_of_two()
}

fn edge_clear(
    mode: PlannerMode,
    a: &DualQuaternion,
    b: &DualQuaternion,
    obstacles: &ObstacleSet,
    cfg: &SteerConfig,
    w: &MetricWeights,
) -> bool {
    if obstacles.is_empty() {
        return true;
    }
    let n = edge_segments(pose_distance(a, b, w), cfg.collision_step);
    let edge = EdgeInterpolant::new(mode, a, b);
    (0..=n).all(|i| point_clear(edge.translation_at(i as f64 / n as f64), obstacles))
}

/// Checks the screw (ScLERP) path from `a` to `b` at the discretization of
/// [`edge_segments`].
pub fn edge_clear_dq(
    a: &DualQuaternion,
    b: &DualQuaternion,
    obstacles: &ObstacleSet,
    cfg: &SteerConfig,
    w: &MetricWeights,
) -> bool {
    edge_clear(PlannerMode::DualQuaternion, a, b, obstacles, cfg, w)
}

/// Checks the linear-translation + SLERP path from `a` to `b`.
pub fn edge_clear_se3(
    a: &crate::dual_quaternion::Pose,
    b: &crate::dual_quaternion::Pose,
    obstacles: &ObstacleSet,
    cfg: &SteerConfig,
    w: &MetricWeights,
) -> bool {
    let a = DualQuaternion::from_pose_unchecked(a);
    let b = DualQuaternion::from_pose_unchecked(b);
    edge_clear(PlannerMode::Se3Baseline, &a, &b, obstacles, cfg, w)
}

/// Mode-dispatched edge check used by the planner.
pub fn edge_clear_for(
    mode: PlannerMode,
    a: &DualQuaternion,
    b: &DualQuaternion,
    obstacles: &ObstacleSet,
    cfg: &SteerConfig,
    w: &MetricWeights,
) -> bool {
    edge_clear(mode, a, b, obstacles, cfg, w)
}

/// First sample of a path that violates a keep-out zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    /// Index of the edge (pose `edge` to pose `edge + 1`).
    pub edge: usize,
    /// Sample index within the edge.
    pub sample: usize,
    /// Running sample index over the whole path.
    pub path_sample: usize,
    /// Interpolation parameter of the sample.
    pub s: f64,
    pub translation: Vec3,
    pub zone: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub passed: bool,
    /// Minimum over samples and zones of `|t - c| - r`; `+inf` with no zones.
    pub min_clearance: f64,
    pub first_violation: Option<Violation>,
    pub samples_checked: usize,
}

/// Re-checks every edge of `path` at `refine` times the planning-time
/// sample density.
pub fn validate_path(
    path: &PlannedPath,
    obstacles: &ObstacleSet,
    refine: usize,
) -> Result<ValidationReport, ValidationError> {
    if refine == 0 {
        return Err(ValidationError::InvalidRefinement);
    }
    if path.poses.len() < 2 {
        return Err(ValidationError::EmptyPath(path.poses.len()));
    }
    let mut min_clearance = f64::INFINITY;
    let mut first_violation = None;
    let mut path_sample = 0usize;
    for (edge_index, pair) in path.poses.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let n = refine * edge_segments(pose_distance(a, b, &path.weights), path.steer.collision_step);
        let edge = EdgeInterpolant::new(path.mode, a, b);
        // Shared endpoints are checked once, as the first sample of the next edge.
        let first = if edge_index == 0 { 0 } else { 1 };
        for i in first..=n {
            let s = i as f64 / n as f64;
            let t = edge.translation_at(s);
            min_clearance = min_clearance.min(obstacles.min_clearance(t));
            if first_violation.is_none() && !point_clear(t, obstacles) {
                first_violation = Some(Violation {
                    edge: edge_index,
                    sample: i,
                    path_sample,
                    s,
                    translation: t,
                    zone: obstacles.first_violated(t).unwrap_or(0),
                });
            }
            path_sample += 1;
        }
    }
    Ok(ValidationReport {
        passed: first_violation.is_none(),
        min_clearance,
        first_violation,
        samples_checked: path_sample,
    })
}
