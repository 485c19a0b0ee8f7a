//! Planning scenarios and deterministic random obstacle fields.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::collision::{KeepOutZone, ObstacleSet};
use crate::dual_quaternion::{DualQuaternion, Pose};
use crate::error::ScenarioError;
use crate::pose_space::WorkspaceBounds;
use crate::quaternion::Quaternion;
use crate::rng::RngStream;
use crate::vector::Vec3;

/// Minimum gap (m) between a generated sphere surface and the start or goal.
pub const ENDPOINT_MARGIN: f64 = 1.0;
/// Draw attempts per sphere before generation gives up.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub bounds: WorkspaceBounds,
    pub start: Pose,
    pub goal: Pose,
    pub obstacles: ObstacleSet,
    /// Seed the obstacle field was generated from, if it was generated.
    pub obstacle_seed: Option<u64>,
}

impl Scenario {
    /// Checks bounds, unit rotations, zone radii, and that both endpoints are
    /// inside the bounds and clear of every zone.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.bounds.validate()?;
        for (i, z) in self.obstacles.zones.iter().enumerate() {
            if !(z.radius > 0.0 && z.radius.is_finite()) || !z.center.is_finite() {
                return Err(ScenarioError::InvalidZone {
                    zone: i,
                    radius: z.radius,
                });
            }
        }
        for (which, pose) in [("start", &self.start), ("goal", &self.goal)] {
            DualQuaternion::from_pose(pose)?;
            if !self.bounds.contains(pose.translation) {
                return Err(ScenarioError::EndpointOutOfBounds(which));
            }
            if let Some(zone) = self.obstacles.first_violated(pose.translation) {
                return Err(ScenarioError::EndpointBlocked { which, zone });
            }
        }
        Ok(())
    }
}

/// Inputs of [`generate_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationParams {
    pub name: String,
    pub seed: u64,
    pub count: usize,
    pub bounds: WorkspaceBounds,
    pub radius_min: f64,
    pub radius_max: f64,
    pub start: Pose,
    pub goal: Pose,
}

/// Places `count` spheres with centers uniform in the bounds and radii
/// uniform in `[radius_min, radius_max)`.
///
/// Each attempt draws center x, y, z and then the radius. A sphere whose
/// surface comes within [`ENDPOINT_MARGIN`] of the start or goal translation
/// is redrawn, up to [`MAX_PLACEMENT_ATTEMPTS`] times.
pub fn generate_scenario(params: &GenerationParams) -> Result<Scenario, ScenarioError> {
    params.bounds.validate()?;
    let (rmin, rmax) = (params.radius_min, params.radius_max);
    if !(rmin > 0.0 && rmin <= rmax && rmax.is_finite()) {
        return Err(ScenarioError::InvalidRadiusRange {
            min: rmin,
            max: rmax,
        });
    }
    for (which, pose) in [("start", &params.start), ("goal", &params.goal)] {
        DualQuaternion::from_pose(pose)?;
        if !params.bounds.contains(pose.translation) {
            return Err(ScenarioError::EndpointOutOfBounds(which));
        }
    }
    if params.start == params.goal {
        return Err(ScenarioError::CoincidentEndpoints);
    }

    let mut rng = RngStream::new(params.seed);
    let endpoints = [params.start.translation, params.goal.translation];
    let mut zones = Vec::with_capacity(params.count);
    for index in 0..params.count {
        let mut placed = None;
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            let center = params.bounds.sample(&mut rng);
            let radius = rng.uniform_range(rmin, rmax);
            let keeps_margin = endpoints
                .iter()
                .all(|e| e.distance(center) > radius + ENDPOINT_MARGIN);
            if keeps_margin {
                placed = Some(KeepOutZone::new(center, radius));
                break;
            }
        }
        match placed {
            Some(z) => zones.push(z),
            None => {
                return Err(ScenarioError::GenerationFailed {
                    zone: index,
                    attempts: MAX_PLACEMENT_ATTEMPTS,
                })
            }
        }
    }

    let scenario = Scenario {
        name: params.name.clone(),
        bounds: params.bounds,
        start: params.start,
        goal: params.goal,
        obstacles: ObstacleSet::new(zones),
        obstacle_seed: Some(params.seed),
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Seed of the built-in demo obstacle field.
pub const DEMO_SEED: u64 = 42;

/// Generation inputs of the built-in demo: a 100 m cube, identity start
/// orientation near one corner, goal near the opposite corner rotated a
/// quarter turn about z, and seeded spherical zones.
pub fn demo_params() -> GenerationParams {
    GenerationParams {
        name: "demo".into(),
        seed: DEMO_SEED,
        count: 12,
        bounds: WorkspaceBounds {
            min_corner: Vec3::ZERO,
            max_corner: Vec3::new(100.0, 100.0, 100.0),
        },
        radius_min: 8.0,
        radius_max: 16.0,
        start: Pose::new(Quaternion::IDENTITY, Vec3::new(10.0, 10.0, 10.0)),
        goal: Pose::new(
            Quaternion::from_axis_angle(Vec3::Z, FRAC_PI_2),
            Vec3::new(90.0, 90.0, 90.0),
        ),
    }
}

pub fn demo_scenario() -> Scenario {
    generate_scenario(&demo_params()).expect("demo parameters are valid")
}

/// Translation-only variant: same cube, identity orientations, 8 spheres.
pub fn translation_demo_params() -> GenerationParams {
    GenerationParams {
        name: "translation-demo".into(),
        count: 8,
        goal: Pose::from_translation(Vec3::new(90.0, 90.0, 90.0)),
        ..demo_params()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(count: usize) -> GenerationParams {
        GenerationParams {
            count,
            ..demo_params()
        }
    }

    #[test]
    fn zero_count_is_obstacle_free() {
        let s = generate_scenario(&params(0)).unwrap();
        assert!(s.obstacles.is_empty());
        assert_eq!(s.obstacle_seed, Some(DEMO_SEED));
    }

    #[test]
    fn same_seed_same_scenario() {
        assert_eq!(
            generate_scenario(&params(8)).unwrap(),
            generate_scenario(&params(8)).unwrap()
        );
        let other = GenerationParams {
            seed: 7,
            ..params(8)
        };
        assert_ne!(generate_scenario(&other).unwrap(), generate_scenario(&params(8)).unwrap());
    }

    #[test]
    fn spheres_keep_margin_from_endpoints() {
        for seed in 0..20 {
            let p = GenerationParams { seed, ..params(8) };
            let s = generate_scenario(&p).unwrap();
            for z in &s.obstacles.zones {
                for e in [p.start.translation, p.goal.translation] {
                    assert!(z.center.distance(e) > z.radius + ENDPOINT_MARGIN);
                }
                assert!(z.radius >= p.radius_min && z.radius < p.radius_max);
                assert!(p.bounds.contains(z.center));
            }
            s.validate().unwrap();
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let bad_radius = GenerationParams {
            radius_min: 5.0,
            radius_max: 2.0,
            ..params(1)
        };
        assert!(matches!(
            generate_scenario(&bad_radius),
            Err(ScenarioError::InvalidRadiusRange { .. })
        ));
        let mut bad_bounds = params(1);
        bad_bounds.bounds.max_corner.x = -1.0;
        assert!(matches!(
            generate_scenario(&bad_bounds),
            Err(ScenarioError::InvalidBounds(_))
        ));
        let same = GenerationParams {
            goal: params(1).start,
            ..params(1)
        };
        assert_eq!(generate_scenario(&same), Err(ScenarioError::CoincidentEndpoints));
    }

    #[test]
    fn impossible_placement_fails() {
        // Every center in the cube is closer than 200 m to both endpoints.
        let p = GenerationParams {
            radius_min: 200.0,
            radius_max: 300.0,
            ..params(1)
        };
        assert_eq!(
            generate_scenario(&p),
            Err(ScenarioError::GenerationFailed {
                zone: 0,
                attempts: MAX_PLACEMENT_ATTEMPTS
            })
        );
    }

    #[test]
    fn validate_rejects_blocked_endpoint() {
        let mut s = generate_scenario(&params(0)).unwrap();
        s.obstacles.zones.push(KeepOutZone::new(s.start.translation, 1.0));
        assert_eq!(
            s.validate(),
            Err(ScenarioError::EndpointBlocked {
                which: "start",
                zone: 0
            })
        );
        s.obstacles.zones[0].radius = 0.0;
        assert!(matches!(s.validate(), Err(ScenarioError::InvalidZone { zone: 0, .. })));
    }
}
