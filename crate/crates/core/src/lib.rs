//! Pose planning for a point chaser among spherical keep-out zones.
//!
//! Poses are unit dual quaternions. Edges follow screw motions (ScLERP), and
//! an RRT* planner grows a tree in SE(3) under a weighted
//! translation/rotation metric. The same engine runs a baseline that
//! interpolates translation linearly and rotation by SLERP.
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]
// Negated float comparisons also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod collision;
pub mod dual_quaternion;
pub mod error;
pub mod planner;
pub mod pose_space;
pub mod quaternion;
pub mod rng;
pub mod scenario;
pub mod screw;
pub mod tolerance;
pub mod vector;

pub use collision::{validate_path, KeepOutZone, ObstacleSet, ValidationReport, Violation};
pub use dual_quaternion::{DualQuaternion, Pose, ScrewPath};
pub use error::{AlgebraError, PlanError, ScenarioError, TreeError, ValidationError};
pub use planner::{plan, PlannedPath, PlannerConfig};
pub use pose_space::{MetricWeights, PlannerMode, RotationMode, SteerConfig, WorkspaceBounds};
pub use quaternion::Quaternion;
pub use rng::RngStream;
pub use scenario::{generate_scenario, GenerationParams, Scenario};
pub use screw::ScrewParameters;
pub use tolerance::Tolerances;
pub use vector::Vec3;
