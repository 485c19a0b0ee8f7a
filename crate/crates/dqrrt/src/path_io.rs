//! `.path.json` export and re-import.
//!
//! The file holds the waypoint poses (enough to rebuild the path for
//! validation), a densified sample list for rendering, the scenario
//! obstacles, and optionally the search tree as translation segments.

use std::fs;
use std::path::Path;

use dqrrt_core::{
    DualQuaternion, MetricWeights, PlannedPath, PlannerConfig, PlannerMode, RotationMode, Scenario,
    SteerConfig,
};
use serde::{Deserialize, Serialize};

use crate::scenario_io::{check_version, scenario_hash, FormatError, ZoneRecord, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Dq,
    Se3,
}

impl From<ModeName> for PlannerMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Dq => PlannerMode::DualQuaternion,
            ModeName::Se3 => PlannerMode::Se3Baseline,
        }
    }
}

impl From<PlannerMode> for ModeName {
    fn from(m: PlannerMode) -> Self {
        match m {
            PlannerMode::DualQuaternion => ModeName::Dq,
            PlannerMode::Se3Baseline => ModeName::Se3,
        }
    }
}

impl ModeName {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeName::Dq => "dq",
            ModeName::Se3 => "se3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RotationModeName {
    Full,
    TranslationOnly,
}

impl From<RotationModeName> for RotationMode {
    fn from(m: RotationModeName) -> Self {
        match m {
            RotationModeName::Full => RotationMode::Full,
            RotationModeName::TranslationOnly => RotationMode::TranslationOnly,
        }
    }
}

impl From<RotationMode> for RotationModeName {
    fn from(m: RotationMode) -> Self {
        match m {
            RotationMode::Full => RotationModeName::Full,
            RotationMode::TranslationOnly => RotationModeName::TranslationOnly,
        }
    }
}

/// Planner settings echoed into the export so a run can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigRecord {
    pub mode: ModeName,
    pub rotation_mode: RotationModeName,
    pub seed: u64,
    pub max_iterations: usize,
    pub step_max: f64,
    pub collision_step: f64,
    pub wt: f64,
    pub wr: f64,
    pub goal_bias: f64,
    pub goal_tol_t: f64,
    pub goal_tol_r: f64,
    pub rewire_gamma: f64,
    pub rewire: bool,
    pub first_solution: bool,
}

impl From<&PlannerConfig> for ConfigRecord {
    fn from(c: &PlannerConfig) -> Self {
        Self {
            mode: c.mode.into(),
            rotation_mode: c.rotation_mode.into(),
            seed: c.seed,
            max_iterations: c.max_iterations,
            step_max: c.steer.step_max,
            collision_step: c.steer.collision_step,
            wt: c.weights.translation,
            wr: c.weights.rotation,
            goal_bias: c.goal_bias,
            goal_tol_t: c.goal_tol_translation,
            goal_tol_r: c.goal_tol_rotation,
            rewire_gamma: c.rewire_gamma,
            rewire: c.rewire,
            first_solution: c.first_solution,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub index: usize,
    pub edge: usize,
    pub s: f64,
    pub translation: [f64; 3],
    /// `(w, x, y, z)`.
    pub rotation: [f64; 4],
    /// Real part then dual part, each `(w, x, y, z)`.
    pub dual_quaternion: [f64; 8],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeEdgeRecord {
    pub parent: [f64; 3],
    pub child: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub schema_version: u64,
    pub scenario_name: String,
    pub scenario_hash: String,
    pub config: ConfigRecord,
    pub cost: f64,
    pub iterations_used: usize,
    pub nodes_in_tree: usize,
    pub reaches_exact_goal: bool,
    /// `[iteration, cost]` pairs.
    pub best_cost_trace: Vec<(usize, f64)>,
    /// Metric length of each waypoint-to-waypoint edge.
    pub edge_costs: Vec<f64>,
    /// Waypoints as dual quaternions, real part then dual part.
    pub poses: Vec<[f64; 8]>,
    pub resolution: usize,
    pub samples: Vec<SampleRecord>,
    pub obstacles: Vec<ZoneRecord>,
    pub tree: Option<Vec<TreeEdgeRecord>>,
}

impl PathFile {
    pub fn new(path: &PlannedPath, scenario: &Scenario, cfg: &PlannerConfig, resolution: usize) -> Self {
        let samples = path
            .densify(resolution)
            .into_iter()
            .map(|s| SampleRecord {
                index: s.index,
                edge: s.edge,
                s: s.s,
                translation: s.pose.translation().to_array(),
                rotation: s.pose.real.to_array(),
                dual_quaternion: s.pose.to_array(),
            })
            .collect();
        let tree = path.tree_snapshot.as_ref().map(|nodes| {
            nodes
                .iter()
                .filter_map(|(q, parent)| {
                    parent.map(|p| TreeEdgeRecord {
                        parent: nodes[p].0.translation().to_array(),
                        child: q.translation().to_array(),
                    })
                })
                .collect()
        });
        let edge_costs = path
            .poses
            .windows(2)
            .map(|w| dqrrt_core::pose_space::pose_distance(&w[0], &w[1], &path.weights))
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            scenario_name: scenario.name.clone(),
            scenario_hash: scenario_hash(scenario),
            config: cfg.into(),
            cost: path.cost,
            iterations_used: path.iterations_used,
            nodes_in_tree: path.nodes_in_tree,
            reaches_exact_goal: path.reaches_exact_goal,
            best_cost_trace: path.best_cost_trace.clone(),
            edge_costs,
            poses: path.poses.iter().map(DualQuaternion::to_array).collect(),
            resolution,
            samples,
            obstacles: scenario.obstacles.zones.iter().map(ZoneRecord::from).collect(),
            tree,
        }
    }

    /// Rebuilds the waypoint path with the settings it was planned under.
    pub fn to_planned_path(&self) -> PlannedPath {
        PlannedPath {
            poses: self.poses.iter().map(|a| DualQuaternion::from_array(*a)).collect(),
            cost: self.cost,
            mode: self.config.mode.into(),
            weights: MetricWeights::new(self.config.wt, self.config.wr),
            steer: SteerConfig {
                step_max: self.config.step_max,
                collision_step: self.config.collision_step,
            },
            iterations_used: self.iterations_used,
            nodes_in_tree: self.nodes_in_tree,
            best_cost_trace: self.best_cost_trace.clone(),
            tree_snapshot: None,
            reaches_exact_goal: self.reaches_exact_goal,
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        check_version(text)?;
        let file: PathFile = serde_json::from_str(text)?;
        if file.poses.len() < 2 {
            return Err(FormatError::Field {
                field: "poses".into(),
                message: format!("need at least 2 poses, got {}", file.poses.len()),
            });
        }
        Ok(file)
    }
}

pub fn export_path(
    path: &PlannedPath,
    scenario: &Scenario,
    cfg: &PlannerConfig,
    resolution: usize,
    destination: &Path,
) -> Result<(), FormatError> {
    fs::write(destination, PathFile::new(path, scenario, cfg, resolution).to_json())?;
    Ok(())
}

pub fn load_path(source: &Path) -> Result<PathFile, FormatError> {
    PathFile::parse(&fs::read_to_string(source)?)
}
