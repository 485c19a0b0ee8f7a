//! RRT* over unit dual quaternions.
//!
//! One engine serves both steering laws. Every iteration draws a target
//! (the goal with probability `goal_bias`, otherwise a uniform pose), steers
//! from the nearest node, and adds the new pose if the edge from the nearest
//! node is collision-free. The new node is attached through the cheapest
//! collision-free neighbor inside the shrinking radius
//! `min(step_max, gamma (ln n / n)^(1/dim))`, and neighbors are then rewired
//! through it when that lowers their cost.
//!
//! Whether a node is added depends only on the nearest-node edge, so the set
//! of node poses is the same with or without the cost-improvement steps.

mod tree;

use alloc::vec::Vec;

pub use tree::{extract_path, near_set, nearest, Branch, Tree, TreeNode, REWIRE_EPSILON};

use crate::collision::{edge_clear_for, point_clear};
use crate::dual_quaternion::{DualQuaternion, Pose};
use crate::error::PlanError;
use crate::pose_space::{
    pose_distance, sample_pose, steer_dq, steer_se3, EdgeInterpolant, MetricWeights,
    PlannerMode, RotationMode, SteerConfig, COINCIDENT_DISTANCE,
};
use crate::quaternion::Quaternion;
use crate::rng::RngStream;
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub max_iterations: usize,
    /// Probability of steering toward the exact goal pose.
    pub goal_bias: f64,
    /// Goal region half-width in translation (m).
    pub goal_tol_translation: f64,
    /// Goal region half-width in rotation, measured like the metric's
    /// rotation term (`arccos|r . r_goal|`, rad).
    pub goal_tol_rotation: f64,
    pub rewire_gamma: f64,
    pub steer: SteerConfig,
    pub weights: MetricWeights,
    pub seed: u64,
    pub mode: PlannerMode,
    pub rotation_mode: RotationMode,
    /// Choose-parent and rewiring; off gives plain RRT on the same node set.
    pub rewire: bool,
    /// Stop at the first goal-satisfying node instead of using all iterations.
    pub first_solution: bool,
    /// Keep `(pose, parent)` of every tree node in the result.
    pub record_tree: bool,
    /// Verify tree consistency after every iteration (panics on failure).
    pub debug_checks: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            goal_bias: 0.05,
            goal_tol_translation: 0.5,
            goal_tol_rotation: 0.05,
            // Twice the diagonal of a 100 m cube.
            rewire_gamma: 2.0 * 100.0 * libm::sqrt(3.0),
            steer: SteerConfig::new(5.0),
            weights: MetricWeights::default(),
            seed: 0,
            mode: PlannerMode::DualQuaternion,
            rotation_mode: RotationMode::Full,
            rewire: true,
            first_solution: false,
            record_tree: false,
            debug_checks: false,
        }
    }
}

impl PlannerConfig {
    /// Defaults with `rewire_gamma` set to twice the workspace diagonal.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        Self {
            rewire_gamma: 2.0 * scenario.bounds.diagonal(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        let fail = |m: &str| Err(PlanError::InvalidConfig(m.into()));
        if self.max_iterations < 1 {
            return fail("max_iterations must be at least 1");
        }
        if !(0.0..1.0).contains(&self.goal_bias) {
            return fail("goal_bias must lie in [0, 1)");
        }
        if !(self.rewire_gamma > 0.0 && self.rewire_gamma.is_finite()) {
            return fail("rewire_gamma must be positive");
        }
        if !self.steer.is_valid() {
            return fail("need 0 < collision_step <= step_max");
        }
        if !self.weights.is_valid() {
            return fail("need w_t > 0 and w_r >= 0");
        }
        if !(self.goal_tol_translation >= 0.0 && self.goal_tol_rotation >= 0.0) {
            return fail("goal tolerances must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPath {
    /// Poses from the exact start to the final (goal-region) pose.
    pub poses: Vec<DualQuaternion>,
    /// Sum of metric distances between consecutive poses.
    pub cost: f64,
    pub mode: PlannerMode,
    pub weights: MetricWeights,
    pub steer: SteerConfig,
    pub iterations_used: usize,
    pub nodes_in_tree: usize,
    /// `(iteration, cost)` each time the incumbent solution improved.
    pub best_cost_trace: Vec<(usize, f64)>,
    /// `(pose, parent)` for every tree node, when requested.
    pub tree_snapshot: Option<Vec<(DualQuaternion, Option<usize>)>>,
    /// Whether the exact goal pose ends the path.
    pub reaches_exact_goal: bool,
}

/// One densified sample of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub index: usize,
    pub edge: usize,
    pub s: f64,
    pub pose: DualQuaternion,
}

/// Mean and maximum rotation increment (full angle, rad) between
/// consecutive densified samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationStats {
    pub mean: f64,
    pub max: f64,
}

impl PlannedPath {
    /// Each edge split into `resolution` steps of its mode's interpolant:
    /// `edges * resolution + 1` samples. Edge endpoints are the stored poses.
    pub fn densify(&self, resolution: usize) -> Vec<PathSample> {
        let resolution = resolution.max(1);
        let mut out = Vec::with_capacity(self.poses.len().saturating_sub(1) * resolution + 1);
        for (edge, pair) in self.poses.windows(2).enumerate() {
            let interp = EdgeInterpolant::new(self.mode, &pair[0], &pair[1]);
            for j in 0..resolution {
                let s = j as f64 / resolution as f64;
                let pose = if j == 0 { pair[0] } else { interp.pose_at(s) };
                out.push(PathSample {
                    index: out.len(),
                    edge,
                    s,
                    pose,
                });
            }
        }
        if let Some(last) = self.poses.last() {
            out.push(PathSample {
                index: out.len(),
                edge: self.poses.len().saturating_sub(2),
                s: if self.poses.len() > 1 { 1.0 } else { 0.0 },
                pose: *last,
            });
        }
        out
    }

    pub fn rotation_stats(&self, resolution: usize) -> RotationStats {
        let samples = self.densify(resolution);
        let increments: Vec<f64> = samples
            .windows(2)
            .map(|w| 2.0 * w[0].pose.real.geodesic(w[1].pose.real))
            .collect();
        if increments.is_empty() {
            return RotationStats { mean: 0.0, max: 0.0 };
        }
        RotationStats {
            mean: increments.iter().sum::<f64>() / increments.len() as f64,
            max: increments.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Sum of consecutive metric distances, recomputed from the poses.
    pub fn recomputed_cost(&self) -> f64 {
        self.poses
            .windows(2)
            .map(|w| pose_distance(&w[0], &w[1], &self.weights))
            .sum()
    }
}

struct GoalCandidate {
    node: usize,
    /// Cost of the closing edge to the exact goal (0 when not appended).
    /// Fixed at discovery so the incumbent cost never increases.
    tail: f64,
    append_goal: bool,
    coincident: bool,
}

#[derive(Default)]
struct GoalTracker {
    candidates: Vec<GoalCandidate>,
    /// `(total cost, candidate index)` of the incumbent.
    best: Option<(f64, usize)>,
    trace: Vec<(usize, f64)>,
}

struct Engine<'a> {
    scenario: &'a Scenario,
    cfg: &'a PlannerConfig,
    tree: Tree,
    goal: DualQuaternion,
    goal_pose: Pose,
}

impl Engine<'_> {
    fn steer(&self, near: &DualQuaternion, target: &DualQuaternion) -> DualQuaternion {
        let (w, step) = (&self.cfg.weights, &self.cfg.steer);
        match self.cfg.mode {
            PlannerMode::DualQuaternion => steer_dq(near, target, w, step),
            PlannerMode::Se3Baseline => {
                let a = Pose::new(near.real, near.translation());
                let b = Pose::new(target.real, target.translation());
                DualQuaternion::from_pose_unchecked(&steer_se3(&a, &b, w, step))
            }
        }
    }

    fn edge_clear(&self, a: &DualQuaternion, b: &DualQuaternion) -> bool {
        edge_clear_for(
            self.cfg.mode,
            a,
            b,
            &self.scenario.obstacles,
            &self.cfg.steer,
            &self.cfg.weights,
        )
    }

    fn in_goal_region(&self, id: usize) -> bool {
        let p = &self.tree.nodes()[id].decoded;
        p.translation.distance(self.goal_pose.translation) <= self.cfg.goal_tol_translation
            && p.rotation.geodesic(self.goal_pose.rotation) <= self.cfg.goal_tol_rotation
    }

    fn goal_candidate(&self, id: usize) -> GoalCandidate {
        let d = self.tree.distance_to(id, &self.goal_pose);
        if d < COINCIDENT_DISTANCE {
            return GoalCandidate {
                node: id,
                tail: 0.0,
                append_goal: false,
                coincident: true,
            };
        }
        let clear = self.edge_clear(&self.tree.nodes()[id].pose, &self.goal);
        GoalCandidate {
            node: id,
            tail: if clear { d } else { 0.0 },
            append_goal: clear,
            coincident: false,
        }
    }

    /// Registers `added` if it reaches the goal region, then re-evaluates the
    /// incumbent; rewiring may have lowered any candidate's cost.
    fn consider(&self, added: Option<usize>, iteration: usize, goals: &mut GoalTracker) {
        if let Some(id) = added {
            if self.in_goal_region(id) {
                goals.candidates.push(self.goal_candidate(id));
            }
        }
        for (k, c) in goals.candidates.iter().enumerate() {
            let total = self.tree.cost(c.node) + c.tail;
            if goals.best.is_none_or(|(b, _)| total < b) {
                goals.best = Some((total, k));
            }
        }
        if let Some((b, _)) = goals.best {
            if goals.trace.last().is_none_or(|&(_, prev)| b < prev) {
                goals.trace.push((iteration, b));
            }
        }
    }

    fn neighbor_radius(&self) -> f64 {
        let n = (self.tree.len() + 1) as f64;
        let dim = self.cfg.rotation_mode.dimension() as f64;
        let shrinking = self.cfg.rewire_gamma * libm::pow(libm::log(n) / n, 1.0 / dim);
        shrinking.min(self.cfg.steer.step_max)
    }

    /// One extension; returns the new node id if one was added.
    fn extend(&mut self, rng: &mut RngStream) -> Option<usize> {
        let target = if rng.uniform() < self.cfg.goal_bias {
            self.goal
        } else {
            sample_pose(&self.scenario.bounds, rng, self.cfg.rotation_mode)
        };
        let near = self.tree.nearest(&target).ok()?;
        let near_pose = self.tree.nodes()[near].pose;
        let new_pose = self.steer(&near_pose, &target);
        let new_decoded = Pose::new(new_pose.real, new_pose.translation());
        let closest = self.tree.nearest(&new_pose).ok()?;
        if self.tree.distance_to(closest, &new_decoded) < COINCIDENT_DISTANCE {
            return None;
        }
        if !point_clear(new_decoded.translation, &self.scenario.obstacles)
            || !self.edge_clear(&near_pose, &new_pose)
        {
            return None;
        }

        if !self.cfg.rewire {
            return Some(self.tree.add(new_pose, near));
        }

        let radius = self.neighbor_radius();
        let neighbors = self.tree.near_set(&new_pose, radius);
        let mut candidates: Vec<(f64, usize)> = neighbors
            .iter()
            .chain(core::iter::once(&near))
            .map(|&j| (self.tree.cost(j) + self.tree.distance_to(j, &new_decoded), j))
            .collect();
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        candidates.dedup_by_key(|c| c.1);
        let parent = candidates
            .iter()
            .find(|&&(_, j)| j == near || self.edge_clear(&self.tree.nodes()[j].pose, &new_pose))
            .map_or(near, |&(_, j)| j);

        let id = self.tree.add(new_pose, parent);
        let cfg = self.cfg;
        let obstacles = &self.scenario.obstacles;
        self.tree.rewire(id, &neighbors, |a, b| {
            edge_clear_for(cfg.mode, a, b, obstacles, &cfg.steer, &cfg.weights)
        });
        Some(id)
    }
}

fn frozen_rotation(pose: &Pose) -> Pose {
    Pose::new(Quaternion::IDENTITY, pose.translation)
}

/// Runs RRT* on `scenario`.
///
/// In [`RotationMode::TranslationOnly`] the start and goal rotations are
/// replaced by the identity, so the tree lives entirely in translation space.
pub fn plan(scenario: &Scenario, cfg: &PlannerConfig) -> Result<PlannedPath, PlanError> {
    cfg.validate()?;
    scenario
        .validate()
        .map_err(|e| PlanError::InvalidScenario(alloc::format!("{e}")))?;

    let (start_pose, goal_pose) = match cfg.rotation_mode {
        RotationMode::Full => (scenario.start, scenario.goal),
        RotationMode::TranslationOnly => (frozen_rotation(&scenario.start), frozen_rotation(&scenario.goal)),
    };
    let start = DualQuaternion::from_pose(&start_pose)
        .map_err(|e| PlanError::InvalidScenario(alloc::format!("start: {e}")))?;
    let goal = DualQuaternion::from_pose(&goal_pose)
        .map_err(|e| PlanError::InvalidScenario(alloc::format!("goal: {e}")))?;

    let mut engine = Engine {
        scenario,
        cfg,
        tree: Tree::new(start, cfg.weights),
        goal,
        goal_pose,
    };
    let mut rng = RngStream::new(cfg.seed);
    let mut goals = GoalTracker::default();

    engine.consider(Some(0), 0, &mut goals);
    let mut iterations_used = 0;
    for iteration in 1..=cfg.max_iterations {
        if cfg.first_solution && goals.best.is_some() {
            break;
        }
        iterations_used = iteration;
        let added = engine.extend(&mut rng);
        engine.consider(added, iteration, &mut goals);
        if cfg.debug_checks {
            if let Err(msg) = engine.tree.check_consistency(1e-9) {
                panic!("tree inconsistent after iteration {iteration}: {msg}");
            }
        }
    }

    let Some((_, k)) = goals.best else {
        return Err(PlanError::NoPathFound {
            iterations: iterations_used,
            nodes: engine.tree.len(),
        });
    };
    let winner = &goals.candidates[k];
    let branch = engine.tree.extract_path(winner.node)?;
    let mut poses = branch.poses;
    let mut cost = branch.cost;
    if winner.append_goal {
        poses.push(goal);
        cost += winner.tail;
    }
    let reaches_exact_goal = winner.append_goal || winner.coincident;

    let tree_snapshot = cfg.record_tree.then(|| {
        engine
            .tree
            .nodes()
            .iter()
            .map(|n| (n.pose, n.parent))
            .collect()
    });

    Ok(PlannedPath {
        poses,
        cost,
        mode: cfg.mode,
        weights: cfg.weights,
        steer: cfg.steer,
        iterations_used,
        nodes_in_tree: engine.tree.len(),
        best_cost_trace: goals.trace,
        tree_snapshot,
        reaches_exact_goal,
    })
}
