use alloc::string::String;

/// Failures of the quaternion / dual quaternion algebra.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("quaternion norm {norm:e} is too close to zero to normalize")]
    NearZeroNorm { norm: f64 },
    #[error("rotation quaternion norm {norm} deviates from 1")]
    NonUnitRotation { norm: f64 },
    #[error("dual quaternion violates unit constraints (|real| = {real_norm}, real.dual = {dot:e})")]
    NonUnitDualQuaternion { real_norm: f64, dot: f64 },
}

/// Failures of tree queries and path extraction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("tree has no nodes")]
    EmptyTree,
    #[error("node index {0} is out of range")]
    UnknownNode(usize),
    #[error("parent chain starting at node {0} does not reach the root")]
    BrokenParentChain(usize),
}

/// Failures of [`crate::planner::plan`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error("no path found after {iterations} iterations ({nodes} nodes in tree)")]
    NoPathFound { iterations: usize, nodes: usize },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Failures of [`crate::collision::validate_path`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("path has {0} poses; at least 2 are required")]
    EmptyPath(usize),
    #[error("refinement factor must be at least 1")]
    InvalidRefinement,
}

/// Failures of scenario construction and random generation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid workspace bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid radius range [{min}, {max}]")]
    InvalidRadiusRange { min: f64, max: f64 },
    #[error("start and goal poses coincide")]
    CoincidentEndpoints,
    #[error("{0} translation lies outside the workspace bounds")]
    EndpointOutOfBounds(&'static str),
    #[error("{which} pose lies inside keep-out zone {zone}")]
    EndpointBlocked { which: &'static str, zone: usize },
    #[error("keep-out zone {zone} has non-positive radius {radius}")]
    InvalidZone { zone: usize, radius: f64 },
    #[error("could not place keep-out zone {zone} after {attempts} attempts")]
    GenerationFailed { zone: usize, attempts: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
