//! `.scenario.json` reading and writing.

use std::fs;
use std::path::Path;

use dqrrt_core::scenario::{demo_scenario, generate_scenario, translation_demo_params};
use dqrrt_core::{
    DualQuaternion, KeepOutZone, ObstacleSet, Pose, Quaternion, Scenario, ScenarioError, Vec3,
    WorkspaceBounds,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("schema_version {found} is not supported (expected {expected})")]
    SchemaVersionMismatch { found: u64, expected: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FormatError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            return Self::Io(e.into());
        }
        // serde_json appends " at line L column C"; keep only the message.
        let text = e.to_string();
        let message = match text.rfind(" at line ") {
            Some(i) => text[..i].to_string(),
            None => text,
        };
        Self::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseRecord {
    /// `(w, x, y, z)`.
    pub rotation: [f64; 4],
    pub translation: [f64; 3],
}

impl From<&Pose> for PoseRecord {
    fn from(p: &Pose) -> Self {
        Self {
            rotation: p.rotation.to_array(),
            translation: p.translation.to_array(),
        }
    }
}

impl From<&PoseRecord> for Pose {
    fn from(p: &PoseRecord) -> Self {
        Pose::new(Quaternion::from_array(p.rotation), Vec3::from_array(p.translation))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoneRecord {
    pub center: [f64; 3],
    pub radius: f64,
}

impl From<&KeepOutZone> for ZoneRecord {
    fn from(z: &KeepOutZone) -> Self {
        Self {
            center: z.center.to_array(),
            radius: z.radius,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsRecord {
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema_version: u64,
    name: String,
    bounds: BoundsRecord,
    start: PoseRecord,
    goal: PoseRecord,
    obstacles: Vec<ZoneRecord>,
    obstacle_seed: Option<u64>,
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: Option<u64>,
}

/// Rejects documents whose `schema_version` is absent or unsupported.
pub(crate) fn check_version(text: &str) -> Result<(), FormatError> {
    let probe: VersionProbe = serde_json::from_str(text)?;
    match probe.schema_version {
        None => Err(FormatError::field("schema_version", "missing")),
        Some(SCHEMA_VERSION) => Ok(()),
        Some(found) => Err(FormatError::SchemaVersionMismatch {
            found,
            expected: SCHEMA_VERSION,
        }),
    }
}

pub fn scenario_to_string(s: &Scenario) -> String {
    let file = ScenarioFile {
        schema_version: SCHEMA_VERSION,
        name: s.name.clone(),
        bounds: BoundsRecord {
            min: s.bounds.min_corner.to_array(),
            max: s.bounds.max_corner.to_array(),
        },
        start: (&s.start).into(),
        goal: (&s.goal).into(),
        obstacles: s.obstacles.zones.iter().map(ZoneRecord::from).collect(),
        obstacle_seed: s.obstacle_seed,
    };
    crate::json::to_string(&file)
}

/// Maps a semantic scenario failure onto the offending field.
fn field_error(e: ScenarioError) -> FormatError {
    match e {
        ScenarioError::InvalidBounds(m) => FormatError::field("bounds", m),
        ScenarioError::InvalidZone { zone, radius } => FormatError::field(
            format!("obstacles[{zone}].radius"),
            format!("must be positive and finite, got {radius}"),
        ),
        ScenarioError::EndpointOutOfBounds(which) => {
            FormatError::field(format!("{which}.translation"), "outside bounds")
        }
        ScenarioError::EndpointBlocked { which, zone } => FormatError::field(
            format!("{which}.translation"),
            format!("inside keep-out zone obstacles[{zone}]"),
        ),
        other => FormatError::field("scenario", other.to_string()),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, FormatError> {
    check_version(text)?;
    let file: ScenarioFile = serde_json::from_str(text)?;
    let scenario = Scenario {
        name: file.name,
        bounds: WorkspaceBounds {
            min_corner: Vec3::from_array(file.bounds.min),
            max_corner: Vec3::from_array(file.bounds.max),
        },
        start: (&file.start).into(),
        goal: (&file.goal).into(),
        obstacles: ObstacleSet::new(
            file.obstacles
                .iter()
                .map(|z| KeepOutZone::new(Vec3::from_array(z.center), z.radius))
                .collect(),
        ),
        obstacle_seed: file.obstacle_seed,
    };
    for (which, pose) in [("start", &scenario.start), ("goal", &scenario.goal)] {
        if let Err(e) = DualQuaternion::from_pose(pose) {
            return Err(FormatError::field(format!("{which}.rotation"), e.to_string()));
        }
    }
    scenario.validate().map_err(field_error)?;
    Ok(scenario)
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<(), FormatError> {
    fs::write(path, scenario_to_string(s))?;
    Ok(())
}

pub fn load_scenario(path: &Path) -> Result<Scenario, FormatError> {
    parse_scenario(&fs::read_to_string(path)?)
}

/// SHA-256 (hex) of the canonical serialization; independent of the
/// whitespace or float spelling of the file the scenario was read from.
pub fn scenario_hash(s: &Scenario) -> String {
    hex::encode(Sha256::digest(scenario_to_string(s).as_bytes()))
}

/// Names accepted in place of a scenario file.
pub const BUILTIN_SCENARIOS: [&str; 2] = ["demo", "translation-demo"];

pub fn builtin_scenario(name: &str) -> Option<Scenario> {
    match name {
        "demo" => Some(demo_scenario()),
        "translation-demo" => {
            Some(generate_scenario(&translation_demo_params()).expect("built-in parameters are valid"))
        }
        _ => None,
    }
}

/// A built-in name, or else a path to a scenario file.
pub fn resolve_scenario(name_or_path: &str) -> Result<Scenario, FormatError> {
    match builtin_scenario(name_or_path) {
        Some(s) => Ok(s),
        None => load_scenario(Path::new(name_or_path)),
    }
}
