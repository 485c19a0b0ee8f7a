//! `dqrrt` subcommands and their exit codes.
//!
//! Exit codes: 0 success, 2 usage, 3 input (unreadable, malformed, or
//! mismatched files; generation failure), 4 no path found, 5 validation
//! failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use dqrrt_core::scenario::{demo_params, GenerationParams};
use dqrrt_core::{
    generate_scenario, plan, validate_path, MetricWeights, PlanError, PlannedPath, PlannerConfig,
    Pose, Quaternion, Scenario, SteerConfig, Vec3, WorkspaceBounds,
};
use serde::Serialize;

use crate::path_io::{load_path, ModeName, PathFile, RotationModeName};
use crate::scenario_io::{resolve_scenario, save_scenario, scenario_hash, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NO_PATH: i32 = 4;
pub const EXIT_INVALID_PATH: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "dqrrt", version, about = "Dual quaternion RRT* pose planner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random spherical keep-out scenario.
    GenScenario(GenArgs),
    /// Plan one path and export it.
    Plan(PlanArgs),
    /// Plan with both steering laws on one seed and compare them.
    Compare(CompareArgs),
    /// Re-check an exported path against its scenario at finer resolution.
    Validate(ValidateArgs),
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three comma-separated numbers x,y,z".to_string())
}

fn parse_quat(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected four comma-separated numbers w,x,y,z".to_string())
}

/// Defaults reproduce the built-in demo scenario.
#[derive(Debug, Args)]
struct GenArgs {
    /// Output .scenario.json file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "generated")]
    name: String,
    #[arg(long, default_value_t = dqrrt_core::scenario::DEMO_SEED)]
    seed: u64,
    /// Number of spherical zones.
    #[arg(long, default_value_t = 12)]
    count: usize,
    #[arg(long, value_parser = parse_vec3, default_value = "0,0,0")]
    bounds_min: [f64; 3],
    #[arg(long, value_parser = parse_vec3, default_value = "100,100,100")]
    bounds_max: [f64; 3],
    #[arg(long, default_value_t = 8.0)]
    radius_min: f64,
    #[arg(long, default_value_t = 16.0)]
    radius_max: f64,
    /// Start translation x,y,z (m).
    #[arg(long, value_parser = parse_vec3, default_value = "10,10,10")]
    start: [f64; 3],
    /// Start rotation w,x,y,z.
    #[arg(long, value_parser = parse_quat, default_value = "1,0,0,0")]
    start_rotation: [f64; 4],
    /// Goal translation x,y,z (m).
    #[arg(long, value_parser = parse_vec3, default_value = "90,90,90")]
    goal: [f64; 3],
    /// Goal rotation w,x,y,z [default: quarter turn about z].
    #[arg(long, value_parser = parse_quat)]
    goal_rotation: Option<[f64; 4]>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Args)]
struct PlannerArgs {
    /// Scenario file, or a built-in name: `demo`, `translation-demo`.
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    max_iterations: usize,
    #[arg(long, default_value_t = 5.0)]
    step_max: f64,
    /// Edge sample spacing [default: step-max / 10].
    #[arg(long)]
    collision_step: Option<f64>,
    /// Translation weight (1/m).
    #[arg(long, default_value_t = 1.0)]
    wt: f64,
    /// Rotation weight (1/rad of half-angle).
    #[arg(long, default_value_t = 1.0)]
    wr: f64,
    #[arg(long, default_value_t = 0.05)]
    goal_bias: f64,
    /// Goal translation tolerance (m).
    #[arg(long, default_value_t = 0.5)]
    goal_tol_t: f64,
    /// Goal rotation tolerance (rad, half-angle as in the metric).
    #[arg(long, default_value_t = 0.05)]
    goal_tol_r: f64,
    /// Neighborhood radius constant [default: 2 x workspace diagonal].
    #[arg(long)]
    rewire_gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = RotationModeName::Full)]
    rotation_mode: RotationModeName,
    /// Disable choose-parent and rewiring (plain RRT on the same samples).
    #[arg(long)]
    no_rewire: bool,
    /// Stop at the first goal-reaching node.
    #[arg(long)]
    first_solution: bool,
}

impl PlannerArgs {
    fn config(&self, scenario: &Scenario, mode: ModeName) -> PlannerConfig {
        let base = PlannerConfig::for_scenario(scenario);
        PlannerConfig {
            max_iterations: self.max_iterations,
            goal_bias: self.goal_bias,
            goal_tol_translation: self.goal_tol_t,
            goal_tol_rotation: self.goal_tol_r,
            rewire_gamma: self.rewire_gamma.unwrap_or(base.rewire_gamma),
            steer: SteerConfig {
                step_max: self.step_max,
                collision_step: self.collision_step.unwrap_or(self.step_max / 10.0),
            },
            weights: MetricWeights::new(self.wt, self.wr),
            seed: self.seed,
            mode: mode.into(),
            rotation_mode: self.rotation_mode.into(),
            rewire: !self.no_rewire,
            first_solution: self.first_solution,
            record_tree: false,
            debug_checks: false,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Include the search tree in the export.
    #[arg(long)]
    tree: bool,
    /// Samples per edge in the exported densified path.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    resolution: u32,
    /// Print a single JSON object on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[command(flatten)]
    planner: PlannerArgs,
    #[arg(long, value_enum, default_value_t = ModeName::Dq)]
    mode: ModeName,
    /// Output .path.json file.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    planner: PlannerArgs,
    /// Output prefix: writes PREFIX.dq.path.json, PREFIX.se3.path.json and
    /// PREFIX.compare.json.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Exported .path.json file.
    #[arg(long)]
    path: PathBuf,
    /// Scenario file or built-in name the path was planned on.
    #[arg(long)]
    scenario: String,
    /// Sample density multiplier relative to planning.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    refine: u32,
    #[arg(long)]
    json: bool,
}

/// Failure carrying its exit code; the message goes to stderr.
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn print_json<T: Serialize>(value: &T) {
    print!("{}", crate::json::to_string(value));
}

#[derive(Debug, Serialize)]
struct GenSummary {
    command: &'static str,
    name: String,
    seed: u64,
    zones: usize,
    scenario_hash: String,
    out: String,
}

fn gen_scenario(args: GenArgs) -> Result<i32, Failure> {
    if !(args.radius_min <= args.radius_max) {
        return Err(fail(
            EXIT_USAGE,
            format!(
                "--radius-min ({}) must not exceed --radius-max ({})",
                args.radius_min, args.radius_max
            ),
        ));
    }
    let params = GenerationParams {
        name: args.name,
        seed: args.seed,
        count: args.count,
        bounds: WorkspaceBounds {
            min_corner: Vec3::from_array(args.bounds_min),
            max_corner: Vec3::from_array(args.bounds_max),
        },
        radius_min: args.radius_min,
        radius_max: args.radius_max,
        start: Pose::new(Quaternion::from_array(args.start_rotation), Vec3::from_array(args.start)),
        goal: Pose::new(
            args.goal_rotation
                .map_or(demo_params().goal.rotation, Quaternion::from_array),
            Vec3::from_array(args.goal),
        ),
    };
    let scenario = generate_scenario(&params).map_err(|e| fail(EXIT_INPUT, format!("generation failed: {e}")))?;
    save_scenario(&scenario, &args.out)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", args.out.display())))?;
    let summary = GenSummary {
        command: "gen-scenario",
        name: scenario.name.clone(),
        seed: args.seed,
        zones: scenario.obstacles.len(),
        scenario_hash: scenario_hash(&scenario),
        out: args.out.display().to_string(),
    };
    if args.json {
        print_json(&summary);
    } else {
        println!(
            "gen-scenario seed={}: {} zones -> {}",
            summary.seed, summary.zones, summary.out
        );
    }
    Ok(EXIT_OK)
}

/// One planner invocation as reported on stdout.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub command: &'static str,
    pub mode: ModeName,
    pub seed: u64,
    pub success: bool,
    pub cost: Option<f64>,
    pub nodes: usize,
    pub iterations: usize,
    pub wall_time_ms: f64,
    /// Smallest sampled distance to a zone surface along the path (m).
    pub min_clearance: Option<f64>,
    pub out: Option<String>,
}

struct Run {
    summary: RunSummary,
    path: Option<PlannedPath>,
    error: Option<PlanError>,
}

fn run_planner(scenario: &Scenario, cfg: &PlannerConfig, command: &'static str) -> Run {
    let started = Instant::now();
    let result = plan(scenario, cfg);
    let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    let mut summary = RunSummary {
        command,
        mode: cfg.mode.into(),
        seed: cfg.seed,
        success: false,
        cost: None,
        nodes: 0,
        iterations: 0,
        wall_time_ms,
        min_clearance: None,
        out: None,
    };
    match result {
        Ok(path) => {
            summary.success = true;
            summary.cost = Some(path.cost);
            summary.nodes = path.nodes_in_tree;
            summary.iterations = path.iterations_used;
            summary.min_clearance = validate_path(&path, &scenario.obstacles, 1)
                .ok()
                .and_then(|r| finite(r.min_clearance));
            Run {
                summary,
                path: Some(path),
                error: None,
            }
        }
        Err(e) => {
            if let PlanError::NoPathFound { iterations, nodes } = e {
                summary.iterations = iterations;
                summary.nodes = nodes;
            }
            Run {
                summary,
                path: None,
                error: Some(e),
            }
        }
    }
}

fn load_scenario_arg(name_or_path: &str) -> Result<Scenario, Failure> {
    resolve_scenario(name_or_path).map_err(|e| fail(EXIT_INPUT, format!("scenario {name_or_path}: {e}")))
}

fn checked_config(args: &PlannerArgs, scenario: &Scenario, mode: ModeName, tree: bool) -> Result<PlannerConfig, Failure> {
    let cfg = PlannerConfig {
        record_tree: tree,
        ..args.config(scenario, mode)
    };
    cfg.validate().map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    Ok(cfg)
}

fn plan_error_code(e: &PlanError) -> i32 {
    match e {
        PlanError::NoPathFound { .. } => EXIT_NO_PATH,
        PlanError::InvalidConfig(_) => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

fn write_export(
    run: &mut Run,
    scenario: &Scenario,
    cfg: &PlannerConfig,
    resolution: u32,
    out: &Path,
) -> Result<(), Failure> {
    if let Some(path) = &run.path {
        crate::path_io::export_path(path, scenario, cfg, resolution as usize, out)
            .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", out.display())))?;
        run.summary.out = Some(out.display().to_string());
    }
    Ok(())
}

fn describe(s: &RunSummary) -> String {
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.6}"));
    format!(
        "{} {} seed={}: {} cost={} nodes={} iterations={} time={:.1} ms min_clearance={} m{}",
        s.command,
        s.mode.as_str(),
        s.seed,
        if s.success { "success" } else { "no path" },
        fmt(s.cost),
        s.nodes,
        s.iterations,
        s.wall_time_ms,
        fmt(s.min_clearance),
        s.out.as_ref().map_or(String::new(), |o| format!(" -> {o}")),
    )
}

fn plan_cmd(args: PlanArgs) -> Result<i32, Failure> {
    let scenario = load_scenario_arg(&args.planner.scenario)?;
    let cfg = checked_config(&args.planner, &scenario, args.mode, args.output.tree)?;
    let mut run = run_planner(&scenario, &cfg, "plan");
    write_export(&mut run, &scenario, &cfg, args.output.resolution, &args.out)?;
    if args.output.json {
        print_json(&run.summary);
    } else {
        println!("{}", describe(&run.summary));
    }
    match &run.error {
        None => Ok(EXIT_OK),
        Some(e) => Err(fail(plan_error_code(e), e.to_string())),
    }
}

#[derive(Debug, Serialize)]
struct CompareEntry {
    #[serde(flatten)]
    summary: RunSummary,
    /// Mean and maximum rotation between consecutive densified samples
    /// (full angle, rad).
    rotation_increment_mean: Option<f64>,
    rotation_increment_max: Option<f64>,
}

/// Contents of `PREFIX.compare.json`.
#[derive(Debug, Serialize)]
struct CompareRecord {
    schema_version: u64,
    command: &'static str,
    scenario_name: String,
    scenario_hash: String,
    seed: u64,
    rotation_mode: RotationModeName,
    resolution: u32,
    runs: Vec<CompareEntry>,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn compare_cmd(args: CompareArgs) -> Result<i32, Failure> {
    let scenario = load_scenario_arg(&args.planner.scenario)?;
    let modes = [ModeName::Dq, ModeName::Se3];
    let configs = modes
        .iter()
        .map(|&m| checked_config(&args.planner, &scenario, m, args.output.tree))
        .collect::<Result<Vec<_>, _>>()?;
    let mut runs: Vec<Run> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|cfg| scope.spawn(|| run_planner(&scenario, cfg, "compare")))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("planner thread panicked"))
            .collect()
    });

    let mut entries = Vec::new();
    for ((run, cfg), mode) in runs.iter_mut().zip(&configs).zip(modes) {
        let out = with_suffix(&args.out, &format!(".{}.path.json", mode.as_str()));
        write_export(run, &scenario, cfg, args.output.resolution, &out)?;
        let stats = run
            .path
            .as_ref()
            .map(|p| p.rotation_stats(args.output.resolution as usize));
        entries.push(CompareEntry {
            summary: run.summary.clone(),
            rotation_increment_mean: stats.map(|s| s.mean),
            rotation_increment_max: stats.map(|s| s.max),
        });
    }
    let record = CompareRecord {
        schema_version: SCHEMA_VERSION,
        command: "compare",
        scenario_name: scenario.name.clone(),
        scenario_hash: scenario_hash(&scenario),
        seed: args.planner.seed,
        rotation_mode: args.planner.rotation_mode,
        resolution: args.output.resolution,
        runs: entries,
    };
    let record_path = with_suffix(&args.out, ".compare.json");
    std::fs::write(&record_path, crate::json::to_string(&record))
        .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", record_path.display())))?;

    if args.output.json {
        print_json(&record);
    } else {
        for e in &record.runs {
            let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.6}"));
            println!(
                "{} rotation_increment mean={} max={} rad",
                describe(&e.summary),
                fmt(e.rotation_increment_mean),
                fmt(e.rotation_increment_max)
            );
        }
        println!("comparison -> {}", record_path.display());
    }
    match runs.iter().find_map(|r| r.error.as_ref()) {
        None => Ok(EXIT_OK),
        Some(e) => Err(fail(plan_error_code(e), e.to_string())),
    }
}

#[derive(Debug, Serialize)]
struct ViolationRecord {
    edge: usize,
    sample: usize,
    path_sample: usize,
    s: f64,
    translation: [f64; 3],
    zone: usize,
}

#[derive(Debug, Serialize)]
struct ValidateSummary {
    command: &'static str,
    passed: bool,
    refine: u32,
    samples_checked: usize,
    min_clearance: Option<f64>,
    first_violation: Option<ViolationRecord>,
}

fn validate_cmd(args: ValidateArgs) -> Result<i32, Failure> {
    let file: PathFile = load_path(&args.path)
        .map_err(|e| fail(EXIT_INPUT, format!("path {}: {e}", args.path.display())))?;
    let scenario = load_scenario_arg(&args.scenario)?;
    let hash = scenario_hash(&scenario);
    if hash != file.scenario_hash {
        return Err(fail(
            EXIT_INPUT,
            format!(
                "scenario hash mismatch: path was planned on {}, scenario {} hashes to {hash}",
                file.scenario_hash, args.scenario
            ),
        ));
    }
    let report = validate_path(&file.to_planned_path(), &scenario.obstacles, args.refine as usize)
        .map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
    let summary = ValidateSummary {
        command: "validate",
        passed: report.passed,
        refine: args.refine,
        samples_checked: report.samples_checked,
        min_clearance: finite(report.min_clearance),
        first_violation: report.first_violation.map(|v| ViolationRecord {
            edge: v.edge,
            sample: v.sample,
            path_sample: v.path_sample,
            s: v.s,
            translation: v.translation.to_array(),
            zone: v.zone,
        }),
    };
    if args.json {
        print_json(&summary);
    } else {
        let clearance = summary
            .min_clearance
            .map_or("inf (no zones)".to_string(), |c| format!("{c:.9} m"));
        println!(
            "validate refine={}: {} ({} samples, min clearance {clearance})",
            summary.refine,
            if summary.passed { "pass" } else { "FAIL" },
            summary.samples_checked
        );
        if let Some(v) = &summary.first_violation {
            println!(
                "first violation: edge {} sample {} (path sample {}, s = {}) at ({}, {}, {}) inside zone {}",
                v.edge, v.sample, v.path_sample, v.s, v.translation[0], v.translation[1], v.translation[2], v.zone
            );
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_INVALID_PATH })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::GenScenario(a) => gen_scenario(a),
        Command::Plan(a) => plan_cmd(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Validate(a) => validate_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
