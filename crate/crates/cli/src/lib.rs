//! Command implementations behind `planred`, and the reduction pipeline.
//!
//! Every command returns its output as a string so the binary only prints
//! and maps errors to exit codes.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use planar_reductions::cmapf::{self, CmapfError, MapInstance};
use planar_reductions::cycle_augment::{
    build_kite_from_matching, compute_vprime_cycle, find_dually_connected_matching, verify_separation, AugmentInstance,
    CycleAugmentError, MATCHING_SEARCH_CAP,
};
use planar_reductions::embedding::io::graph_from_json;
use planar_reductions::embedding::{EdgeId, VertexId};
use planar_reductions::ncl::{self, ConstraintGraph, NclConfiguration, NclError};
use planar_reductions::reconfig::{self, ReconfigError};
use planar_reductions::sat_core::io::SatInstance;
use planar_reductions::sat_core::{self, Cnf, CycleOrder, SatError};
use planar_reductions::sat_reduce::{
    friend_assignment, lift_flip_sequence, llp_to_mlp, mp3sat_to_llp, ChainCounts, LlpInstance, MlpInstance,
    MonotonePlanarInstance, ReduceError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

mod pipeline;

pub use pipeline::{run_pipeline, PipelineInput, PipelineSpec, Report, Stage, StageReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("stage mismatch: {0}")]
    StageMismatch(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::OracleDisagreement(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<SatError> for CliError {
    fn from(e: SatError) -> Self {
        match e {
            SatError::Parse { .. } => CliError::Parse(e.to_string()),
            SatError::TooManyVariables(..) => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ReconfigError> for CliError {
    fn from(e: ReconfigError) -> Self {
        match e {
            ReconfigError::TooLarge(..) => CliError::Cap(e.to_string()),
            ReconfigError::BadAssignment(_) | ReconfigError::UnknownVariable(_) | ReconfigError::WrongLength { .. } => {
                CliError::Parse(e.to_string())
            }
            ReconfigError::EndpointUnsat(_) => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<NclError> for CliError {
    fn from(e: NclError) -> Self {
        match e {
            NclError::Json(_) => CliError::Parse(e.to_string()),
            NclError::TooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CmapfError> for CliError {
    fn from(e: CmapfError) -> Self {
        match e {
            CmapfError::Parse(_) => CliError::Parse(e.to_string()),
            CmapfError::TooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CycleAugmentError> for CliError {
    fn from(e: CycleAugmentError) -> Self {
        match e {
            CycleAugmentError::InstanceTooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ReduceError> for CliError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Sat(s) => s.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
    Svg,
    Ascii,
}

fn unsupported(f: Format, what: &str) -> CliError {
    CliError::Invalid(format!("format {f:?} is not available for {what}"))
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("values serialise")
}

pub fn load_formula(path: &Path) -> Result<SatInstance> {
    Ok(sat_core::io::parse_instance(&read(path)?)?)
}

fn variable_cycle(inst: &SatInstance) -> Result<Vec<usize>> {
    match &inst.cycle {
        Some(CycleOrder::Variables(v)) => Ok(v.clone()),
        _ => Err(CliError::Invalid("the formula needs a variable cycle".into())),
    }
}

fn literal_cycle(inst: &SatInstance) -> Result<Vec<sat_core::Literal>> {
    match &inst.cycle {
        Some(CycleOrder::Literals(l)) => Ok(l.clone()),
        _ => Err(CliError::Invalid("the formula needs a literal cycle".into())),
    }
}

pub fn load_llp(path: &Path) -> Result<LlpInstance> {
    let inst = load_formula(path)?;
    let cycle = literal_cycle(&inst)?;
    Ok(LlpInstance::new(inst.cnf, cycle)?)
}

pub fn load_mlp(path: &Path) -> Result<MlpInstance> {
    let inst = load_formula(path)?;
    let cycle = variable_cycle(&inst)?;
    Ok(MlpInstance::new(inst.cnf, cycle)?)
}

fn emit_formula(cnf: &Cnf, cycle: Option<&CycleOrder>, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(sat_core::io::to_json(cnf, cycle)),
        Format::Ascii => Ok(sat_core::io::write_dimacs(cnf, cycle)),
        Format::Dot => {
            let kind = match cycle {
                Some(CycleOrder::Literals(_)) => sat_core::GraphKind::LiteralClause,
                _ => sat_core::GraphKind::VariableClause,
            };
            let g = sat_core::build_incidence(cnf, kind);
            let g = match cycle {
                Some(c) => sat_core::augment(&g, c)?,
                None => g,
            };
            Ok(sat_core::io::incidence_to_dot(&g, cnf))
        }
        Format::Svg => Err(unsupported(format, "formulas")),
    }
}

/// Structural predicates of a formula and its cycle.
pub fn sat_check(path: &Path) -> Result<String> {
    let inst = load_formula(path)?;
    let f = &inst.cnf;
    let cycle_valid = match &inst.cycle {
        Some(CycleOrder::Variables(v)) => Some(sat_core::variable_cycle_separates_by_crossings(f, v)),
        Some(CycleOrder::Literals(l)) => Some(sat_core::literal_cycle_is_valid_by_crossings(f, l)),
        None => None,
    };
    Ok(pretty(json!({
        "variables": f.num_vars(),
        "clauses": f.clauses().len(),
        "linear": sat_core::is_linear(f),
        "monotone": sat_core::is_monotone(f),
        "negatively_at_most_once": planar_reductions::sat_reduce::negatively_at_most_once(f),
        "cycle_valid": cycle_valid,
    })))
}

pub fn sat_solve(path: &Path) -> Result<String> {
    let inst = load_formula(path)?;
    let model = sat_core::brute_force_sat(&inst.cnf)?;
    Ok(pretty(json!({
        "satisfiable": model.is_some(),
        "model": model.map(|nu| reconfig::format_assignment(&inst.cnf, &nu)),
    })))
}

/// A random monotone planar formula with its variable cycle.
pub fn sat_random(vars: usize, clauses: usize, seed: u64, format: Format) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cnf, cycle) = sat_core::random::random_monotone_planar(&mut rng, vars, clauses);
    emit_formula(&cnf, Some(&CycleOrder::Variables(cycle)), format)
}

pub fn reduce_mp3sat_to_llp(path: &Path, global_chains: bool, format: Format) -> Result<String> {
    let inst = load_formula(path)?;
    let cycle = variable_cycle(&inst)?;
    let src = MonotonePlanarInstance::new(inst.cnf, cycle)?;
    let counts = if global_chains { ChainCounts::Global } else { ChainCounts::PerVariable };
    let (llp, _) = mp3sat_to_llp(&src, counts)?;
    emit_formula(&llp.cnf, Some(&CycleOrder::Literals(llp.cycle)), format)
}

pub fn reduce_llp_to_mlp(path: &Path, format: Format) -> Result<String> {
    let (mlp, _) = llp_to_mlp(&load_llp(path)?)?;
    emit_formula(&mlp.cnf, Some(&CycleOrder::Variables(mlp.cycle)), format)
}

/// Lifts a flip sequence of an LLP instance to its MLP image.
pub fn reduce_lift_flips(path: &Path, from: &str, flips: &str) -> Result<String> {
    let llp = load_llp(path)?;
    let f = &llp.cnf;
    let nu = reconfig::parse_assignment(f, from)?;
    let seq = reconfig::parse_flip_sequence(f, flips)?;
    let (mlp, _) = llp_to_mlp(&llp)?;
    let lifted = lift_flip_sequence(f, &nu, &seq)?;
    Ok(pretty(json!({
        "start": reconfig::format_assignment(&mlp.cnf, &friend_assignment(&nu)),
        "flips": reconfig::format_flip_sequence(&mlp.cnf, &lifted),
        "length": lifted.len(),
    })))
}

/// Cycle through `vprime` for the graph in `path`; the matching is searched
/// for when not given.
pub fn cycle_augment_solve(
    path: &Path,
    vprime: &[VertexId],
    matching: Option<&[EdgeId]>,
    format: Format,
) -> Result<String> {
    let g = graph_from_json(&read(path)?).map_err(|e| CliError::Parse(e.to_string()))?;
    let inst = AugmentInstance::new(&g, vprime.iter().copied().collect())?;
    let eprime: BTreeSet<EdgeId> = match matching {
        Some(m) => m.iter().copied().collect(),
        None => find_dually_connected_matching(&inst, MATCHING_SEARCH_CAP)?
            .ok_or_else(|| CliError::Invalid("no dually connected matching exists".into()))?,
    };
    let kite = build_kite_from_matching(&inst, &eprime)?;
    let (cycle, partition) = compute_vprime_cycle(&inst, &kite)?;
    let separated = verify_separation(&g, &cycle, &partition)?;
    match format {
        Format::Json => Ok(pretty(json!({
            "order": cycle.order,
            "edges": cycle.edges,
            "inside": partition.red,
            "outside": partition.blue,
            "separated": separated,
        }))),
        Format::Dot => Ok(planar_reductions::embedding::io::graph_to_dot(cycle.embedding.graph())),
        _ => Err(unsupported(format, "cycle augmentation")),
    }
}

pub fn load_constraint_graph(path: &Path) -> Result<ConstraintGraph> {
    Ok(ncl::constraint_graph_from_json(&read(path)?)?)
}

pub fn load_configuration(path: &Path) -> Result<NclConfiguration> {
    Ok(ncl::configuration_from_json(&read(path)?)?)
}

pub fn ncl_solve(graph: &Path, from: &Path, to: &Path) -> Result<String> {
    let g = load_constraint_graph(graph)?;
    let seq = ncl::c2c_bfs(&g, &load_configuration(from)?, &load_configuration(to)?)?;
    Ok(pretty(json!({ "reachable": seq.is_some(), "flips": seq })))
}

/// The reconfiguration instance produced from a constraint graph.
#[derive(Debug, Serialize, Deserialize)]
struct ReconfigInstanceJson {
    formula: serde_json::Value,
    start: String,
    target: String,
}

fn reconfig_instance_json(cnf: &Cnf, cycle: &CycleOrder, from: &[bool], to: &[bool]) -> String {
    let formula: serde_json::Value =
        serde_json::from_str(&sat_core::io::to_json(cnf, Some(cycle))).expect("own output");
    let bits = |nu: &[bool]| nu.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
    pretty(serde_json::to_value(ReconfigInstanceJson { formula, start: bits(from), target: bits(to) }).expect("plain"))
}

pub fn ncl_reduce(graph: &Path, from: &Path, to: &Path, format: Format) -> Result<String> {
    let g = load_constraint_graph(graph)?;
    let red = ncl::ncl_to_llp_reconfig(&g, &load_configuration(from)?, &load_configuration(to)?)?;
    let cycle = CycleOrder::Literals(red.llp.cycle.clone());
    match format {
        Format::Json => Ok(reconfig_instance_json(&red.llp.cnf, &cycle, &red.start, &red.target)),
        Format::Dot => Ok(g.to_dot(None)),
        _ => Err(unsupported(format, "constraint graphs")),
    }
}

pub fn ncl_random(handles: usize, cycles: usize, seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(ncl::constraint_graph_to_json(&ncl::random::random_constraint_graph(&mut rng, handles, cycles)))
}

pub fn reconfig_solve(path: &Path, from: &str, to: &str) -> Result<String> {
    let inst = load_formula(path)?;
    let f = &inst.cnf;
    let (a, b) = (reconfig::parse_assignment(f, from)?, reconfig::parse_assignment(f, to)?);
    let seq = reconfig::reconfig_bfs(f, &a, &b)?;
    Ok(pretty(json!({
        "reachable": seq.is_some(),
        "flips": seq.as_ref().map(|s| reconfig::format_flip_sequence(f, s)),
        "length": seq.map(|s| s.len()),
    })))
}

fn emit_map(map: &MapInstance, out: Option<&Path>, format: Format) -> Result<String> {
    let (grid, sidecar) = cmapf::instance_to_map(map);
    if let Some(stem) = out {
        write(&stem.with_extension("map"), &grid)?;
        write(&stem.with_extension("json"), &sidecar)?;
    }
    Ok(match format {
        Format::Ascii => grid,
        Format::Json => sidecar,
        Format::Svg => cmapf::instance_to_svg(map, &map.start()),
        Format::Dot => return Err(unsupported(format, "maps")),
    })
}

/// Compiles an MLP formula to a two-step instance; writes `<out>.map` and
/// `<out>.json` when `out` is given.
pub fn cmapf_compile_bounded(path: &Path, out: Option<&Path>, format: Format) -> Result<String> {
    let b = cmapf::compile_bounded(&load_mlp(path)?)?;
    emit_map(&b.map(), out, format)
}

pub fn cmapf_compile_unbounded(
    path: &Path,
    from: &str,
    to: &str,
    out: Option<&Path>,
    format: Format,
) -> Result<String> {
    let mlp = load_mlp(path)?;
    let (a, b) = (reconfig::parse_assignment(&mlp.cnf, from)?, reconfig::parse_assignment(&mlp.cnf, to)?);
    let u = cmapf::compile_unbounded(&mlp, &a, &b)?;
    emit_map(&u.map(), out, format)
}

fn load_map(grid: &Path) -> Result<MapInstance> {
    Ok(cmapf::instance_from_map(&read(grid)?, &read(&grid.with_extension("json"))?)?)
}

/// Shortest execution for the map at `grid` (sidecar next to it with a
/// `.json` extension).
pub fn cmapf_solve(grid: &Path, bound: Option<usize>, cap: u128) -> Result<String> {
    let map = load_map(grid)?;
    let exec = cmapf::cmapf_bfs(&map.env, &map.start(), &map.target(), bound, cap)?;
    Ok(pretty(json!({ "solvable": exec.is_some(), "steps": exec.as_ref().map(|e| e.len() - 1), "execution": exec })))
}

pub fn cmapf_validate(grid: &Path, execution: &Path) -> Result<String> {
    let map = load_map(grid)?;
    let exec: cmapf::Execution =
        serde_json::from_str(&read(execution)?).map_err(|e| CliError::Parse(format!("execution: {e}")))?;
    let valid = cmapf::validate_execution(&map.env, &exec);
    let reaches = exec.first() == Some(&map.start()) && exec.last() == Some(&map.target());
    Ok(pretty(json!({ "valid": valid, "start_to_target": reaches, "steps": exec.len().saturating_sub(1) })))
}

/// Runs the pipeline described by the JSON spec at `path`, resolving its
/// relative paths against the directory holding the pipeline file.
pub fn pipeline_run(path: &Path) -> Result<String> {
    let spec: PipelineSpec =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let report = run_pipeline(&spec, base)?;
    Ok(serde_json::to_string_pretty(&report).expect("plain data"))
}
