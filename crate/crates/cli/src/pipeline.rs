//! Chained reductions NCL → LLP reconfiguration → MLP reconfiguration →
//! CMAPF, with an exact oracle run at every stage and a cross-check of
//! their verdicts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use planar_reductions::cmapf;
use planar_reductions::ncl::{self, ConstraintGraph, NclConfiguration};
use planar_reductions::reconfig::{self, ReconfigError};
use planar_reductions::sat_core::{Assignment, Cnf, CycleOrder, Var};
use planar_reductions::sat_reduce::{friend_assignment, lift_flip_sequence, llp_to_mlp, LlpInstance, MlpInstance};
use serde::{Deserialize, Serialize};

use super::{
    load_configuration, load_constraint_graph, load_llp, load_mlp, reconfig_instance_json, write, CliError, Result,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Ncl,
    LlpReconfig,
    MlpReconfig,
    Cmapf,
}

impl Stage {
    fn next(self) -> Option<Stage> {
        match self {
            Stage::Ncl => Some(Stage::LlpReconfig),
            Stage::LlpReconfig => Some(Stage::MlpReconfig),
            Stage::MlpReconfig => Some(Stage::Cmapf),
            Stage::Cmapf => None,
        }
    }
}

/// Where the first stage's instance comes from. Paths are relative to the
/// directory passed to [`run_pipeline`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PipelineInput {
    Ncl { graph: PathBuf, from: PathBuf, to: PathBuf },
    LlpReconfig { formula: PathBuf, from: String, to: String },
    MlpReconfig { formula: PathBuf, from: String, to: String },
}

impl PipelineInput {
    fn stage(&self) -> Stage {
        match self {
            PipelineInput::Ncl { .. } => Stage::Ncl,
            PipelineInput::LlpReconfig { .. } => Stage::LlpReconfig,
            PipelineInput::MlpReconfig { .. } => Stage::MlpReconfig,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub stages: Vec<Stage>,
    pub input: PipelineInput,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Cap on the joint state count of the CMAPF search, used only when no
    /// witness can be built from an earlier stage.
    #[serde(default = "default_cap")]
    pub cmapf_cap: u128,
}

fn default_cap() -> u128 {
    cmapf::JOINT_STATE_CAP
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: Stage,
    pub size: BTreeMap<String, usize>,
    /// Reachability of the target as decided by this stage's oracle; `None`
    /// when the instance is beyond the oracle's cap.
    pub verdict: Option<bool>,
    pub witness_length: Option<usize>,
    pub artifacts: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Report {
    pub stages: Vec<StageReport>,
}

enum Instance {
    Ncl { g: ConstraintGraph, from: NclConfiguration, to: NclConfiguration },
    Llp { inst: LlpInstance, from: Assignment, to: Assignment },
    Mlp { inst: MlpInstance, from: Assignment, to: Assignment },
}

fn capped<T>(r: std::result::Result<T, ReconfigError>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(ReconfigError::TooLarge(..)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn load_input(input: &PipelineInput, base: &Path) -> Result<Instance> {
    Ok(match input {
        PipelineInput::Ncl { graph, from, to } => Instance::Ncl {
            g: load_constraint_graph(&base.join(graph))?,
            from: load_configuration(&base.join(from))?,
            to: load_configuration(&base.join(to))?,
        },
        PipelineInput::LlpReconfig { formula, from, to } => {
            let inst = load_llp(&base.join(formula))?;
            let (from, to) = (reconfig::parse_assignment(&inst.cnf, from)?, reconfig::parse_assignment(&inst.cnf, to)?);
            Instance::Llp { inst, from, to }
        }
        PipelineInput::MlpReconfig { formula, from, to } => {
            let inst = load_mlp(&base.join(formula))?;
            let (from, to) = (reconfig::parse_assignment(&inst.cnf, from)?, reconfig::parse_assignment(&inst.cnf, to)?);
            Instance::Mlp { inst, from, to }
        }
    })
}

fn check_stages(spec: &PipelineSpec) -> Result<()> {
    let Some(&first) = spec.stages.first() else { return Ok(()) };
    if first != spec.input.stage() {
        return Err(CliError::StageMismatch(format!(
            "input is {:?} but the first stage is {first:?}",
            spec.input.stage()
        )));
    }
    for w in spec.stages.windows(2) {
        if w[0].next() != Some(w[1]) {
            return Err(CliError::StageMismatch(format!("{:?} cannot feed {:?}", w[0], w[1])));
        }
    }
    Ok(())
}

/// Flip sequence carried into a stage, in that stage's variables, and the
/// length it must have when it is the lift of a shorter one.
struct Carried {
    flips: Vec<Var>,
    expected_len: usize,
}

fn stage_error(e: impl std::fmt::Display) -> CliError {
    CliError::OracleDisagreement(e.to_string())
}

/// Runs the stages in order, writing artifacts to `output_dir` when set,
/// and fails with `OracleDisagreement` when two stages disagree or a
/// translated witness does not check out.
pub fn run_pipeline(spec: &PipelineSpec, base: &Path) -> Result<Report> {
    check_stages(spec)?;
    let mut report = Report::default();
    if spec.stages.is_empty() {
        return Ok(report);
    }
    let out = spec.output_dir.as_ref().map(|d| base.join(d));
    let mut current = load_input(&spec.input, base)?;
    let mut carried: Option<Carried> = None;
    for (k, &stage) in spec.stages.iter().enumerate() {
        let mut size = BTreeMap::new();
        let mut artifacts = Vec::new();
        let mut emit = |name: &str, text: &str| -> Result<()> {
            if let Some(dir) = &out {
                let path = dir.join(format!("{k}-{name}"));
                write(&path, text)?;
                artifacts.push(path);
            }
            Ok(())
        };
        let (verdict, witness_length, next_carry, next) = match current {
            Instance::Ncl { g, from, to } => {
                size.insert("edges".into(), g.edges().count());
                size.insert("vertices".into(), g.graph().vertices.len());
                emit("graph.json", &ncl::constraint_graph_to_json(&g))?;
                let seq = ncl::c2c_bfs(&g, &from, &to)?;
                let red = ncl::ncl_to_llp_reconfig(&g, &from, &to)?;
                // Variable k stands for the k-th edge, so edge flips are variable flips.
                let flips: Option<Vec<Var>> = seq.as_ref().map(|s| {
                    s.iter()
                        .map(|e| red.edge_of_var.iter().position(|x| x == e).expect("edge has a variable"))
                        .collect()
                });
                let carry = flips.map(|f| Carried { expected_len: f.len(), flips: f });
                let next = Instance::Llp { inst: red.llp, from: red.start, to: red.target };
                (Some(seq.is_some()), seq.map(|s| s.len()), carry, next)
            }
            Instance::Llp { inst, from, to } => {
                size.insert("variables".into(), inst.cnf.num_vars());
                size.insert("clauses".into(), inst.cnf.clauses().len());
                emit(
                    "llp.json",
                    &reconfig_instance_json(&inst.cnf, &CycleOrder::Literals(inst.cycle.clone()), &from, &to),
                )?;
                let (verdict, witness) = judge(&inst.cnf, &from, &to, carried.take())?;
                let (mlp, _) = llp_to_mlp(&inst)?;
                let carry = match &witness {
                    Some(w) => {
                        let lifted = lift_flip_sequence(&inst.cnf, &from, w).map_err(stage_error)?;
                        Some(Carried { flips: lifted, expected_len: 2 * w.len() })
                    }
                    None => None,
                };
                let next = Instance::Mlp { inst: mlp, from: friend_assignment(&from), to: friend_assignment(&to) };
                (verdict, witness.map(|w| w.len()), carry, next)
            }
            Instance::Mlp { inst, from, to } if stage == Stage::MlpReconfig => {
                size.insert("variables".into(), inst.cnf.num_vars());
                size.insert("clauses".into(), inst.cnf.clauses().len());
                emit(
                    "mlp.json",
                    &reconfig_instance_json(&inst.cnf, &CycleOrder::Variables(inst.cycle.clone()), &from, &to),
                )?;
                let (verdict, witness) = judge(&inst.cnf, &from, &to, carried.take())?;
                let len = witness.as_ref().map(Vec::len);
                let carry = witness.map(|w| Carried { expected_len: w.len(), flips: w });
                (verdict, len, carry, Instance::Mlp { inst, from, to })
            }
            Instance::Mlp { inst, from, to } => {
                let u = cmapf::compile_unbounded(&inst, &from, &to)?;
                size.insert("cells".into(), u.env.cells().len());
                size.insert("agents".into(), u.start.len());
                size.insert("mobile_agents".into(), u.layout.mobile().count());
                let (grid, sidecar) = cmapf::instance_to_map(&u.map());
                emit("cmapf.map", &grid)?;
                emit("cmapf.json", &sidecar)?;
                let (verdict, steps) = match carried.take() {
                    Some(c) => {
                        let exec = cmapf::witness_from_flips(&u, &c.flips).map_err(stage_error)?;
                        if !cmapf::validate_execution(&u.env, &exec) || exec.last() != Some(&u.target) {
                            return Err(CliError::OracleDisagreement("CMAPF witness does not validate".into()));
                        }
                        emit("execution.json", &serde_json::to_string(&exec).expect("plain data"))?;
                        (Some(true), Some(exec.len() - 1))
                    }
                    None => match cmapf::cmapf_bfs(&u.env, &u.start, &u.target, None, spec.cmapf_cap) {
                        Ok(e) => (Some(e.is_some()), e.map(|e| e.len() - 1)),
                        Err(cmapf::CmapfError::TooLarge { .. }) => (None, None),
                        Err(e) => return Err(e.into()),
                    },
                };
                (verdict, steps, None, Instance::Mlp { inst, from, to })
            }
        };
        report.stages.push(StageReport { stage, size, verdict, witness_length, artifacts });
        carried = next_carry;
        current = next;
    }
    let verdicts: Vec<(Stage, bool)> = report.stages.iter().filter_map(|s| s.verdict.map(|v| (s.stage, v))).collect();
    if let Some(&(first, v)) = verdicts.first() {
        if let Some(&(other, w)) = verdicts.iter().find(|&&(_, w)| w != v) {
            return Err(CliError::OracleDisagreement(format!("{first:?} says {v} but {other:?} says {w}")));
        }
    }
    if let Some(dir) = &out {
        write(&dir.join("report.json"), &serde_json::to_string_pretty(&report).expect("plain data"))?;
    }
    Ok(report)
}

/// Exact reachability within the search cap, checked against a carried
/// witness. Beyond the cap the carried witness alone decides.
fn judge(f: &Cnf, from: &[bool], to: &[bool], carried: Option<Carried>) -> Result<(Option<bool>, Option<Vec<Var>>)> {
    if let Some(c) = &carried {
        let ok = c.flips.len() == c.expected_len
            && reconfig::validate_flip_sequence(f, from, &c.flips)
            && reconfig::apply_flips(from, &c.flips) == to;
        if !ok {
            return Err(CliError::OracleDisagreement("translated flip sequence does not check out".into()));
        }
    }
    let own = capped(reconfig::reconfig_bfs(f, from, to))?;
    let verdict = match &own {
        Some(seq) => Some(seq.is_some()),
        None => carried.as_ref().map(|_| true),
    };
    Ok((verdict, carried.map(|c| c.flips).or(own.flatten())))
}
