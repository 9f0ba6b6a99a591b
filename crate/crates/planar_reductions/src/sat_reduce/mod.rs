//! Reductions from monotone planar 3-SAT to linear literal-planar 3-SAT and
//! from there to monotone linear planar 3-SAT, with the assignment and
//! flip-sequence transport between the last two.

mod to_llp;
mod to_mlp;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::embedding::Embedding;
use crate::sat_core::{
    augment, build_incidence, check_valid, is_linear, is_monotone, variable_cycle_separates_by_crossings, Cnf,
    CycleOrder, GraphKind, IncidenceGraph, Literal, SatError, Var,
};

pub use to_llp::{mp3sat_to_llp, ChainCounts, FreshNameMap, VariableGadget};
pub use to_mlp::{
    friend_assignment, lift_flip_sequence, llp_to_mlp, project_assignment, project_flip_sequence, PrimeMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("input is not a monotone planar instance: {0}")]
    NotMonotonePlanar(String),
    #[error("input is not a valid linear literal-planar instance: {0}")]
    NotValidLlp(String),
    #[error("input is not a valid monotone linear planar instance: {0}")]
    NotValidMlp(String),
    #[error("flip {0} of the input sequence leaves the formula unsatisfied")]
    IntermediateUnsat(usize),
    #[error("assignment has {got} values, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Sat(#[from] SatError),
}

/// A monotone formula with a variable cycle that separates positive from
/// negative clauses. Separation is checked combinatorially on the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonePlanarInstance {
    pub cnf: Cnf,
    pub cycle: Vec<Var>,
}

impl MonotonePlanarInstance {
    pub fn new(cnf: Cnf, cycle: Vec<Var>) -> Result<Self, ReduceError> {
        let n = cnf.num_vars();
        if n == 0 {
            return Err(ReduceError::NotMonotonePlanar("no variables".into()));
        }
        if !is_monotone(&cnf) {
            return Err(ReduceError::NotMonotonePlanar("a clause mixes polarities".into()));
        }
        let perm: BTreeSet<Var> = cycle.iter().copied().collect();
        if cycle.len() != n || perm != (0..n).collect() {
            return Err(ReduceError::NotMonotonePlanar("cycle is not a permutation of the variables".into()));
        }
        if !variable_cycle_separates_by_crossings(&cnf, &cycle) {
            return Err(ReduceError::NotMonotonePlanar("clauses of one polarity cross".into()));
        }
        Ok(MonotonePlanarInstance { cnf, cycle })
    }
}

/// Linear formula, literal cycle, and an embedding of the augmented
/// literal-clause graph with paired edges and clauses on opposite sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlpInstance {
    pub cnf: Cnf,
    pub cycle: Vec<Literal>,
    pub embedding: Embedding,
}

impl LlpInstance {
    /// Validates the formula and cycle and lays out the canonical embedding.
    pub fn new(cnf: Cnf, cycle: Vec<Literal>) -> Result<Self, ReduceError> {
        let g = Self::augmented_graph(&cnf, &cycle)?;
        let embedding = g.layout().map_err(|_| ReduceError::NotValidLlp("paired edges or clauses cross".into()))?;
        Self::with_embedding(cnf, cycle, embedding)
    }

    /// Validates a given embedding.
    pub fn with_embedding(cnf: Cnf, cycle: Vec<Literal>, embedding: Embedding) -> Result<Self, ReduceError> {
        if !is_linear(&cnf) {
            return Err(ReduceError::NotValidLlp("formula is not linear".into()));
        }
        let g = Self::augmented_graph(&cnf, &cycle)?;
        match check_valid(&embedding, &g) {
            Ok(true) => Ok(LlpInstance { cnf, cycle, embedding }),
            Ok(false) => Err(ReduceError::NotValidLlp("paired edges and clauses are not separated".into())),
            Err(e) => Err(ReduceError::NotValidLlp(e.to_string())),
        }
    }

    fn augmented_graph(cnf: &Cnf, cycle: &[Literal]) -> Result<IncidenceGraph, ReduceError> {
        augment(&build_incidence(cnf, GraphKind::LiteralClause), &CycleOrder::Literals(cycle.to_vec()))
            .map_err(|e| ReduceError::NotValidLlp(e.to_string()))
    }

    pub fn incidence(&self) -> IncidenceGraph {
        Self::augmented_graph(&self.cnf, &self.cycle).expect("validated at construction")
    }
}

/// Monotone linear formula with a variable cycle and an embedding of the
/// augmented variable-clause graph separating the two polarities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlpInstance {
    pub cnf: Cnf,
    pub cycle: Vec<Var>,
    pub embedding: Embedding,
}

impl MlpInstance {
    pub fn new(cnf: Cnf, cycle: Vec<Var>) -> Result<Self, ReduceError> {
        if !is_linear(&cnf) {
            return Err(ReduceError::NotValidMlp("formula is not linear".into()));
        }
        if !is_monotone(&cnf) {
            return Err(ReduceError::NotValidMlp("formula is not monotone".into()));
        }
        let g = augment(&build_incidence(&cnf, GraphKind::VariableClause), &CycleOrder::Variables(cycle.clone()))
            .map_err(|e| ReduceError::NotValidMlp(e.to_string()))?;
        let embedding = g.layout().map_err(|_| ReduceError::NotValidMlp("clauses of one polarity cross".into()))?;
        if check_valid(&embedding, &g) != Ok(true) {
            return Err(ReduceError::NotValidMlp("cycle does not separate the polarities".into()));
        }
        Ok(MlpInstance { cnf, cycle, embedding })
    }

    pub fn incidence(&self) -> IncidenceGraph {
        augment(&build_incidence(&self.cnf, GraphKind::VariableClause), &CycleOrder::Variables(self.cycle.clone()))
            .expect("validated at construction")
    }

    /// Whether every variable occurs negatively in at most one clause.
    pub fn negatives_are_unique(&self) -> bool {
        negatively_at_most_once(&self.cnf)
    }
}

pub fn negatively_at_most_once(f: &Cnf) -> bool {
    let mut seen = vec![0usize; f.num_vars()];
    for c in f.clauses() {
        for l in c.iter().filter(|l| !l.positive) {
            seen[l.var] += 1;
        }
    }
    seen.iter().all(|&k| k <= 1)
}

/// Name derived from `base` that is not yet in `used`, recorded as used.
fn fresh_name(used: &mut BTreeSet<String>, base: String) -> String {
    let mut name = base;
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

#[cfg(test)]
mod tests;
