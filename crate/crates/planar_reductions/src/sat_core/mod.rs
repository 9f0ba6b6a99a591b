//! CNF formulas, the structural predicates of the planar/linear variants,
//! incidence graphs with variable or literal cycles, and a brute-force
//! satisfiability oracle.

mod incidence;
pub mod io;
pub mod random;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::EmbeddingError;

pub use incidence::{
    augment, build_incidence, check_valid, clause_sets_cross, layout_embedding, literal_cycle_is_valid_by_crossings,
    variable_cycle_separates_by_crossings, CycleLayout, CycleOrder, GraphKind, IncidenceGraph, Node,
};

pub type Var = usize;

/// Truth value per variable index.
pub type Assignment = Vec<bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("clause {0} is empty or has more than three literals")]
    BadClauseSize(usize),
    #[error("clause {0} contains a literal and its negation")]
    Tautology(usize),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("cycle kind does not match the graph kind, or the graph is already augmented")]
    KindMismatch,
    #[error("cycle is not a permutation of length at least two")]
    CycleIncomplete,
    #[error("embedding is not a planar embedding of the augmented graph")]
    NonPlanarEmbedding,
    #[error("{0} variables exceed the brute-force cap of {1}")]
    TooManyVariables(usize, usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Var) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: Var) -> Self {
        Literal { var, positive: false }
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }

    pub fn holds(self, nu: &[bool]) -> bool {
        nu[self.var] == self.positive
    }

    /// DIMACS integer: `var + 1`, negated for negative literals.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

pub type Clause = BTreeSet<Literal>;

/// A CNF formula over named variables with clauses of one to three literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    names: Vec<String>,
    clauses: Vec<Clause>,
}

impl Cnf {
    /// Builds a formula, checking clause sizes and rejecting tautological clauses.
    pub fn new(names: Vec<String>, clauses: Vec<Clause>) -> Result<Self, SatError> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 3 {
                return Err(SatError::BadClauseSize(i));
            }
            if c.iter().any(|l| l.var >= names.len()) {
                return Err(SatError::UnknownVariable(format!("index in clause {i}")));
            }
            if c.iter().any(|l| c.contains(&l.negate())) {
                return Err(SatError::Tautology(i));
            }
        }
        Ok(Cnf { names, clauses })
    }

    /// Parses clauses written as literal names, `-x` or `¬x` for negation.
    /// Variables are numbered in order of first appearance.
    pub fn from_named(clauses: &[&[&str]]) -> Result<Self, SatError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, Var> = BTreeMap::new();
        let mut out = Vec::new();
        for c in clauses {
            let mut clause = Clause::new();
            for raw in c.iter() {
                let (positive, name) = match raw.strip_prefix('-').or_else(|| raw.strip_prefix('¬')) {
                    Some(rest) => (false, rest),
                    None => (true, *raw),
                };
                let var = *index.entry(name.to_string()).or_insert_with(|| {
                    names.push(name.to_string());
                    names.len() - 1
                });
                clause.insert(Literal { var, positive });
            }
            out.push(clause);
        }
        Cnf::new(names, out)
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v]
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn literal_name(&self, l: Literal) -> String {
        if l.positive {
            self.names[l.var].clone()
        } else {
            format!("¬{}", self.names[l.var])
        }
    }

    pub fn satisfied_by(&self, nu: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(nu)))
    }

    /// Assignment from variable names to values; missing variables default to false.
    pub fn assignment(&self, values: &[(&str, bool)]) -> Result<Assignment, SatError> {
        let mut nu = vec![false; self.num_vars()];
        for &(name, b) in values {
            let v = self.var(name).ok_or_else(|| SatError::UnknownVariable(name.to_string()))?;
            nu[v] = b;
        }
        Ok(nu)
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            let lits: Vec<String> = c.iter().map(|&l| self.literal_name(l)).collect();
            write!(f, "({})", lits.join(" ∨ "))?;
        }
        Ok(())
    }
}

/// Clauses sharing at least one literal with clause `i`.
fn partners(f: &Cnf, by_literal: &BTreeMap<Literal, Vec<usize>>, i: usize) -> BTreeSet<usize> {
    f.clauses[i].iter().flat_map(|l| by_literal[l].iter().copied()).filter(|&j| j != i).collect()
}

/// Each clause meets at most one other clause, in at most one literal.
pub fn is_linear(f: &Cnf) -> bool {
    let mut by_literal: BTreeMap<Literal, Vec<usize>> = BTreeMap::new();
    for (i, c) in f.clauses.iter().enumerate() {
        for &l in c {
            by_literal.entry(l).or_default().push(i);
        }
    }
    let fast = (0..f.clauses.len()).all(|i| {
        let p = partners(f, &by_literal, i);
        p.len() <= 1 && p.iter().all(|&j| f.clauses[i].intersection(&f.clauses[j]).count() <= 1)
    });
    debug_assert_eq!(fast, is_linear_pairwise(f));
    fast
}

/// Quadratic reference check of linearity over all clause pairs.
pub fn is_linear_pairwise(f: &Cnf) -> bool {
    let m = f.clauses.len();
    (0..m).all(|i| {
        let mut met = 0;
        for j in 0..m {
            if i == j {
                continue;
            }
            let common = f.clauses[i].intersection(&f.clauses[j]).count();
            if common > 1 {
                return false;
            }
            met += usize::from(common == 1);
        }
        met <= 1
    })
}

/// Every clause is all-positive or all-negative.
pub fn is_monotone(f: &Cnf) -> bool {
    f.clauses.iter().all(|c| c.iter().all(|l| l.positive) || c.iter().all(|l| !l.positive))
}

pub const BRUTE_FORCE_CAP: usize = 24;

/// Lexicographically smallest model (variable 0 most significant, false < true).
pub fn brute_force_sat(f: &Cnf) -> Result<Option<Assignment>, SatError> {
    let n = f.num_vars();
    if n > BRUTE_FORCE_CAP {
        return Err(SatError::TooManyVariables(n, BRUTE_FORCE_CAP));
    }
    // Bit n-1-v of the counter holds variable v, so counting up is lexicographic.
    let masks: Vec<(u32, u32)> = f
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0u32, 0u32), |(p, q), l| {
                let bit = 1u32 << (n - 1 - l.var);
                if l.positive {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect();
    for m in 0u32..(1u32 << n) {
        if masks.iter().all(|&(p, q)| m & p != 0 || !m & q != 0) {
            return Ok(Some((0..n).map(|v| m >> (n - 1 - v) & 1 == 1).collect()));
        }
    }
    Ok(None)
}

/// All models in lexicographic order.
pub fn all_models(f: &Cnf) -> Result<Vec<Assignment>, SatError> {
    let n = f.num_vars();
    if n > BRUTE_FORCE_CAP {
        return Err(SatError::TooManyVariables(n, BRUTE_FORCE_CAP));
    }
    Ok((0u32..(1u32 << n))
        .map(|m| (0..n).map(|v| m >> (n - 1 - v) & 1 == 1).collect::<Assignment>())
        .filter(|nu| f.satisfied_by(nu))
        .collect())
}

#[cfg(test)]
mod tests;
