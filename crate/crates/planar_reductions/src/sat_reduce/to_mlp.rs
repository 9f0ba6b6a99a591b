//! Linear literal-planar 3-SAT to monotone linear planar 3-SAT: every
//! negative literal `¬v` becomes a fresh positive variable `v'`, and the
//! clause `(¬v ∨ ¬v')` forbids setting both.

use std::collections::BTreeSet;

use super::{fresh_name, LlpInstance, MlpInstance, ReduceError};
use crate::reconfig::{validate_flip_sequence, FlipSequence};
use crate::sat_core::{Assignment, Clause, Cnf, Literal, Var};

/// Output variable layout: source variable `v` keeps index `v`, its primed
/// copy is `num_original + v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeMap {
    pub num_original: usize,
}

impl PrimeMap {
    pub fn prime(&self, v: Var) -> Var {
        self.num_original + v
    }

    pub fn is_prime(&self, w: Var) -> bool {
        w >= self.num_original
    }
}

pub fn llp_to_mlp(inst: &LlpInstance) -> Result<(MlpInstance, PrimeMap), ReduceError> {
    let f = &inst.cnf;
    let k = f.num_vars();
    let map = PrimeMap { num_original: k };
    let mut names = f.names().to_vec();
    let mut used: BTreeSet<String> = names.iter().cloned().collect();
    for v in 0..k {
        let n = fresh_name(&mut used, format!("{}'", f.name(v)));
        names.push(n);
    }
    let rename = |l: Literal| if l.positive { Literal::pos(l.var) } else { Literal::pos(map.prime(l.var)) };
    let mut clauses: Vec<Clause> = f.clauses().iter().map(|c| c.iter().map(|&l| rename(l)).collect()).collect();
    for v in 0..k {
        clauses.push(Clause::from([Literal::neg(v), Literal::neg(map.prime(v))]));
    }
    let cycle: Vec<Var> = inst.cycle.iter().map(|&l| rename(l).var).collect();
    let mlp = MlpInstance::new(Cnf::new(names, clauses)?, cycle)?;
    Ok((mlp, map))
}

/// `ν^±`: copies `ν` and sets each primed variable to the opposite value.
pub fn friend_assignment(nu: &[bool]) -> Assignment {
    nu.iter().copied().chain(nu.iter().map(|&x| !x)).collect()
}

/// Restriction of an assignment of the primed formula to the source variables.
pub fn project_assignment(map: PrimeMap, nu: &[bool]) -> Assignment {
    nu[..map.num_original].to_vec()
}

/// Replaces each flip of `v` by two flips that never set `v` and `v'`
/// together: `v` then `v'` when `v` goes from 1 to 0, `v'` then `v` otherwise.
pub fn lift_flip_sequence(f: &Cnf, start: &[bool], seq: &[Var]) -> Result<FlipSequence, ReduceError> {
    let k = f.num_vars();
    if start.len() != k {
        return Err(ReduceError::WrongLength { expected: k, got: start.len() });
    }
    if !validate_flip_sequence(f, start, seq) {
        let bad = (0..=seq.len()).find(|&i| !validate_flip_sequence(f, start, &seq[..i])).unwrap_or(seq.len());
        return Err(ReduceError::IntermediateUnsat(bad.saturating_sub(1)));
    }
    let map = PrimeMap { num_original: k };
    let mut cur = start.to_vec();
    let mut out = Vec::with_capacity(2 * seq.len());
    for &v in seq {
        if cur[v] {
            out.extend([v, map.prime(v)]);
        } else {
            out.extend([map.prime(v), v]);
        }
        cur[v] = !cur[v];
    }
    Ok(out)
}

/// Drops the flips of primed variables.
pub fn project_flip_sequence(map: PrimeMap, seq: &[Var]) -> FlipSequence {
    seq.iter().copied().filter(|&w| !map.is_prime(w)).collect()
}
