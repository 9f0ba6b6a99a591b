//! Monotone planar 3-SAT to linear literal-planar 3-SAT.
//!
//! Every occurrence of a variable `v` gets its own literal: the positive
//! occurrences become `¬p_i`, the negative ones `¬n_j`. Two implication
//! chains per variable tie them back to `v`:
//!
//! ```text
//! (a_1 ∨ v), (p_i ∨ ¬a_i), (a_{i+1} ∨ ¬a_i)
//! (b_1 ∨ ¬v), (n_j ∨ ¬b_j), (b_{j+1} ∨ ¬b_j)
//! ```
//!
//! so `¬p_i` entails `v` and `¬n_j` entails `¬v`. The literal cycle runs
//! along an upper line holding the positive parts of all variables in cycle
//! order and back along a lower line holding the negative parts. Chains are
//! laid out in the order in which the clauses leave `v`, which keeps every
//! clause star outside the cycle free of crossings.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use super::{fresh_name, LlpInstance, MonotonePlanarInstance, ReduceError};
use crate::sat_core::{Assignment, Clause, Cnf, Literal, Var};

/// How many chain links each variable gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainCounts {
    /// One link per occurrence of the variable (at least one per polarity).
    #[default]
    PerVariable,
    /// As many links as there are clauses of each polarity in the formula
    /// (at least one), for every variable.
    Global,
}

/// Fresh variables of one source variable. `p[i]`/`n[j]` belong to the
/// `i`-th positive / `j`-th negative occurrence in clause-list order;
/// `a`/`b` are the chain variables in chain order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableGadget {
    pub var: Var,
    pub p: Vec<Var>,
    pub a: Vec<Var>,
    pub n: Vec<Var>,
    pub b: Vec<Var>,
    /// Index into `p` of each chain link, in chain order.
    pub p_chain: Vec<usize>,
    pub n_chain: Vec<usize>,
}

/// Bookkeeping from source variables to output variables. Source variable
/// `v` keeps index `v` in the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshNameMap {
    pub gadgets: Vec<VariableGadget>,
    pub num_output_vars: usize,
}

impl FreshNameMap {
    /// Output assignment that copies `nu` and sets every `n`, `b` to `v` and
    /// every `p`, `a` to `¬v`.
    pub fn lift(&self, nu: &[bool]) -> Result<Assignment, ReduceError> {
        if nu.len() != self.gadgets.len() {
            return Err(ReduceError::WrongLength { expected: self.gadgets.len(), got: nu.len() });
        }
        let mut out = vec![false; self.num_output_vars];
        for g in &self.gadgets {
            let x = nu[g.var];
            out[g.var] = x;
            for &w in g.n.iter().chain(&g.b) {
                out[w] = x;
            }
            for &w in g.p.iter().chain(&g.a) {
                out[w] = !x;
            }
        }
        Ok(out)
    }

    /// Restriction of an output assignment to the source variables.
    pub fn project(&self, nu: &[bool]) -> Assignment {
        nu[..self.gadgets.len()].to_vec()
    }
}

/// Left-to-right order of the occurrences of `v` in `clauses` when each
/// clause is drawn as a star on one side of a line holding the variables in
/// cycle order and `v` is split into one point per occurrence.
///
/// Clauses reaching only left come first, innermost first; then the (at
/// most one) clause reaching both ways; then those reaching only right,
/// outermost first. Equal clauses nest by index, lower index outside.
fn segment_order(clauses: &[&Clause], v: Var, pos: &[usize]) -> Vec<usize> {
    let here = pos[v];
    let others = |c: &Clause| -> Vec<usize> { c.iter().filter(|l| l.var != v).map(|l| pos[l.var]).collect() };
    let mut units = Vec::new();
    let mut left = Vec::new();
    let mut straddling = Vec::new();
    let mut right = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        let o = others(c);
        let (lo, hi) = (o.iter().copied().min(), o.iter().copied().max());
        match (lo, hi) {
            (None, _) | (_, None) => units.push(i),
            (Some(lo), Some(hi)) if hi < here => left.push((Reverse(lo), Reverse(hi), Reverse(i))),
            (Some(lo), Some(hi)) if lo > here => right.push((Reverse(hi), Reverse(lo), i)),
            _ => straddling.push(i),
        }
    }
    left.sort();
    right.sort();
    units
        .into_iter()
        .chain(left.into_iter().map(|(_, _, Reverse(i))| i))
        .chain(straddling)
        .chain(right.into_iter().map(|(_, _, i)| i))
        .collect()
}

pub fn mp3sat_to_llp(
    inst: &MonotonePlanarInstance,
    counts: ChainCounts,
) -> Result<(LlpInstance, FreshNameMap), ReduceError> {
    let f = &inst.cnf;
    let k = f.num_vars();
    let mut pos = vec![0; k];
    for (i, &v) in inst.cycle.iter().enumerate() {
        pos[v] = i;
    }
    let mut pos_occ: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut neg_occ: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (ci, c) in f.clauses().iter().enumerate() {
        for l in c {
            if l.positive { &mut pos_occ[l.var] } else { &mut neg_occ[l.var] }.push(ci);
        }
    }
    let total_pos = f.clauses().iter().filter(|c| c.iter().all(|l| l.positive)).count();
    let total_neg = f.clauses().len() - total_pos;

    let mut names: Vec<String> = f.names().to_vec();
    let mut used: BTreeSet<String> = names.iter().cloned().collect();
    let mut fresh = |names: &mut Vec<String>, base: String| -> Var {
        names.push(fresh_name(&mut used, base));
        names.len() - 1
    };
    let mut gadgets = Vec::with_capacity(k);
    for v in 0..k {
        let (np, nm) = match counts {
            ChainCounts::PerVariable => (pos_occ[v].len().max(1), neg_occ[v].len().max(1)),
            ChainCounts::Global => (total_pos.max(1), total_neg.max(1)),
        };
        let vn = f.name(v).to_string();
        let p = (1..=np).map(|i| fresh(&mut names, format!("p{i}_{vn}"))).collect();
        let a = (1..=np).map(|i| fresh(&mut names, format!("a{i}_{vn}"))).collect();
        let n = (1..=nm).map(|j| fresh(&mut names, format!("n{j}_{vn}"))).collect();
        let b = (1..=nm).map(|j| fresh(&mut names, format!("b{j}_{vn}"))).collect();
        let order = |occ: &[usize], len: usize| {
            let cs: Vec<&Clause> = occ.iter().map(|&ci| &f.clauses()[ci]).collect();
            let mut o = segment_order(&cs, v, &pos);
            o.extend(occ.len()..len);
            o
        };
        // The upper line is traversed left to right, the lower one right to left.
        let p_chain = order(&pos_occ[v], np);
        let mut n_chain = order(&neg_occ[v], nm);
        n_chain.reverse();
        gadgets.push(VariableGadget { var: v, p, a, n, b, p_chain, n_chain });
    }

    let mut clauses: Vec<Clause> = Vec::new();
    for (ci, c) in f.clauses().iter().enumerate() {
        let renamed = c
            .iter()
            .map(|l| {
                let g = &gadgets[l.var];
                if l.positive {
                    let i = pos_occ[l.var].iter().position(|&x| x == ci).expect("occurrence recorded");
                    Literal::neg(g.p[i])
                } else {
                    let j = neg_occ[l.var].iter().position(|&x| x == ci).expect("occurrence recorded");
                    Literal::neg(g.n[j])
                }
            })
            .collect();
        clauses.push(renamed);
    }
    let pair = |x: Literal, y: Literal| Clause::from([x, y]);
    for g in &gadgets {
        let v = g.var;
        clauses.push(pair(Literal::pos(g.a[0]), Literal::pos(v)));
        for (t, &i) in g.p_chain.iter().enumerate() {
            clauses.push(pair(Literal::pos(g.p[i]), Literal::neg(g.a[t])));
            if t + 1 < g.a.len() {
                clauses.push(pair(Literal::pos(g.a[t + 1]), Literal::neg(g.a[t])));
            }
        }
        clauses.push(pair(Literal::pos(g.b[0]), Literal::neg(v)));
        for (t, &j) in g.n_chain.iter().enumerate() {
            clauses.push(pair(Literal::pos(g.n[j]), Literal::neg(g.b[t])));
            if t + 1 < g.b.len() {
                clauses.push(pair(Literal::pos(g.b[t + 1]), Literal::neg(g.b[t])));
            }
        }
    }

    // Upper line left to right, then lower line right to left.
    let mut cycle = Vec::new();
    for &v in &inst.cycle {
        let g = &gadgets[v];
        cycle.push(Literal::pos(v));
        for (t, &i) in g.p_chain.iter().enumerate() {
            cycle.extend([Literal::pos(g.a[t]), Literal::neg(g.p[i]), Literal::pos(g.p[i]), Literal::neg(g.a[t])]);
        }
    }
    for &v in inst.cycle.iter().rev() {
        let g = &gadgets[v];
        cycle.push(Literal::neg(v));
        for (t, &j) in g.n_chain.iter().enumerate() {
            cycle.extend([Literal::pos(g.b[t]), Literal::neg(g.n[j]), Literal::pos(g.n[j]), Literal::neg(g.b[t])]);
        }
    }

    let num_output_vars = names.len();
    let cnf = Cnf::new(names, clauses)?;
    let llp = LlpInstance::new(cnf, cycle)?;
    Ok((llp, FreshNameMap { gadgets, num_output_vars }))
}
