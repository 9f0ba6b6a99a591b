//! Boolean reconfiguration: single-variable flips that keep a formula
//! satisfied, with a breadth-first oracle and a sequence checker.

use std::collections::VecDeque;

use thiserror::Error;

use crate::sat_core::{Assignment, Cnf, Var};

pub const RECONFIG_CAP: usize = 20;

/// Variables flipped one after another.
pub type FlipSequence = Vec<Var>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconfigError {
    #[error("the {0} assignment does not satisfy the formula")]
    EndpointUnsat(&'static str),
    #[error("{0} variables exceed the search cap of {1}")]
    TooLarge(usize, usize),
    #[error("assignment has {got} values for {expected} variables")]
    WrongLength { expected: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot read `{0}` as an assignment entry")]
    BadAssignment(String),
}

fn encode(nu: &[bool]) -> u32 {
    nu.iter().enumerate().fold(0, |m, (v, &b)| m | (u32::from(b) << v))
}

fn decode(m: u32, n: usize) -> Assignment {
    (0..n).map(|v| m >> v & 1 == 1).collect()
}

/// Shortest flip sequence from `from` to `to` through satisfying
/// assignments. Neighbours are explored in increasing variable order, so
/// the witness is deterministic.
pub fn reconfig_bfs(f: &Cnf, from: &[bool], to: &[bool]) -> Result<Option<FlipSequence>, ReconfigError> {
    let n = f.num_vars();
    if n > RECONFIG_CAP {
        return Err(ReconfigError::TooLarge(n, RECONFIG_CAP));
    }
    for nu in [from, to] {
        if nu.len() != n {
            return Err(ReconfigError::WrongLength { expected: n, got: nu.len() });
        }
    }
    if !f.satisfied_by(from) {
        return Err(ReconfigError::EndpointUnsat("start"));
    }
    if !f.satisfied_by(to) {
        return Err(ReconfigError::EndpointUnsat("target"));
    }
    let masks: Vec<(u32, u32)> = f
        .clauses()
        .iter()
        .map(|c| c.iter().fold((0, 0), |(p, q), l| if l.positive { (p | 1 << l.var, q) } else { (p, q | 1 << l.var) }))
        .collect();
    let sat = |m: u32| masks.iter().all(|&(p, q)| m & p != 0 || !m & q != 0);
    let (s, t) = (encode(from), encode(to));
    // Parent pointer per state: the flipped variable, or u8::MAX when unseen.
    const UNSEEN: u8 = u8::MAX;
    let mut via = vec![UNSEEN; 1usize << n];
    via[s as usize] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(m) = queue.pop_front() {
        if m == t {
            let mut seq = Vec::new();
            let mut cur = m;
            while cur != s {
                let v = via[cur as usize];
                seq.push(v as Var);
                cur ^= 1 << v;
            }
            seq.reverse();
            return Ok(Some(seq));
        }
        for v in 0..n {
            let next = m ^ (1 << v);
            if via[next as usize] == UNSEEN && next != s && sat(next) {
                via[next as usize] = v as u8;
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Whether applying `seq` to `start` keeps every assignment, the first and
/// last included, satisfying `f`.
pub fn validate_flip_sequence(f: &Cnf, start: &[bool], seq: &[Var]) -> bool {
    if start.len() != f.num_vars() || !f.satisfied_by(start) {
        return false;
    }
    let mut nu = start.to_vec();
    for &v in seq {
        if v >= nu.len() {
            return false;
        }
        nu[v] = !nu[v];
        if !f.satisfied_by(&nu) {
            return false;
        }
    }
    true
}

/// Assignment reached by applying `seq` to `start`.
pub fn apply_flips(start: &[bool], seq: &[Var]) -> Assignment {
    let mut nu = start.to_vec();
    for &v in seq {
        nu[v] = !nu[v];
    }
    nu
}

/// Reads an assignment written either as a bit string in variable order
/// (`0110`) or as `name=0|1` entries; omitted names default to false.
pub fn parse_assignment(f: &Cnf, text: &str) -> Result<Assignment, ReconfigError> {
    let text = text.trim();
    let n = f.num_vars();
    if !text.contains('=') && text.chars().all(|c| c == '0' || c == '1' || c.is_whitespace()) {
        let bits: Vec<bool> = text.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect();
        if bits.len() != n {
            return Err(ReconfigError::WrongLength { expected: n, got: bits.len() });
        }
        return Ok(bits);
    }
    let mut nu = vec![false; n];
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (name, value) = tok.split_once('=').ok_or_else(|| ReconfigError::BadAssignment(tok.to_string()))?;
        let v = f.var(name).ok_or_else(|| ReconfigError::UnknownVariable(name.to_string()))?;
        nu[v] = match value {
            "1" | "true" => true,
            "0" | "false" => false,
            _ => return Err(ReconfigError::BadAssignment(tok.to_string())),
        };
    }
    Ok(nu)
}

pub fn format_assignment(f: &Cnf, nu: &[bool]) -> String {
    nu.iter().enumerate().map(|(v, &b)| format!("{}={}", f.name(v), u8::from(b))).collect::<Vec<_>>().join(" ")
}

/// Reads whitespace-separated variable names.
pub fn parse_flip_sequence(f: &Cnf, text: &str) -> Result<FlipSequence, ReconfigError> {
    text.split_whitespace()
        .map(|name| f.var(name).ok_or_else(|| ReconfigError::UnknownVariable(name.to_string())))
        .collect()
}

pub fn format_flip_sequence(f: &Cnf, seq: &[Var]) -> String {
    seq.iter().map(|&v| f.name(v)).collect::<Vec<_>>().join(" ")
}

/// All satisfying assignments reachable from `start`, as bitmasks with
/// variable `v` at bit `v`. Used to compare reachability across reductions.
pub fn reachable_set(f: &Cnf, start: &[bool]) -> Result<Vec<Assignment>, ReconfigError> {
    let n = f.num_vars();
    if n > RECONFIG_CAP {
        return Err(ReconfigError::TooLarge(n, RECONFIG_CAP));
    }
    if !f.satisfied_by(start) {
        return Err(ReconfigError::EndpointUnsat("start"));
    }
    let mut seen = vec![false; 1usize << n];
    let s = encode(start);
    seen[s as usize] = true;
    let mut queue = VecDeque::from([s]);
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        let nu = decode(m, n);
        for v in 0..n {
            let next = m ^ (1 << v);
            if !seen[next as usize] {
                let mut cand = nu.clone();
                cand[v] = !cand[v];
                if f.satisfied_by(&cand) {
                    seen[next as usize] = true;
                    queue.push_back(next);
                }
            }
        }
        out.push(nu);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::sat_core::all_models;

    fn cnf(clauses: &[&[&str]]) -> Cnf {
        Cnf::from_named(clauses).unwrap()
    }

    #[test]
    fn or_clause_needs_detour() {
        let f = cnf(&[&["x", "y"]]);
        let seq = reconfig_bfs(&f, &[true, false], &[false, true]).unwrap().unwrap();
        assert_eq!(seq, vec![1, 0]);
        assert!(validate_flip_sequence(&f, &[true, false], &seq));
        // Flipping x first passes through (0, 0).
        assert!(!validate_flip_sequence(&f, &[true, false], &[0, 1]));
    }

    #[test]
    fn identical_endpoints_give_empty_sequence() {
        let f = cnf(&[&["x", "y"]]);
        assert_eq!(reconfig_bfs(&f, &[true, true], &[true, true]), Ok(Some(vec![])));
    }

    #[test]
    fn isolated_models_are_unreachable() {
        // Models 01 and 10 only: every flip leaves the solution set.
        let f = cnf(&[&["x", "y"], &["¬x", "¬y"]]);
        assert_eq!(reconfig_bfs(&f, &[true, false], &[false, true]), Ok(None));
    }

    #[test]
    fn endpoint_and_size_errors() {
        let f = cnf(&[&["x"]]);
        assert_eq!(reconfig_bfs(&f, &[false], &[true]), Err(ReconfigError::EndpointUnsat("start")));
        assert_eq!(reconfig_bfs(&f, &[true], &[false]), Err(ReconfigError::EndpointUnsat("target")));
        assert_eq!(reconfig_bfs(&f, &[true, true], &[true]), Err(ReconfigError::WrongLength { expected: 1, got: 2 }));
        let names: Vec<String> = (0..21).map(|i| format!("v{i}")).collect();
        let big = Cnf::new(names, vec![]).unwrap();
        assert_eq!(reconfig_bfs(&big, &[false; 21], &[false; 21]), Err(ReconfigError::TooLarge(21, 20)));
    }

    #[test]
    fn text_forms_round_trip() {
        let f = cnf(&[&["a", "b"], &["c"]]);
        let nu = parse_assignment(&f, "a=1 c=1").unwrap();
        assert_eq!(nu, vec![true, false, true]);
        assert_eq!(parse_assignment(&f, "101").unwrap(), nu);
        assert_eq!(parse_assignment(&f, &format_assignment(&f, &nu)).unwrap(), nu);
        assert_eq!(parse_flip_sequence(&f, "b a").unwrap(), vec![1, 0]);
        assert_eq!(format_flip_sequence(&f, &[1, 0]), "b a");
        assert!(matches!(parse_assignment(&f, "z=1"), Err(ReconfigError::UnknownVariable(_))));
        assert!(matches!(parse_assignment(&f, "10"), Err(ReconfigError::WrongLength { .. })));
    }

    fn formula_strategy() -> impl Strategy<Value = Cnf> {
        (2usize..=5).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::btree_map(0..n, any::<bool>(), 1..=3), 0..=6).prop_map(move |cs| {
                let clauses = cs
                    .into_iter()
                    .map(|c| c.into_iter().map(|(var, positive)| crate::sat_core::Literal { var, positive }).collect())
                    .collect();
                Cnf::new((0..n).map(|i| format!("x{i}")).collect(), clauses).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn reachability_is_symmetric_and_witnessed(f in formula_strategy(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
            let models = all_models(&f).unwrap();
            prop_assume!(!models.is_empty());
            let (a, b) = (i.get(&models), j.get(&models));
            let fwd = reconfig_bfs(&f, a, b).unwrap();
            let back = reconfig_bfs(&f, b, a).unwrap();
            prop_assert_eq!(fwd.is_some(), back.is_some());
            if let (Some(p), Some(q)) = (fwd, back) {
                prop_assert_eq!(p.len(), q.len());
                prop_assert!(validate_flip_sequence(&f, a, &p));
                prop_assert_eq!(&apply_flips(a, &p), b);
            }
            let reach = reachable_set(&f, a).unwrap();
            prop_assert_eq!(reach.contains(b), reconfig_bfs(&f, a, b).unwrap().is_some());
        }
    }
}
