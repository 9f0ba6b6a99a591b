//! Text, JSON and DOT forms of formulas and incidence graphs.
//!
//! The text format is DIMACS CNF with optional comment extensions:
//!
//! ```text
//! c var 1 a
//! c cycle 1 2 3
//! c lcycle 1 -2 2 -3 3 -1
//! p cnf 3 2
//! 1 2 -3 0
//! -1 3 0
//! ```
//!
//! `c var` names a variable (default `x<i>`), `c cycle` gives a variable
//! cycle and `c lcycle` a literal cycle, both in DIMACS numbering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Clause, Cnf, CycleOrder, IncidenceGraph, Literal, Node, SatError};

/// A formula with an optional augmenting cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInstance {
    pub cnf: Cnf,
    pub cycle: Option<CycleOrder>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SatError {
    SatError::Parse { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((line[..s].chars().count() + 1, &line[s..]));
    }
    out
}

fn int(tok: (usize, &str), line: usize) -> Result<i64, SatError> {
    tok.1.parse::<i64>().map_err(|_| parse_err(line, tok.0, format!("expected an integer, found `{}`", tok.1)))
}

fn literal_of(code: i64, n: usize, line: usize, column: usize) -> Result<Literal, SatError> {
    let var = code.unsigned_abs() as usize;
    if code == 0 || var > n {
        return Err(parse_err(line, column, format!("literal {code} out of range 1..={n}")));
    }
    Ok(Literal { var: var - 1, positive: code > 0 })
}

/// A `c cycle` or `c lcycle` line: literal kind, line number, and the
/// codes with their columns.
type CycleLine = (bool, usize, Vec<(usize, i64)>);

pub fn parse_dimacs(text: &str) -> Result<SatInstance, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut cycle_codes: Option<CycleLine> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<(usize, usize, i64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&first) = toks.first() else { continue };
        if first.1 == "c" {
            match toks.get(1).map(|t| t.1) {
                Some("var") => {
                    let (Some(&id), Some(&name)) = (toks.get(2), toks.get(3)) else {
                        return Err(parse_err(line, first.0, "expected `c var <index> <name>`"));
                    };
                    let i = int(id, line)?;
                    if i < 1 {
                        return Err(parse_err(line, id.0, "variable index must be positive"));
                    }
                    names.insert(i as usize, name.1.to_string());
                }
                Some(kw @ ("cycle" | "lcycle")) => {
                    if cycle_codes.is_some() {
                        return Err(parse_err(line, first.0, "more than one cycle line"));
                    }
                    let codes = toks[2..].iter().map(|&t| int(t, line).map(|c| (t.0, c))).collect::<Result<_, _>>()?;
                    cycle_codes = Some((kw == "lcycle", line, codes));
                }
                _ => {}
            }
            continue;
        }
        if first.1 == "p" {
            if header.is_some() {
                return Err(parse_err(line, first.0, "duplicate problem line"));
            }
            if toks.len() != 4 || toks[1].1 != "cnf" {
                return Err(parse_err(line, first.0, "expected `p cnf <vars> <clauses>`"));
            }
            let n = int(toks[2], line)?;
            let m = int(toks[3], line)?;
            if n < 0 || m < 0 {
                return Err(parse_err(line, toks[2].0, "negative count"));
            }
            header = Some((n as usize, m as usize));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(line, first.0, "clause before the problem line"));
        };
        for tok in toks {
            let code = int(tok, line)?;
            if code == 0 {
                if current.is_empty() {
                    return Err(parse_err(line, tok.0, "empty clause"));
                }
                let mut clause = Clause::new();
                for &(l, c, code) in &current {
                    clause.insert(literal_of(code, n, l, c)?);
                }
                clauses.push(clause);
                current.clear();
            } else {
                current.push((line, tok.0, code));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(text.lines().count().max(1), 1, "missing problem line"))?;
    if let Some(&(l, c, _)) = current.first() {
        return Err(parse_err(l, c, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            1,
            format!("expected {m} clauses, found {}", clauses.len()),
        ));
    }
    if let Some((&i, _)) = names.iter().find(|(&i, _)| i > n) {
        return Err(parse_err(1, 1, format!("named variable {i} exceeds {n}")));
    }
    let names: Vec<String> = (1..=n).map(|i| names.get(&i).cloned().unwrap_or_else(|| format!("x{i}"))).collect();
    let cnf = Cnf::new(names, clauses)?;
    let cycle = match cycle_codes {
        None => None,
        Some((true, line, codes)) => Some(CycleOrder::Literals(
            codes.iter().map(|&(c, code)| literal_of(code, n, line, c)).collect::<Result<_, _>>()?,
        )),
        Some((false, line, codes)) => Some(CycleOrder::Variables(
            codes
                .iter()
                .map(|&(c, code)| {
                    if code < 0 {
                        Err(parse_err(line, c, "variable cycle entries must be positive"))
                    } else {
                        literal_of(code, n, line, c).map(|l| l.var)
                    }
                })
                .collect::<Result<_, _>>()?,
        )),
    };
    Ok(SatInstance { cnf, cycle })
}

pub fn write_dimacs(cnf: &Cnf, cycle: Option<&CycleOrder>) -> String {
    let mut s = String::new();
    for (i, name) in cnf.names().iter().enumerate() {
        let _ = writeln!(s, "c var {} {}", i + 1, name);
    }
    match cycle {
        Some(CycleOrder::Variables(v)) => {
            let codes: Vec<String> = v.iter().map(|x| (x + 1).to_string()).collect();
            let _ = writeln!(s, "c cycle {}", codes.join(" "));
        }
        Some(CycleOrder::Literals(l)) => {
            let codes: Vec<String> = l.iter().map(|x| x.to_dimacs().to_string()).collect();
            let _ = writeln!(s, "c lcycle {}", codes.join(" "));
        }
        None => {}
    }
    let _ = writeln!(s, "p cnf {} {}", cnf.num_vars(), cnf.clauses().len());
    for c in cnf.clauses() {
        let codes: Vec<String> = c.iter().map(|l| l.to_dimacs().to_string()).collect();
        let _ = writeln!(s, "{} 0", codes.join(" "));
    }
    s
}

/// JSON mirror of the text format; literals use DIMACS numbering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatInstanceJson {
    pub variables: Vec<String>,
    pub clauses: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lcycle: Option<Vec<i64>>,
}

pub fn to_json(cnf: &Cnf, cycle: Option<&CycleOrder>) -> String {
    let j = SatInstanceJson {
        variables: cnf.names().to_vec(),
        clauses: cnf.clauses().iter().map(|c| c.iter().map(|l| l.to_dimacs()).collect()).collect(),
        cycle: match cycle {
            Some(CycleOrder::Variables(v)) => Some(v.iter().map(|&x| x as i64 + 1).collect()),
            _ => None,
        },
        lcycle: match cycle {
            Some(CycleOrder::Literals(l)) => Some(l.iter().map(|x| x.to_dimacs()).collect()),
            _ => None,
        },
    };
    serde_json::to_string_pretty(&j).expect("instance serializes")
}

pub fn from_json(text: &str) -> Result<SatInstance, SatError> {
    let j: SatInstanceJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    let n = j.variables.len();
    let clauses = j
        .clauses
        .iter()
        .map(|c| c.iter().map(|&code| literal_of(code, n, 0, 0)).collect::<Result<Clause, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let cnf = Cnf::new(j.variables.clone(), clauses)?;
    let cycle = match (&j.cycle, &j.lcycle) {
        (Some(_), Some(_)) => return Err(parse_err(0, 0, "both cycle and lcycle given")),
        (Some(v), None) => Some(CycleOrder::Variables(
            v.iter()
                .map(|&c| {
                    if c > 0 {
                        literal_of(c, n, 0, 0).map(|l| l.var)
                    } else {
                        Err(parse_err(0, 0, "variable cycle entries must be positive"))
                    }
                })
                .collect::<Result<_, _>>()?,
        )),
        (None, Some(l)) => {
            Some(CycleOrder::Literals(l.iter().map(|&c| literal_of(c, n, 0, 0)).collect::<Result<_, _>>()?))
        }
        (None, None) => None,
    };
    Ok(SatInstance { cnf, cycle })
}

/// Parses either format, choosing JSON when the text starts with `{`.
pub fn parse_instance(text: &str) -> Result<SatInstance, SatError> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        parse_dimacs(text)
    }
}

/// Graphviz rendering: clauses as boxes, cycle edges dashed, paired edges bold.
pub fn incidence_to_dot(g: &IncidenceGraph, cnf: &Cnf) -> String {
    let mut s = String::from("graph incidence {\n");
    for (&v, node) in &g.nodes {
        let (label, shape) = match *node {
            Node::Clause(i) => (format!("c{}", i + 1), "box"),
            Node::Literal(l) => (cnf.literal_name(l), "ellipse"),
            Node::Variable(x) => (cnf.name(x).to_string(), "ellipse"),
        };
        let _ = writeln!(s, "  v{v} [label=\"{label}\", shape={shape}];");
    }
    let cycle = g.cycle_set();
    let paired: Vec<usize> = g.paired_edges.values().copied().collect();
    for (e, (u, v)) in &g.graph.edges {
        let style = if cycle.contains(e) {
            " [style=dashed]"
        } else if paired.contains(e) {
            " [style=bold]"
        } else {
            ""
        };
        let _ = writeln!(s, "  v{u} -- v{v}{style};");
    }
    s.push_str("}\n");
    s
}
