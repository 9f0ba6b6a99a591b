//! Nondeterministic constraint logic: cubic AND/OR constraint graphs,
//! orientations with the inflow constraint, single-edge flips, an exact
//! configuration-to-configuration search, and the reduction to linear
//! literal-planar 3-SAT reconfiguration.

pub mod random;
mod reduce;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{is_planar, EdgeId, Multigraph, VertexId};

pub use reduce::{assignment_of, configuration_of, ncl_to_llp_reconfig, NclReduction};

/// Largest edge count accepted by [`c2c_bfs`].
pub const C2C_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NclError {
    #[error("malformed constraint graph: {0}")]
    MalformedConstraintGraph(String),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("{0} configuration is not legal")]
    IllegalEndpoint(&'static str),
    #[error("{edges} edges exceed the search cap {cap}")]
    TooLarge { edges: usize, cap: usize },
    #[error("bad configuration: {0}")]
    BadConfiguration(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("cycle augmentation failed: {0}")]
    CycleAugment(String),
}

pub type Result<T> = std::result::Result<T, NclError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "AND", alias = "and", alias = "And")]
    And,
    #[serde(rename = "OR", alias = "or", alias = "Or")]
    Or,
}

/// A connected planar cubic multigraph with edge weights 1 or 2, where OR
/// vertices see three weight-2 edges and AND vertices two weight-1 edges
/// and one weight-2 edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    graph: Multigraph,
    weights: BTreeMap<EdgeId, u8>,
    kinds: BTreeMap<VertexId, NodeKind>,
}

/// Head vertex of every edge.
pub type NclConfiguration = BTreeMap<EdgeId, VertexId>;

impl ConstraintGraph {
    pub fn new(graph: Multigraph, weights: BTreeMap<EdgeId, u8>, kinds: BTreeMap<VertexId, NodeKind>) -> Result<Self> {
        let bad = |m: String| Err(NclError::MalformedConstraintGraph(m));
        if graph.vertices.is_empty() {
            return bad("no vertices".into());
        }
        if kinds.keys().copied().collect::<Vec<_>>() != graph.vertices.iter().copied().collect::<Vec<_>>() {
            return bad("every vertex needs exactly one kind".into());
        }
        if weights.keys().copied().collect::<Vec<_>>() != graph.edges.keys().copied().collect::<Vec<_>>() {
            return bad("every edge needs exactly one weight".into());
        }
        for (&e, &(u, v)) in &graph.edges {
            if u == v {
                return bad(format!("edge {e} is a loop"));
            }
            if !matches!(weights[&e], 1 | 2) {
                return bad(format!("edge {e} has weight {}", weights[&e]));
            }
        }
        let adj = graph.adjacency();
        for (&v, &kind) in &kinds {
            let ws: Vec<u8> = adj[&v].iter().map(|(e, _)| weights[e]).collect();
            if ws.len() != 3 {
                return bad(format!("vertex {v} has degree {}", ws.len()));
            }
            let heavy = ws.iter().filter(|&&w| w == 2).count();
            match kind {
                NodeKind::Or if heavy != 3 => return bad(format!("OR vertex {v} has a weight-1 edge")),
                NodeKind::And if heavy != 1 => return bad(format!("AND vertex {v} has {heavy} weight-2 edges")),
                _ => {}
            }
        }
        if !graph.is_connected() {
            return bad("graph is not connected".into());
        }
        if !is_planar(&graph) {
            return bad("graph is not planar".into());
        }
        Ok(ConstraintGraph { graph, weights, kinds })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn weight(&self, e: EdgeId) -> u8 {
        self.weights[&e]
    }

    pub fn kind(&self, v: VertexId) -> NodeKind {
        self.kinds[&v]
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.graph.edges.keys().copied()
    }

    /// Referential orientation of `e`: from the smaller endpoint to the larger.
    pub fn referential(&self, e: EdgeId) -> (VertexId, VertexId) {
        let (u, v) = self.graph.edges[&e];
        (u.min(v), u.max(v))
    }

    /// Weight pointing into `v`.
    pub fn inflow(&self, c: &NclConfiguration, v: VertexId) -> u32 {
        self.graph
            .edges
            .iter()
            .filter(|(e, &(a, b))| (a == v || b == v) && c.get(e) == Some(&v))
            .map(|(e, _)| u32::from(self.weights[e]))
            .sum()
    }

    /// Checks that `c` orients every edge towards one of its endpoints.
    pub fn check_configuration(&self, c: &NclConfiguration) -> Result<()> {
        if c.len() != self.graph.edges.len() {
            return Err(NclError::BadConfiguration(format!(
                "{} edges oriented, graph has {}",
                c.len(),
                self.graph.edges.len()
            )));
        }
        for (&e, &h) in c {
            match self.graph.edges.get(&e) {
                None => return Err(NclError::UnknownEdge(e)),
                Some(&(a, b)) if h != a && h != b => {
                    return Err(NclError::BadConfiguration(format!("edge {e} cannot point to {h}")))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Graphviz rendering with weight-2 edges drawn thick and AND vertices boxed.
    pub fn to_dot(&self, c: Option<&NclConfiguration>) -> String {
        let mut s = String::from("digraph ncl {\n");
        for (&v, &k) in &self.kinds {
            let shape = if k == NodeKind::And { "box" } else { "ellipse" };
            s.push_str(&format!("  v{v} [shape={shape}, label=\"{v} {k:?}\"];\n"));
        }
        for (&e, &(u, v)) in &self.graph.edges {
            let (from, to) = match c.and_then(|c| c.get(&e)) {
                Some(&h) if h == u => (v, u),
                Some(_) => (u, v),
                None => (u, v),
            };
            let arrow = if c.is_some() { "normal" } else { "none" };
            let pen = if self.weights[&e] == 2 { 3 } else { 1 };
            s.push_str(&format!("  v{from} -> v{to} [label=\"e{e}\", penwidth={pen}, arrowhead={arrow}];\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn is_legal(g: &ConstraintGraph, c: &NclConfiguration) -> bool {
    g.check_configuration(c).is_ok() && g.graph.vertices.iter().all(|&v| g.inflow(c, v) >= 2)
}

/// Reverses `e`. Legality of the result is the caller's concern.
pub fn flip(g: &ConstraintGraph, c: &NclConfiguration, e: EdgeId) -> Result<NclConfiguration> {
    let &(a, b) = g.graph.edges.get(&e).ok_or(NclError::UnknownEdge(e))?;
    let h = *c.get(&e).ok_or(NclError::UnknownEdge(e))?;
    let mut out = c.clone();
    out.insert(e, if h == a { b } else { a });
    Ok(out)
}

/// Shortest sequence of edge flips from `s` to `t` through legal
/// configurations, found by breadth-first search over orientations (bit `k`
/// set when the `k`-th edge points along its referential orientation).
/// Flips are tried in ascending edge order.
pub fn c2c_bfs(g: &ConstraintGraph, s: &NclConfiguration, t: &NclConfiguration) -> Result<Option<Vec<EdgeId>>> {
    let m = g.graph.edges.len();
    if m > C2C_CAP {
        return Err(NclError::TooLarge { edges: m, cap: C2C_CAP });
    }
    for (c, which) in [(s, "start"), (t, "target")] {
        g.check_configuration(c)?;
        if !is_legal(g, c) {
            return Err(NclError::IllegalEndpoint(which));
        }
    }
    let ids: Vec<EdgeId> = g.edges().collect();
    let verts: Vec<VertexId> = g.graph.vertices.iter().copied().collect();
    let index_of: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // (tail index, head index, weight) under the referential orientation.
    let ends: Vec<(usize, usize, u32)> = ids
        .iter()
        .map(|&e| {
            let (u, v) = g.referential(e);
            (index_of[&u], index_of[&v], u32::from(g.weights[&e]))
        })
        .collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for (k, &(u, v, _)) in ends.iter().enumerate() {
        incident[u].push(k);
        incident[v].push(k);
    }
    let encode = |c: &NclConfiguration| -> u32 {
        ids.iter().enumerate().fold(0, |acc, (k, e)| acc | (u32::from(c[e] == g.referential(*e).1) << k))
    };
    let inflow = |state: u32, x: usize| -> u32 {
        incident[x]
            .iter()
            .map(|&k| {
                let (u, v, w) = ends[k];
                let head = if state >> k & 1 == 1 { v } else { u };
                if head == x {
                    w
                } else {
                    0
                }
            })
            .sum()
    };
    let (from, to) = (encode(s), encode(t));
    let mut parent: Vec<u8> = vec![u8::MAX; 1 << m];
    parent[from as usize] = u8::MAX - 1;
    let mut queue = VecDeque::from([from]);
    while let Some(state) = queue.pop_front() {
        if state == to {
            break;
        }
        for (k, &(u, v, _)) in ends.iter().enumerate() {
            let next = state ^ (1 << k);
            if parent[next as usize] != u8::MAX {
                continue;
            }
            // Only the two endpoints of the flipped edge change inflow.
            if inflow(next, u) >= 2 && inflow(next, v) >= 2 {
                parent[next as usize] = k as u8;
                queue.push_back(next);
            }
        }
    }
    if parent[to as usize] == u8::MAX {
        return Ok(None);
    }
    let mut seq = Vec::new();
    let mut cur = to;
    while cur != from {
        let k = parent[cur as usize] as usize;
        seq.push(ids[k]);
        cur ^= 1 << k;
    }
    seq.reverse();
    Ok(Some(seq))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintGraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

pub fn constraint_graph_from_json(text: &str) -> Result<ConstraintGraph> {
    let raw: ConstraintGraphJson = serde_json::from_str(text).map_err(|e| NclError::Json(e.to_string()))?;
    let mut graph = Multigraph::new();
    let mut kinds = BTreeMap::new();
    for v in &raw.vertices {
        graph.add_vertex(v.id);
        if kinds.insert(v.id, v.kind).is_some() {
            return Err(NclError::MalformedConstraintGraph(format!("vertex {} listed twice", v.id)));
        }
    }
    let mut weights = BTreeMap::new();
    for e in &raw.edges {
        if weights.insert(e.id, e.weight).is_some() {
            return Err(NclError::MalformedConstraintGraph(format!("edge {} listed twice", e.id)));
        }
        if !kinds.contains_key(&e.u) || !kinds.contains_key(&e.v) {
            return Err(NclError::MalformedConstraintGraph(format!("edge {} has an unknown endpoint", e.id)));
        }
        graph.insert_edge(e.id, e.u, e.v);
    }
    ConstraintGraph::new(graph, weights, kinds)
}

pub fn constraint_graph_to_json(g: &ConstraintGraph) -> String {
    let raw = ConstraintGraphJson {
        vertices: g.kinds.iter().map(|(&id, &kind)| VertexJson { id, kind }).collect(),
        edges: g.graph.edges.iter().map(|(&id, &(u, v))| EdgeJson { id, u, v, weight: g.weights[&id] }).collect(),
    };
    serde_json::to_string_pretty(&raw).expect("plain data serialises")
}

pub fn configuration_from_json(text: &str) -> Result<NclConfiguration> {
    serde_json::from_str(text).map_err(|e| NclError::Json(e.to_string()))
}

pub fn configuration_to_json(c: &NclConfiguration) -> String {
    serde_json::to_string(c).expect("plain data serialises")
}
