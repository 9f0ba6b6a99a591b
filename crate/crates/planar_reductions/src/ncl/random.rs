//! Random constraint graphs for tests and benchmarks.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{is_legal, ConstraintGraph, NclConfiguration, NodeKind};
use crate::embedding::{compute_embedding, EdgeId, Multigraph, VertexId};

/// A connected planar cubic multigraph with `3 + 3 * handles` edges, grown
/// from three parallel edges by repeatedly subdividing two edges on a common
/// face and joining the new vertices inside it. Weight-1 edges form up to
/// `max_cycles` vertex-disjoint cycles whose vertices become AND vertices;
/// everything else is OR with weight 2.
pub fn random_constraint_graph<R: Rng>(rng: &mut R, handles: usize, max_cycles: usize) -> ConstraintGraph {
    let theta = Multigraph::from_edges([0, 1], &[(0, 1), (0, 1), (0, 1)]);
    let mut emb = compute_embedding(&theta).expect("theta graph is planar");
    for _ in 0..handles {
        let faces: Vec<usize> = emb.faces().keys().copied().collect();
        let f = *faces.choose(rng).expect("an embedding with edges has faces");
        let face = emb.faces()[&f].clone();
        let i = rng.gen_range(0..face.len());
        let j = (i + rng.gen_range(1..face.len())) % face.len();
        let (a, b) = (face[i].edge, face[j].edge);
        let (next, w1, _) = emb.subdivide_edge(a).expect("edge exists");
        let (next, w2, _) = next.subdivide_edge(b).expect("edge exists");
        emb = next.add_edge(w1, w2, f).expect("both new vertices lie on the face").0;
    }
    let graph = emb.graph().clone();
    let mut light: BTreeSet<EdgeId> = BTreeSet::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=max_cycles) {
        if let Some(cycle) = random_cycle(rng, &graph, &used) {
            for &e in &cycle {
                let (u, v) = graph.edges[&e];
                used.extend([u, v]);
            }
            light.extend(cycle);
        }
    }
    let weights = graph.edges.keys().map(|&e| (e, if light.contains(&e) { 1 } else { 2 })).collect();
    let kinds =
        graph.vertices.iter().map(|&v| (v, if used.contains(&v) { NodeKind::And } else { NodeKind::Or })).collect();
    ConstraintGraph::new(graph, weights, kinds).expect("construction keeps the discipline")
}

/// Edges of a cycle avoiding `blocked`, found by a random walk that stops at
/// the first repeated vertex.
fn random_cycle<R: Rng>(rng: &mut R, g: &Multigraph, blocked: &BTreeSet<VertexId>) -> Option<Vec<EdgeId>> {
    let adj = g.adjacency();
    let free: Vec<VertexId> = g.vertices.iter().copied().filter(|v| !blocked.contains(v)).collect();
    let mut cur = *free.choose(rng)?;
    let mut path: Vec<VertexId> = vec![cur];
    let mut edges: Vec<EdgeId> = Vec::new();
    loop {
        let last = edges.last().copied();
        let options: Vec<(EdgeId, VertexId)> =
            adj[&cur].iter().copied().filter(|&(e, w)| Some(e) != last && !blocked.contains(&w)).collect();
        let &(e, w) = options.choose(rng)?;
        edges.push(e);
        if let Some(k) = path.iter().position(|&x| x == w) {
            return Some(edges[k..].to_vec());
        }
        path.push(w);
        cur = w;
    }
}

/// All legal configurations, in order of the orientation bit pattern (bit
/// `k` set when the `k`-th edge points along its referential orientation).
pub fn legal_configurations(g: &ConstraintGraph) -> Vec<NclConfiguration> {
    let ids: Vec<EdgeId> = g.edges().collect();
    assert!(ids.len() <= 24, "enumeration is exponential in the edge count");
    (0u32..1 << ids.len())
        .map(|bits| -> NclConfiguration {
            ids.iter()
                .enumerate()
                .map(|(k, &e)| {
                    let (u, v) = g.referential(e);
                    (e, if bits >> k & 1 == 1 { v } else { u })
                })
                .collect::<BTreeMap<_, _>>()
        })
        .filter(|c| is_legal(g, c))
        .collect()
}
