//! Face merging on a kite graph down to a single cycle through `V'`.

use std::collections::{BTreeMap, BTreeSet};

use super::kite::check_coloring;
use super::{AugmentInstance, CycleAugmentError, KiteGraph, Result, VPrimeCycle};
use crate::embedding::{Color, Dart, EdgeId, Embedding, FaceId, Multigraph, VertexId};

/// Edges of `G` split by the colour of the kite face they lie in.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgePartition {
    pub red: BTreeSet<EdgeId>,
    pub blue: BTreeSet<EdgeId>,
}

pub fn compute_vprime_cycle(inst: &AugmentInstance, kite: &KiteGraph) -> Result<(VPrimeCycle, EdgePartition)> {
    compute_vprime_cycle_traced(inst, kite).map(|(c, p, _)| (c, p))
}

/// Like [`compute_vprime_cycle`], also returning the number of kite faces
/// before each merge and at the end.
///
/// Each round picks the smallest kite vertex with two distinct incident
/// faces of the same colour (the lexicographically smallest such pair of
/// face ids), relaxes it between those faces and deletes the new edge,
/// which merges them. Colours live on darts, so the merged face keeps the
/// colour of its parents. Once two faces remain the kite graph is a cycle
/// and its face vertices are smoothed away.
pub fn compute_vprime_cycle_traced(
    inst: &AugmentInstance,
    kite: &KiteGraph,
) -> Result<(VPrimeCycle, EdgePartition, Vec<usize>)> {
    kite.validate(inst)?;
    let coloring = &kite.coloring;
    let mut joint = kite.embedding.clone();
    let kite_edges = &kite.kite_edges;
    let partition = partition_edges(&joint, kite_edges, coloring)?;

    let mut trace = Vec::new();
    loop {
        let k = joint.restrict(kite_edges);
        check_coloring(&k, coloring).map_err(|m| internal(&m))?;
        check_kite_shape(&k, &inst.vprime)?;
        let faces = k.face_count();
        if let Some(&prev) = trace.last() {
            if faces >= prev {
                return Err(internal("face count did not decrease"));
            }
        }
        trace.push(faces);
        if faces <= 2 {
            break;
        }
        let (f, o1, o2) =
            select_faces(&k, coloring).ok_or_else(|| internal("no two faces of one colour share a vertex"))?;
        let pos = joint.dart_positions();
        let (j1, i1) = pos[&o1];
        let (j2, i2) = pos[&o2];
        let (relaxed, _, e) = joint.relax_vertex_at_corners(j1, i1, j2, i2)?;
        debug_assert!(relaxed.graph().vertices.contains(&f));
        joint = relaxed.delete_edge(e)?;
    }

    let k = joint.restrict(kite_edges);
    if k.graph().degrees().values().any(|&d| d != 2) {
        return Err(internal("two-face kite graph is not a cycle"));
    }
    for &w in k.graph().vertices.iter().filter(|w| !inst.vprime.contains(w)) {
        joint = joint.smooth_vertex(w)?;
    }
    let cycle_edges: BTreeSet<EdgeId> =
        kite_edges.iter().copied().filter(|e| joint.graph().edges.contains_key(e)).collect();
    let (order, edges) = walk_cycle(&joint.graph().edge_subgraph(&cycle_edges))?;
    if order.iter().copied().collect::<BTreeSet<_>>() != inst.vprime || order.len() != inst.vprime.len() {
        return Err(internal("cycle does not visit V' exactly once"));
    }
    Ok((VPrimeCycle { order, edges, embedding: joint }, partition, trace))
}

fn internal(msg: &str) -> CycleAugmentError {
    CycleAugmentError::InternalInvariantViolation(msg.to_string())
}

/// Colours each edge of `G` by the kite face it lies in. Joint faces glued
/// along `G` edges form one kite face, which is coloured by any kite dart
/// on its boundary.
fn partition_edges(
    joint: &Embedding,
    kite_edges: &BTreeSet<EdgeId>,
    coloring: &BTreeMap<Dart, Color>,
) -> Result<EdgePartition> {
    let pos = joint.dart_positions();
    let g_edges: Vec<EdgeId> = joint.graph().edges.keys().copied().filter(|e| !kite_edges.contains(e)).collect();
    let mut region: BTreeMap<FaceId, FaceId> = joint.faces().keys().map(|&f| (f, f)).collect();
    fn root(region: &BTreeMap<FaceId, FaceId>, mut f: FaceId) -> FaceId {
        while region[&f] != f {
            f = region[&f];
        }
        f
    }
    for &e in &g_edges {
        let a = root(&region, pos[&Dart::new(e, 0)].0);
        let b = root(&region, pos[&Dart::new(e, 1)].0);
        region.insert(a.max(b), a.min(b));
    }
    let mut color: BTreeMap<FaceId, Color> = BTreeMap::new();
    for (&f, ds) in joint.faces() {
        for d in ds.iter().filter(|d| kite_edges.contains(&d.edge)) {
            if *color.entry(root(&region, f)).or_insert(coloring[d]) != coloring[d] {
                return Err(internal(&format!("kite face around joint face {f} has two colours")));
            }
        }
    }
    let mut part = EdgePartition::default();
    for e in g_edges {
        let c = color
            .get(&root(&region, pos[&Dart::new(e, 0)].0))
            .ok_or_else(|| internal(&format!("edge {e} lies in no kite face")))?;
        if *c == Color::Red { &mut part.red } else { &mut part.blue }.insert(e);
    }
    Ok(part)
}

/// Kite invariants that the merges must keep: bipartite between `V'` and
/// the rest, `V'` vertices of degree 2, all degrees even, connected.
fn check_kite_shape(k: &Embedding, vprime: &BTreeSet<VertexId>) -> Result<()> {
    let g = k.graph();
    if !crate::embedding::is_eulerian(g) {
        return Err(internal("kite graph stopped being Eulerian"));
    }
    for (&e, &(a, b)) in &g.edges {
        if vprime.contains(&a) == vprime.contains(&b) {
            return Err(internal(&format!("kite edge {e} stopped being bipartite")));
        }
    }
    if vprime.iter().any(|&v| g.degree(v) != 2) {
        return Err(internal("a V' vertex changed degree"));
    }
    Ok(())
}

/// Smallest vertex with two distinct same-coloured faces, and for each of
/// those faces the first dart leaving the vertex.
fn select_faces(k: &Embedding, coloring: &BTreeMap<Dart, Color>) -> Option<(VertexId, Dart, Dart)> {
    let mut at: BTreeMap<VertexId, BTreeMap<FaceId, Dart>> = BTreeMap::new();
    for (&f, ds) in k.faces() {
        for &d in ds {
            at.entry(k.tail(d)).or_default().entry(f).or_insert(d);
        }
    }
    for (v, faces) in at {
        let list: Vec<(FaceId, Dart)> = faces.into_iter().collect();
        for (i, &(_, d1)) in list.iter().enumerate() {
            for &(_, d2) in &list[i + 1..] {
                if coloring[&d1] == coloring[&d2] {
                    return Some((v, d1, d2));
                }
            }
        }
    }
    None
}

/// Vertex order and edge order of a simple cycle, starting at its smallest
/// vertex and leaving along its smaller edge.
fn walk_cycle(c: &Multigraph) -> Result<(Vec<VertexId>, Vec<EdgeId>)> {
    let adj = c.adjacency();
    let start = *c.vertices.iter().next().ok_or_else(|| internal("empty cycle"))?;
    let mut order = vec![start];
    let mut edges = Vec::new();
    let (mut prev_edge, mut cur) = adj[&start][0];
    edges.push(prev_edge);
    while cur != start {
        order.push(cur);
        let &(e, next) = adj[&cur].iter().find(|(e, _)| *e != prev_edge).ok_or_else(|| internal("cycle breaks"))?;
        edges.push(e);
        prev_edge = e;
        cur = next;
        if order.len() > c.vertices.len() {
            return Err(internal("cycle does not close"));
        }
    }
    if edges.len() != c.edges.len() {
        return Err(internal("cycle edges form more than one cycle"));
    }
    Ok((order, edges))
}

/// Whether `cycle` separates the red edges from the blue ones in its
/// embedding of `G` plus the cycle. An empty class is separated trivially.
pub fn verify_separation(g: &Multigraph, cycle: &VPrimeCycle, part: &EdgePartition) -> Result<bool> {
    let emb = &cycle.embedding;
    if !emb.verify_planar().map_err(|_| CycleAugmentError::NonPlanarAugmented)? {
        return Err(CycleAugmentError::NonPlanarAugmented);
    }
    let cycle_edges = cycle.edge_set();
    let rest: BTreeMap<EdgeId, (VertexId, VertexId)> =
        emb.graph().edges.iter().filter(|(e, _)| !cycle_edges.contains(e)).map(|(&e, &p)| (e, p)).collect();
    if rest != g.edges || cycle_edges.len() != cycle.edges.len() {
        return Err(CycleAugmentError::PartitionMismatch("embedding is not the graph plus the cycle".into()));
    }
    let classes: BTreeSet<EdgeId> = part.red.union(&part.blue).copied().collect();
    if !part.red.is_disjoint(&part.blue) || classes != g.edges.keys().copied().collect() {
        return Err(CycleAugmentError::PartitionMismatch("red and blue do not partition the edges".into()));
    }
    let sides = |set: &BTreeSet<EdgeId>| -> Result<BTreeSet<bool>> {
        set.iter().map(|&e| Ok(emb.side_of_cycle(&cycle_edges, &BTreeSet::from([e]))?)).collect()
    };
    let red = sides(&part.red)?;
    let blue = sides(&part.blue)?;
    Ok(red.len() <= 1 && blue.len() <= 1 && red.is_disjoint(&blue))
}
