//! Planar cycle augmentation: given a connected planar graph `G` and a vertex
//! subset `V'`, find a cycle through exactly the vertices of `V'` whose
//! addition keeps `G` planar.
//!
//! The general problem is hard, so [`brute_force_vprime_cycle`] only serves
//! as an oracle on small inputs. The constructive route goes through a kite
//! graph: a bipartite Eulerian graph between `V'` and fresh face vertices in
//! which every `V'` vertex has degree 2. [`build_kite_from_matching`] derives
//! one from a dually connected matching and [`compute_vprime_cycle`] merges
//! its faces until a single cycle is left.

mod kite;
mod merge;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::embedding::{compute_embedding, EdgeId, Embedding, EmbeddingError, Multigraph, VertexId};

pub use kite::{build_kite_from_matching, KiteGraph};
pub use merge::{compute_vprime_cycle, compute_vprime_cycle_traced, verify_separation, EdgePartition};

/// Default bound on `|V'|` for the exhaustive search.
pub const BRUTE_FORCE_VPRIME_CAP: usize = 10;

/// Default bound on `|V'|` for the matching search.
pub const MATCHING_SEARCH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleAugmentError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("|V'| = {size} exceeds the search cap {cap}")]
    InstanceTooLarge { size: usize, cap: usize },
    #[error("edge set is not a dually connected matching")]
    NotDuallyConnectedMatching,
    #[error("invalid kite graph: {0}")]
    InvalidKite(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("augmented graph is not planar or not embedded")]
    NonPlanarAugmented,
    #[error("cycle, partition and graph do not fit together: {0}")]
    PartitionMismatch(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

pub type Result<T> = std::result::Result<T, CycleAugmentError>;

/// A connected planar multigraph with a fixed embedding and the vertex
/// subset the cycle must visit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentInstance {
    pub embedding: Embedding,
    pub vprime: BTreeSet<VertexId>,
}

impl AugmentInstance {
    /// Embeds `g` with the default embedder.
    pub fn new(g: &Multigraph, vprime: BTreeSet<VertexId>) -> Result<Self> {
        let embedding = compute_embedding(g).map_err(|e| match e {
            EmbeddingError::NonPlanar => CycleAugmentError::InvalidInstance("graph is not planar".into()),
            EmbeddingError::Disconnected => CycleAugmentError::InvalidInstance("graph is not connected".into()),
            other => other.into(),
        })?;
        Self::with_embedding(embedding, vprime)
    }

    /// Uses a given embedding of `G`, which fixes the faces the kite lives in.
    pub fn with_embedding(embedding: Embedding, vprime: BTreeSet<VertexId>) -> Result<Self> {
        if !embedding.graph().is_connected() {
            return Err(CycleAugmentError::InvalidInstance("graph is not connected".into()));
        }
        if !embedding.verify_planar()? {
            return Err(CycleAugmentError::InvalidInstance("embedding is not planar".into()));
        }
        if vprime.len() < 3 {
            return Err(CycleAugmentError::InvalidInstance(format!("|V'| = {} < 3", vprime.len())));
        }
        if let Some(v) = vprime.iter().find(|v| !embedding.graph().vertices.contains(v)) {
            return Err(CycleAugmentError::InvalidInstance(format!("vertex {v} of V' is not in the graph")));
        }
        Ok(AugmentInstance { embedding, vprime })
    }

    pub fn graph(&self) -> &Multigraph {
        self.embedding.graph()
    }
}

/// A cycle through every vertex of `V'` once, with the edge ids it received
/// and an embedding of `G` plus the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPrimeCycle {
    /// Cyclic vertex order, starting at the smallest vertex.
    pub order: Vec<VertexId>,
    /// `edges[k]` joins `order[k]` and `order[k + 1]` (cyclically).
    pub edges: Vec<EdgeId>,
    pub embedding: Embedding,
}

impl VPrimeCycle {
    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }
}

/// `g` plus fresh edges along the cyclic `order`, and their ids.
pub fn augmented_graph(g: &Multigraph, order: &[VertexId]) -> (Multigraph, Vec<EdgeId>) {
    let mut h = g.clone();
    let edges = (0..order.len()).map(|k| h.push_edge(order[k], order[(k + 1) % order.len()])).collect();
    (h, edges)
}

/// Exhaustive search with the default cap.
pub fn brute_force_vprime_cycle(inst: &AugmentInstance) -> Result<Option<VPrimeCycle>> {
    brute_force_vprime_cycle_with_cap(inst, BRUTE_FORCE_VPRIME_CAP)
}

/// Tries every cyclic order of `V'` up to rotation and reflection, in
/// lexicographic order, and returns the first whose addition keeps the
/// multigraph planar.
pub fn brute_force_vprime_cycle_with_cap(inst: &AugmentInstance, cap: usize) -> Result<Option<VPrimeCycle>> {
    let n = inst.vprime.len();
    if n > cap {
        return Err(CycleAugmentError::InstanceTooLarge { size: n, cap });
    }
    let verts: Vec<VertexId> = inst.vprime.iter().copied().collect();
    let mut rest: Vec<VertexId> = verts[1..].to_vec();
    loop {
        // Reflections are skipped by requiring the second vertex below the last.
        if rest[0] < rest[rest.len() - 1] {
            let order: Vec<VertexId> = std::iter::once(verts[0]).chain(rest.iter().copied()).collect();
            let (h, edges) = augmented_graph(inst.graph(), &order);
            if let Ok(embedding) = compute_embedding(&h) {
                return Ok(Some(VPrimeCycle { order, edges, embedding }));
            }
        }
        if !next_permutation(&mut rest) {
            return Ok(None);
        }
    }
}

/// Advances to the next lexicographic permutation; false after the last one.
fn next_permutation(xs: &mut [VertexId]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).expect("a larger element exists");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Whether `eprime` is a `V'`-perfect matching whose dual edges alone
/// connect all faces of the instance embedding.
pub fn is_dually_connected_matching(inst: &AugmentInstance, eprime: &BTreeSet<EdgeId>) -> bool {
    let g = inst.graph();
    let mut covered = BTreeSet::new();
    for e in eprime {
        let Some(&(u, v)) = g.edges.get(e) else { return false };
        if u == v || !inst.vprime.contains(&u) || !inst.vprime.contains(&v) {
            return false;
        }
        if !covered.insert(u) || !covered.insert(v) {
            return false;
        }
    }
    if covered != inst.vprime {
        return false;
    }
    dual_edges_connect_faces(&inst.embedding, eprime)
}

fn dual_edges_connect_faces(emb: &Embedding, edges: &BTreeSet<EdgeId>) -> bool {
    let pos = emb.dart_positions();
    let mut parent: BTreeMap<usize, usize> = emb.faces().keys().map(|&f| (f, f)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = parent[&x];
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }
    for &e in edges {
        let a = pos[&crate::embedding::Dart::new(e, 0)].0;
        let b = pos[&crate::embedding::Dart::new(e, 1)].0;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent.insert(ra, rb);
    }
    let faces: Vec<usize> = parent.keys().copied().collect();
    let roots: BTreeSet<usize> = faces.into_iter().map(|f| find(&mut parent, f)).collect();
    roots.len() == 1
}

/// Searches for a dually connected matching by enumerating `V'`-perfect
/// matchings (smallest uncovered vertex first, edges by ascending id).
/// Experimental helper for small inputs: the count of matchings can be
/// exponential.
pub fn find_dually_connected_matching(inst: &AugmentInstance, cap: usize) -> Result<Option<BTreeSet<EdgeId>>> {
    let n = inst.vprime.len();
    if n > cap {
        return Err(CycleAugmentError::InstanceTooLarge { size: n, cap });
    }
    if n % 2 == 1 {
        return Ok(None);
    }
    let g = inst.graph();
    let candidates: Vec<(EdgeId, VertexId, VertexId)> = g
        .edges
        .iter()
        .filter(|(_, &(u, v))| u != v && inst.vprime.contains(&u) && inst.vprime.contains(&v))
        .map(|(&e, &(u, v))| (e, u, v))
        .collect();
    let mut chosen = BTreeSet::new();
    let mut covered = BTreeSet::new();
    Ok(search_matching(inst, &candidates, &mut chosen, &mut covered).then_some(chosen))
}

fn search_matching(
    inst: &AugmentInstance,
    candidates: &[(EdgeId, VertexId, VertexId)],
    chosen: &mut BTreeSet<EdgeId>,
    covered: &mut BTreeSet<VertexId>,
) -> bool {
    let Some(&v) = inst.vprime.iter().find(|v| !covered.contains(v)) else {
        return dual_edges_connect_faces(&inst.embedding, chosen);
    };
    for &(e, a, b) in candidates {
        let w = if a == v {
            b
        } else if b == v {
            a
        } else {
            continue;
        };
        if covered.contains(&w) {
            continue;
        }
        chosen.insert(e);
        covered.extend([v, w]);
        if search_matching(inst, candidates, chosen, covered) {
            return true;
        }
        chosen.remove(&e);
        covered.remove(&v);
        covered.remove(&w);
    }
    false
}
