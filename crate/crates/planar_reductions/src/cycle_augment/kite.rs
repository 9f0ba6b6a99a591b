//! Kite graphs and their construction from dually connected matchings.

use std::collections::{BTreeMap, BTreeSet};

use super::{is_dually_connected_matching, AugmentInstance, CycleAugmentError, Result};
use crate::embedding::{equivalent, is_eulerian, Color, Dart, EdgeId, Embedding, FaceId, Multigraph, VertexId};

/// A kite graph embedded together with `G`.
///
/// `coloring` gives, for every kite dart, the colour of the kite face on its
/// right. Faces of the kite graph alone are the faces of the restriction of
/// `embedding` to `kite_edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KiteGraph {
    pub embedding: Embedding,
    pub kite_edges: BTreeSet<EdgeId>,
    /// The fresh face vertices.
    pub hubs: BTreeSet<VertexId>,
    pub coloring: BTreeMap<Dart, Color>,
}

impl KiteGraph {
    /// Wraps a joint embedding of `G` and a kite graph, colouring the kite
    /// faces with the outer kite face blue.
    pub fn new(inst: &AugmentInstance, embedding: Embedding, kite_edges: BTreeSet<EdgeId>) -> Result<Self> {
        let k = embedding.restrict(&kite_edges);
        let faces = k.two_color_faces().map_err(|_| invalid("kite graph is not Eulerian"))?;
        let coloring = dart_colors(&k, &faces);
        let hubs = k.graph().vertices.difference(&inst.vprime).copied().collect();
        let kite = KiteGraph { embedding, kite_edges, hubs, coloring };
        kite.validate(inst)?;
        Ok(kite)
    }

    /// The kite graph alone.
    pub fn graph(&self) -> Multigraph {
        self.embedding.graph().edge_subgraph(&self.kite_edges)
    }

    /// Checks the kite-graph conditions and that the colouring is proper.
    pub fn validate(&self, inst: &AugmentInstance) -> Result<()> {
        if !self.embedding.verify_planar()? {
            return Err(invalid("joint embedding is not planar"));
        }
        let g = inst.graph();
        let joint = self.embedding.graph();
        let rest: BTreeMap<EdgeId, (VertexId, VertexId)> =
            joint.edges.iter().filter(|(e, _)| !self.kite_edges.contains(e)).map(|(&e, &p)| (e, p)).collect();
        if rest != g.edges {
            return Err(invalid("non-kite edges differ from the instance graph"));
        }
        if let Some(h) = self.hubs.iter().find(|h| g.vertices.contains(h) || inst.vprime.contains(h)) {
            return Err(invalid(&format!("face vertex {h} is not fresh")));
        }
        let k = self.graph();
        for (&e, &(a, b)) in &k.edges {
            let across = (inst.vprime.contains(&a) && self.hubs.contains(&b))
                || (inst.vprime.contains(&b) && self.hubs.contains(&a));
            if !across {
                return Err(invalid(&format!("kite edge {e} does not join V' to a face vertex")));
            }
        }
        if let Some(v) = inst.vprime.iter().find(|&&v| k.degree(v) != 2) {
            return Err(invalid(&format!("vertex {v} of V' has kite degree {}", k.degree(*v))));
        }
        if !is_eulerian(&k) {
            return Err(invalid("kite graph is not Eulerian"));
        }
        check_coloring(&self.embedding.restrict(&self.kite_edges), &self.coloring).map_err(|m| invalid(&m))
    }
}

fn invalid(msg: &str) -> CycleAugmentError {
    CycleAugmentError::InvalidKite(msg.to_string())
}

fn dart_colors(k: &Embedding, faces: &BTreeMap<FaceId, Color>) -> BTreeMap<Dart, Color> {
    k.faces().iter().flat_map(|(f, ds)| ds.iter().map(move |&d| (d, faces[f]))).collect()
}

/// Every face of `k` monochromatic and every edge between two colours.
pub(super) fn check_coloring(k: &Embedding, coloring: &BTreeMap<Dart, Color>) -> std::result::Result<(), String> {
    for (f, ds) in k.faces() {
        let colors: BTreeSet<Option<&Color>> = ds.iter().map(|d| coloring.get(d)).collect();
        if colors.len() != 1 || colors.contains(&None) {
            return Err(format!("kite face {f} is not coloured uniformly"));
        }
    }
    for &e in k.graph().edges.keys() {
        if coloring.get(&Dart::new(e, 0)) == coloring.get(&Dart::new(e, 1)) {
            return Err(format!("kite edge {e} has the same colour on both sides"));
        }
    }
    Ok(())
}

/// Names one kite edge: the matching edge, which of its endpoints
/// (0 = first), and which of its two faces (0 = the face right of dart 0).
type KiteKey = (EdgeId, u8, u8);

/// Builds the kite graph of a dually connected matching `eprime`.
///
/// Every face `F` of `G` gets a hub joined to both endpoints of each
/// matching edge on its boundary, so each matching edge `uv` between faces
/// `F` and `F'` yields the four edges `Fu, uF', Fv, vF'`. The kite faces
/// holding matching edges are red.
///
/// The joint embedding is drawn by inserting one star per face. Its kite
/// part is cross-checked against the embedding obtained from the dual
/// restricted to the matching by adding the four edges around each dual
/// edge and then deleting the dual edge.
pub fn build_kite_from_matching(inst: &AugmentInstance, eprime: &BTreeSet<EdgeId>) -> Result<KiteGraph> {
    if !is_dually_connected_matching(inst, eprime) {
        return Err(CycleAugmentError::NotDuallyConnectedMatching);
    }
    let g_emb = &inst.embedding;
    let mut joint = g_emb.clone();
    let mut key_of: BTreeMap<EdgeId, KiteKey> = BTreeMap::new();
    let mut hubs = BTreeSet::new();
    let mut red_dart = None;
    for (&f, face) in g_emb.faces() {
        let len = face.len();
        // (corner, rank, key): at a shared corner the spoke closing the
        // previous triangle comes before the one opening the next.
        let mut corners: Vec<(usize, u8, KiteKey)> = Vec::new();
        for (i, d) in face.iter().enumerate() {
            if eprime.contains(&d.edge) {
                corners.push((i, 1, (d.edge, d.side, d.side)));
                corners.push(((i + 1) % len, 0, (d.edge, 1 - d.side, d.side)));
            }
        }
        if corners.is_empty() {
            continue;
        }
        corners.sort();
        let idx: Vec<usize> = corners.iter().map(|c| c.0).collect();
        let (next, hub, spokes) = joint.insert_star(f, &idx)?;
        joint = next;
        hubs.insert(hub);
        for (&(_, rank, key), &e) in corners.iter().zip(&spokes) {
            key_of.insert(e, key);
            if rank == 1 && red_dart.is_none() {
                // Spoke from the hub to the tail of a matching dart: the
                // face on its right holds that matching edge.
                red_dart = Some(Dart::new(e, 0));
            }
        }
    }
    let kite_edges: BTreeSet<EdgeId> = key_of.keys().copied().collect();
    let k = joint.restrict(&kite_edges);
    let faces = k.two_color_faces().map_err(|_| internal("kite graph of a matching is not Eulerian"))?;
    let mut coloring = dart_colors(&k, &faces);
    let red_dart = red_dart.ok_or_else(|| internal("matching is empty"))?;
    if coloring[&red_dart] == Color::Blue {
        coloring.values_mut().for_each(|c| *c = c.other());
    }

    let literal = kite_by_dual_surgery(g_emb, eprime)?;
    let by_key: BTreeMap<KiteKey, EdgeId> = key_of.iter().map(|(&e, &key)| (key, e)).collect();
    if !equivalent(&k, &relabel_edges(&literal.0, &literal.1, &by_key)?) {
        return Err(internal("star embedding of the kite differs from the dual construction"));
    }

    let kite = KiteGraph { embedding: joint, kite_edges, hubs, coloring };
    kite.validate(inst).map_err(|e| internal(&e.to_string()))?;
    Ok(kite)
}

fn internal(msg: &str) -> CycleAugmentError {
    CycleAugmentError::InternalInvariantViolation(msg.to_string())
}

/// The kite embedding grown from the dual restricted to `eprime`: for every
/// dual edge `FF'` a triangle `F, v, F'` on the side of `v` and `F', u, F`
/// on the side of `u`, then `FF'` is deleted.
fn kite_by_dual_surgery(
    g_emb: &Embedding,
    eprime: &BTreeSet<EdgeId>,
) -> Result<(Embedding, BTreeMap<EdgeId, KiteKey>)> {
    let mut emb = g_emb.dual()?.restrict(eprime);
    let mut keys = BTreeMap::new();
    for &x in eprime {
        for side in 0..2u8 {
            // The primal endpoint `1 - side` lies to the right of dual dart (x, side).
            let d = Dart::new(x, side);
            let (f, i) = emb.dart_positions()[&d];
            let (next, w, near) = emb.add_pendant_at_corner(f, i)?;
            emb = next;
            keys.insert(near, (x, 1 - side, side));
            let (f, j) = emb.dart_positions()[&d];
            let face = &emb.faces()[&f];
            let after = (j + 1) % face.len();
            let at_w = face.iter().position(|&o| emb.tail(o) == w).ok_or_else(|| internal("pendant vertex lost"))?;
            let (next, far) = emb.add_edge_at_corners(f, at_w, after)?;
            emb = next;
            keys.insert(far, (x, 1 - side, 1 - side));
        }
        emb = emb.delete_edge(x)?;
    }
    Ok((emb, keys))
}

fn relabel_edges(
    emb: &Embedding,
    keys: &BTreeMap<EdgeId, KiteKey>,
    target: &BTreeMap<KiteKey, EdgeId>,
) -> Result<Embedding> {
    let id =
        |e: EdgeId| keys.get(&e).and_then(|k| target.get(k)).copied().ok_or_else(|| internal("unmatched kite edge"));
    let mut graph = Multigraph::new();
    for (&e, &(u, v)) in &emb.graph().edges {
        graph.insert_edge(id(e)?, u, v);
    }
    let mut faces = BTreeMap::new();
    for (&f, ds) in emb.faces() {
        faces.insert(f, ds.iter().map(|d| Ok(Dart::new(id(d.edge)?, d.side))).collect::<Result<Vec<_>>>()?);
    }
    Ok(Embedding::from_parts(graph, faces, None)?)
}
