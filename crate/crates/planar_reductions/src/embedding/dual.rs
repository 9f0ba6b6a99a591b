//! Dual embeddings and equivalence of embeddings up to renaming.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Dart, EdgeId, Embedding, EmbeddingError, Multigraph, Result};

impl Embedding {
    /// The dual embedding.
    ///
    /// Dual vertices carry the primal face ids and dual faces carry the primal
    /// vertex ids; dual edge `e` joins the two faces along primal edge `e`.
    /// Dual dart `(e, s)` runs from the face of primal dart `(e, s)` to the
    /// face of its reverse. The dual face of `v` lists the primal darts
    /// entering `v`, each followed by `phi⁻¹` of its reverse, which walks
    /// around `v` clockwise.
    pub fn dual(&self) -> Result<Embedding> {
        if !self.graph.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        // A lone vertex bounds one face with no darts; its dual is again a lone vertex.
        if self.graph.edges.is_empty() && self.graph.vertices.len() == 1 {
            let mut dual = Embedding::single_vertex(self.next_face);
            dual.next_face = self.next_vertex;
            return Ok(dual);
        }
        if self.faces.is_empty() || !self.verify_planar()? {
            return Err(EmbeddingError::NonPlanar);
        }
        let pos = self.dart_positions();
        let mut graph = Multigraph::new();
        graph.vertices = self.faces.keys().copied().collect();
        for &e in self.graph.edges.keys() {
            graph.insert_edge(e, pos[&Dart::new(e, 0)].0, pos[&Dart::new(e, 1)].0);
        }
        let mut faces = BTreeMap::new();
        let mut seen = BTreeSet::new();
        let mut darts: Vec<Dart> = pos.keys().copied().collect();
        darts.sort_unstable();
        for d in darts {
            if seen.contains(&d) {
                continue;
            }
            let v = self.head(d);
            let mut cycle = Vec::new();
            let mut x = d;
            while seen.insert(x) {
                cycle.push(x);
                x = self.phi_inv(&pos, x.rev());
            }
            faces.insert(v, cycle);
        }
        let outer = self.outer.and_then(|o| self.faces[&o].iter().map(|&d| self.tail(d)).min());
        Ok(Embedding {
            graph,
            faces,
            outer,
            next_vertex: self.next_face,
            next_edge: self.next_edge,
            next_face: self.next_vertex,
        })
    }
}

/// True iff the two embeddings have the same edge ids and the same face
/// structure once each edge is possibly reversed. Vertex and face ids and
/// the outer face are ignored.
pub fn equivalent(a: &Embedding, b: &Embedding) -> bool {
    equivalent_with(a, b).is_some()
}

/// Like [`equivalent`], returning for every edge whether it is reversed.
pub fn equivalent_with(a: &Embedding, b: &Embedding) -> Option<BTreeMap<EdgeId, bool>> {
    let ea: BTreeSet<EdgeId> = a.graph.edges.keys().copied().collect();
    let eb: BTreeSet<EdgeId> = b.graph.edges.keys().copied().collect();
    if ea != eb || a.faces.len() != b.faces.len() || a.graph.vertices.len() != b.graph.vertices.len() {
        return None;
    }
    let pa = a.dart_positions();
    let pb = b.dart_positions();
    if pa.len() != 2 * ea.len() || pb.len() != 2 * eb.len() {
        return None;
    }
    let map = |flip: bool, d: Dart| if flip { d.rev() } else { d };
    let mut flips: BTreeMap<EdgeId, bool> = BTreeMap::new();
    for &start in &ea {
        if flips.contains_key(&start) {
            continue;
        }
        let mut found = None;
        for guess in [false, true] {
            let mut local = flips.clone();
            local.insert(start, guess);
            let mut queue = VecDeque::from([start]);
            let mut ok = true;
            'walk: while let Some(e) = queue.pop_front() {
                for side in 0..2 {
                    let d = Dart::new(e, side);
                    let db = map(local[&e], d);
                    for (x, y) in [(a.phi(&pa, d), b.phi(&pb, db)), (a.phi_inv(&pa, d), b.phi_inv(&pb, db))] {
                        if x.edge != y.edge {
                            ok = false;
                            break 'walk;
                        }
                        let f = x.side != y.side;
                        match local.get(&x.edge) {
                            Some(&g) if g != f => {
                                ok = false;
                                break 'walk;
                            }
                            Some(_) => {}
                            None => {
                                local.insert(x.edge, f);
                                queue.push_back(x.edge);
                            }
                        }
                    }
                }
            }
            if ok {
                found = Some(local);
                break;
            }
        }
        flips = found?;
    }
    Some(flips)
}
