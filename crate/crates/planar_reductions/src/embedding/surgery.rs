//! Edge addition and deletion, vertex relaxation, edge contraction,
//! subdivision, smoothing and star insertion.
//!
//! A corner `(f, i)` is the gap just before dart `i` of face `f`, at the tail
//! of that dart.

use std::collections::BTreeSet;

use super::{Dart, EdgeId, Embedding, EmbeddingError, FaceId, Result, VertexId};

/// Darts `i, i+1, ..., j-1` of a cyclic sequence (empty when `i == j`).
fn segment(face: &[Dart], i: usize, j: usize) -> Vec<Dart> {
    let n = face.len();
    let len = (j + n - i) % n;
    (0..len).map(|k| face[(i + k) % n]).collect()
}

/// Dart of `e` that leaves `from`.
pub(crate) fn dart_leaving(emb: &Embedding, e: EdgeId, from: VertexId) -> Dart {
    if emb.graph.edges[&e].0 == from {
        Dart::new(e, 0)
    } else {
        Dart::new(e, 1)
    }
}

impl Embedding {
    fn corner_vertex(&self, f: FaceId, i: usize) -> Result<VertexId> {
        let face = self.face(f)?;
        let d = face.get(i).ok_or(EmbeddingError::IndexOutOfFace { face: f, index: i })?;
        Ok(self.tail(*d))
    }

    fn first_corner(&self, f: FaceId, v: VertexId) -> Result<usize> {
        self.face(f)?
            .iter()
            .position(|&d| self.tail(d) == v)
            .ok_or(EmbeddingError::VertexNotOnFace { vertex: v, face: f })
    }

    /// Splits face `f` along a path of existing darts running from the corner
    /// `i` to the corner `j`. The part holding corner `j` keeps the id `f`;
    /// the other part gets a fresh id, which is returned.
    pub(crate) fn split_face(&mut self, f: FaceId, i: usize, j: usize, path: &[Dart]) -> FaceId {
        let face = self.faces[&f].clone();
        let back: Vec<Dart> = path.iter().rev().map(|d| d.rev()).collect();
        let mut first = segment(&face, i, j);
        first.extend(back);
        let mut second =
            if i == j { face[j..].iter().chain(&face[..j]).copied().collect() } else { segment(&face, j, i) };
        second.extend_from_slice(path);
        self.faces.insert(f, second);
        self.fresh_face(first)
    }

    /// Adds an edge between the corners `i` and `j` of face `f`.
    ///
    /// With `u`, `v` the corner vertices, the face splits into
    /// `d_i..d_{j-1}, (v→u)` and `d_j..d_{i-1}, (u→v)`; the latter keeps id `f`.
    /// `i == j` adds a loop.
    pub fn add_edge_at_corners(&self, f: FaceId, i: usize, j: usize) -> Result<(Embedding, EdgeId)> {
        let u = self.corner_vertex(f, i)?;
        let v = self.corner_vertex(f, j)?;
        let mut out = self.clone();
        let e = out.fresh_edge(u, v);
        out.split_face(f, i, j, &[Dart::new(e, 0)]);
        Ok((out, e))
    }

    /// Adds an edge `uv` inside face `f`, using the first corners of `u` and `v`.
    pub fn add_edge(&self, u: VertexId, v: VertexId, f: FaceId) -> Result<(Embedding, EdgeId)> {
        let i = self.first_corner(f, u)?;
        let j = self.first_corner(f, v)?;
        self.add_edge_at_corners(f, i, j)
    }

    /// Adds a fresh vertex `w` and the edge `uw` at corner `i` of face `f`.
    pub fn add_pendant_at_corner(&self, f: FaceId, i: usize) -> Result<(Embedding, VertexId, EdgeId)> {
        let u = self.corner_vertex(f, i)?;
        let mut out = self.clone();
        let w = out.fresh_vertex();
        let e = out.fresh_edge(u, w);
        out.faces.get_mut(&f).unwrap().splice(i..i, [Dart::new(e, 0), Dart::new(e, 1)]);
        Ok((out, w, e))
    }

    /// Adds a fresh vertex joined to `u` inside face `f`. On an edgeless
    /// single-vertex embedding the face argument is ignored.
    pub fn add_pendant_edge(&self, u: VertexId, f: FaceId) -> Result<(Embedding, VertexId, EdgeId)> {
        if self.graph.edges.is_empty() {
            if !self.graph.vertices.contains(&u) {
                return Err(EmbeddingError::UnknownVertex(u));
            }
            let mut out = self.clone();
            let w = out.fresh_vertex();
            let e = out.fresh_edge(u, w);
            let face = out.fresh_face(vec![Dart::new(e, 0), Dart::new(e, 1)]);
            out.outer = Some(face);
            return Ok((out, w, e));
        }
        let i = self.first_corner(f, u)?;
        self.add_pendant_at_corner(f, i)
    }

    /// Deletes an edge bordering two distinct faces, merging them. The merged
    /// face keeps the outer id if either face was outer, else the smaller id.
    pub fn delete_edge(&self, e: EdgeId) -> Result<Embedding> {
        if !self.graph.edges.contains_key(&e) {
            return Err(EmbeddingError::UnknownEdge(e));
        }
        let pos = self.dart_positions();
        let d = Dart::new(e, 0);
        let (f1, i1) = pos[&d];
        let (f2, i2) = pos[&d.rev()];
        if f1 == f2 {
            return Err(EmbeddingError::SingleFaceEdge(e));
        }
        let a = &self.faces[&f1];
        let b = &self.faces[&f2];
        let mut merged = segment(a, (i1 + 1) % a.len(), i1);
        merged.extend(segment(b, (i2 + 1) % b.len(), i2));
        let mut out = self.clone();
        out.graph.edges.remove(&e);
        let keep = if self.outer == Some(f2) {
            f2
        } else if self.outer == Some(f1) {
            f1
        } else {
            f1.min(f2)
        };
        out.faces.remove(&f1);
        out.faces.remove(&f2);
        if !merged.is_empty() {
            out.faces.insert(keep, merged);
        }
        if !out.graph.is_connected() {
            return Err(EmbeddingError::WouldDisconnect(e));
        }
        out.fix_outer();
        Ok(out)
    }

    /// Splits `v` into `v` and a fresh `v'` joined by a fresh edge, drawn
    /// across the corners `(f1, i1)` and `(f2, i2)` at `v`. The outgoing darts
    /// from `d_{i1}` up to (not including) `d_{i2}` in rotation order move to `v'`.
    pub fn relax_vertex_at_corners(
        &self,
        f1: FaceId,
        i1: usize,
        f2: FaceId,
        i2: usize,
    ) -> Result<(Embedding, VertexId, EdgeId)> {
        if f1 == f2 {
            return Err(EmbeddingError::FacesNotDistinct);
        }
        let v = self.corner_vertex(f1, i1)?;
        let v2 = self.corner_vertex(f2, i2)?;
        if v != v2 {
            return Err(EmbeddingError::FaceNotIncident { vertex: v, face: f2 });
        }
        let pos = self.dart_positions();
        let start = self.faces[&f1][i1];
        let stop = self.faces[&f2][i2];
        let mut arc = Vec::new();
        let mut o = start;
        while o != stop {
            arc.push(o);
            o = self.rho(&pos, o);
            if o == start {
                return Err(EmbeddingError::MalformedEmbedding(format!("rotation at {v} is broken")));
            }
        }
        let mut out = self.clone();
        let w = out.fresh_vertex();
        for d in arc {
            let ends = out.graph.edges.get_mut(&d.edge).unwrap();
            if d.side == 0 {
                ends.0 = w;
            } else {
                ends.1 = w;
            }
        }
        let e = out.fresh_edge(v, w);
        out.faces.get_mut(&f1).unwrap().insert(i1, Dart::new(e, 0));
        out.faces.get_mut(&f2).unwrap().insert(i2, Dart::new(e, 1));
        Ok((out, w, e))
    }

    /// Vertex relaxation of `v` between faces `f1` and `f2`, using the first
    /// corner of `v` in each face.
    pub fn relax_vertex(&self, v: VertexId, f1: FaceId, f2: FaceId) -> Result<(Embedding, VertexId, EdgeId)> {
        if f1 == f2 {
            return Err(EmbeddingError::FacesNotDistinct);
        }
        let i1 = self.first_corner(f1, v).map_err(|_| EmbeddingError::FaceNotIncident { vertex: v, face: f1 })?;
        let i2 = self.first_corner(f2, v).map_err(|_| EmbeddingError::FaceNotIncident { vertex: v, face: f2 })?;
        self.relax_vertex_at_corners(f1, i1, f2, i2)
    }

    /// Contracts `e = (a, b)`: `b` is merged into `a` and the edge removed.
    /// Rejects loops and edges with a parallel partner.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Embedding> {
        let &(a, b) = self.graph.edges.get(&e).ok_or(EmbeddingError::UnknownEdge(e))?;
        if a == b {
            return Err(EmbeddingError::SelfLoop(e));
        }
        let parallel = self.graph.edges.iter().any(|(&x, &(p, q))| x != e && ((p, q) == (a, b) || (p, q) == (b, a)));
        if parallel {
            return Err(EmbeddingError::ShortCycle(e));
        }
        let mut out = self.clone();
        out.graph.edges.remove(&e);
        out.graph.vertices.remove(&b);
        for ends in out.graph.edges.values_mut() {
            if ends.0 == b {
                ends.0 = a;
            }
            if ends.1 == b {
                ends.1 = a;
            }
        }
        out.faces.retain(|_, darts| {
            darts.retain(|d| d.edge != e);
            !darts.is_empty()
        });
        out.fix_outer();
        Ok(out)
    }

    /// Subdivides `e = (u, v)` with a fresh vertex `w`: `e` becomes `(u, w)`
    /// and a fresh edge `(w, v)` is added.
    pub fn subdivide_edge(&self, e: EdgeId) -> Result<(Embedding, VertexId, EdgeId)> {
        let &(_, v) = self.graph.edges.get(&e).ok_or(EmbeddingError::UnknownEdge(e))?;
        let mut out = self.clone();
        let w = out.fresh_vertex();
        out.graph.edges.get_mut(&e).unwrap().1 = w;
        let e2 = out.fresh_edge(w, v);
        for darts in out.faces.values_mut() {
            let mut next = Vec::with_capacity(darts.len() + 1);
            for &d in darts.iter() {
                if d.edge != e {
                    next.push(d);
                } else if d.side == 0 {
                    next.extend([Dart::new(e, 0), Dart::new(e2, 0)]);
                } else {
                    next.extend([Dart::new(e2, 1), Dart::new(e, 1)]);
                }
            }
            *darts = next;
        }
        Ok((out, w, e2))
    }

    /// Smooths a degree-2 vertex `w` with two distinct neighbours: the
    /// higher-id incident edge disappears and the lower one is re-attached.
    pub fn smooth_vertex(&self, w: VertexId) -> Result<Embedding> {
        if !self.graph.vertices.contains(&w) {
            return Err(EmbeddingError::UnknownVertex(w));
        }
        let incident: Vec<(EdgeId, (VertexId, VertexId))> =
            self.graph.edges.iter().filter(|(_, &(a, b))| a == w || b == w).map(|(&e, &p)| (e, p)).collect();
        let degree = self.graph.degree(w);
        let wrong = EmbeddingError::WrongDegree { vertex: w, degree };
        if degree != 2 || incident.len() != 2 {
            return Err(wrong);
        }
        let far = |(a, b): (VertexId, VertexId)| if a == w { b } else { a };
        let (keep, keep_ends) = incident[0];
        let (drop, drop_ends) = incident[1];
        let y = far(drop_ends);
        if far(keep_ends) == y {
            return Err(wrong);
        }
        let mut out = self.clone();
        out.graph.edges.remove(&drop);
        out.graph.vertices.remove(&w);
        let ends = out.graph.edges.get_mut(&keep).unwrap();
        if ends.0 == w {
            ends.0 = y;
        } else {
            ends.1 = y;
        }
        for darts in out.faces.values_mut() {
            darts.retain(|d| d.edge != drop);
        }
        Ok(out)
    }

    /// Adds a hub vertex inside face `f` with one spoke to each listed corner
    /// (indices sorted ascending, repeats allowed). Between consecutive corners
    /// `p`, `q` the new face reads `s→x_p, d_p..d_{q-1}, x_q→s`. The face
    /// behind the first pair keeps id `f`.
    pub fn insert_star(&self, f: FaceId, corners: &[usize]) -> Result<(Embedding, VertexId, Vec<EdgeId>)> {
        let face = self.face(f)?.to_vec();
        if corners.is_empty() {
            return Err(EmbeddingError::IndexOutOfFace { face: f, index: 0 });
        }
        for w in corners.windows(2) {
            if w[0] > w[1] {
                return Err(EmbeddingError::MalformedEmbedding("star corners must be sorted".into()));
            }
        }
        if let Some(&last) = corners.last() {
            if last >= face.len() {
                return Err(EmbeddingError::IndexOutOfFace { face: f, index: last });
            }
        }
        let mut out = self.clone();
        let s = out.fresh_vertex();
        let spokes: Vec<EdgeId> = corners.iter().map(|&p| out.fresh_edge(s, self.tail(face[p]))).collect();
        let darts: Vec<Dart> = spokes.iter().map(|&e| Dart::new(e, 0)).collect();
        out.place_star(f, corners, &darts);
        Ok((out, s, spokes))
    }

    /// Vertices adjacent to `v` (excluding `v` itself for loops).
    pub fn neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.graph
            .edges
            .values()
            .filter_map(|&(a, b)| {
                if a == v && b != v {
                    Some(b)
                } else if b == v && a != v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Draws existing spokes into face `f`: `spokes[k]` is the dart leaving
    /// the hub towards the vertex of corner `corners[k]`.
    pub(crate) fn place_star(&mut self, f: FaceId, corners: &[usize], spokes: &[Dart]) {
        let face = self.faces.remove(&f).expect("face exists");
        let k = corners.len();
        for idx in 0..k {
            let p = corners[idx];
            let q = corners[(idx + 1) % k];
            let mut darts = vec![spokes[idx]];
            if idx == k - 1 && p == q {
                // All corners coincide: the wrap-around part is the whole face.
                darts.extend(face[p..].iter().chain(&face[..p]));
            } else {
                darts.extend(segment(&face, p, q));
            }
            darts.push(spokes[(idx + 1) % k].rev());
            if idx == 0 {
                self.faces.insert(f, darts);
            } else {
                self.fresh_face(darts);
            }
        }
    }
}
