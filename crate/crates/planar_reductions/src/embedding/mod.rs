//! Combinatorial planar embeddings of multigraphs.
//!
//! An embedding stores every face as a cyclic sequence of darts (edge
//! occurrences). The face lies to the right of each of its darts, so inner
//! faces read clockwise and the outer face reads counter-clockwise. From the
//! faces we derive the successor map `phi` (next dart in the same face) and the
//! rotation `rho(o) = phi(rev(o))` around the tail of an outgoing dart `o`.
//!
//! Every operation takes `&self` and returns a new embedding. Ids are never
//! reused: each embedding carries monotone counters for vertices, edges and
//! faces.

mod dual;
pub mod io;
mod planarity;
pub mod random;
mod surgery;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dual::{equivalent, equivalent_with};
pub use planarity::{compute_embedding, is_planar};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("graph is not planar")]
    NonPlanar,
    #[error("graph is not connected")]
    Disconnected,
    #[error("malformed embedding: {0}")]
    MalformedEmbedding(String),
    #[error("index {index} is outside face {face}")]
    IndexOutOfFace { face: FaceId, index: usize },
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {vertex} does not lie on face {face}")]
    VertexNotOnFace { vertex: VertexId, face: FaceId },
    #[error("edge {0} borders a single face")]
    SingleFaceEdge(EdgeId),
    #[error("deleting edge {0} would disconnect the graph")]
    WouldDisconnect(EdgeId),
    #[error("relaxation needs two distinct faces")]
    FacesNotDistinct,
    #[error("face {face} is not incident to vertex {vertex}")]
    FaceNotIncident { vertex: VertexId, face: FaceId },
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("edge {0} has a parallel edge")]
    ShortCycle(EdgeId),
    #[error("vertex {vertex} has degree {degree}, expected 2 with distinct neighbours")]
    WrongDegree { vertex: VertexId, degree: usize },
    #[error("dual graph is not bipartite")]
    NotEulerian,
    #[error("subgraph touches {0} faces instead of exactly one")]
    NotEmbeddedInSingleFace(usize),
    #[error("edge sets do not partition the edges of the embedding")]
    InvalidPartition,
}

pub type Result<T> = std::result::Result<T, EmbeddingError>;

/// Undirected multigraph with stable ids. Parallel edges and loops allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph whose edges get ids `0..edges.len()` in the given order.
    pub fn from_edges(vertices: impl IntoIterator<Item = VertexId>, edges: &[(VertexId, VertexId)]) -> Self {
        let mut g = Multigraph::new();
        g.vertices.extend(vertices);
        for (i, &(u, v)) in edges.iter().enumerate() {
            g.vertices.insert(u);
            g.vertices.insert(v);
            g.edges.insert(i, (u, v));
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// Inserts an edge with an explicit id, adding missing endpoints.
    pub fn insert_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) {
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.insert(id, (u, v));
    }

    /// Inserts an edge with the next free id and returns it.
    pub fn push_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        let id = self.edges.keys().next_back().map_or(0, |&e| e + 1);
        self.insert_edge(id, u, v);
        id
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.vertices.iter().next_back().map_or(0, |&v| v + 1)
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.values().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut deg: BTreeMap<VertexId, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(a, b) in self.edges.values() {
            *deg.entry(a).or_default() += 1;
            *deg.entry(b).or_default() += 1;
        }
        deg
    }

    /// Incident (edge, other endpoint) pairs per vertex, ascending by edge id.
    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> {
        let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&e, &(a, b)) in &self.edges {
            adj.entry(a).or_default().push((e, b));
            if a != b {
                adj.entry(b).or_default().push((e, a));
            }
        }
        adj
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(_, w) in &adj[&v] {
                    if seen.insert(w) {
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Subgraph keeping only the given edges and their endpoints.
    pub fn edge_subgraph(&self, keep: &BTreeSet<EdgeId>) -> Multigraph {
        let mut g = Multigraph::new();
        for &e in keep {
            if let Some(&(u, v)) = self.edges.get(&e) {
                g.insert_edge(e, u, v);
            }
        }
        g
    }
}

/// True iff the graph is connected and every degree is even (loops count twice).
pub fn is_eulerian(g: &Multigraph) -> bool {
    !g.vertices.is_empty() && g.is_connected() && g.degrees().values().all(|d| d % 2 == 0)
}

/// One occurrence of an edge. Side 0 runs from the first endpoint to the
/// second, side 1 the other way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub edge: EdgeId,
    pub side: u8,
}

impl Dart {
    pub fn new(edge: EdgeId, side: u8) -> Self {
        Dart { edge, side }
    }

    pub fn rev(self) -> Dart {
        Dart { edge: self.edge, side: 1 - self.side }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

pub type FaceColoring = BTreeMap<FaceId, Color>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub(crate) graph: Multigraph,
    pub(crate) faces: BTreeMap<FaceId, Vec<Dart>>,
    pub(crate) outer: Option<FaceId>,
    pub(crate) next_vertex: VertexId,
    pub(crate) next_edge: EdgeId,
    pub(crate) next_face: FaceId,
}

impl Embedding {
    /// Assembles an embedding from raw parts. Counters start past the largest id.
    pub fn from_parts(graph: Multigraph, faces: BTreeMap<FaceId, Vec<Dart>>, outer: Option<FaceId>) -> Result<Self> {
        if let Some(f) = outer {
            if !faces.contains_key(&f) {
                return Err(EmbeddingError::UnknownFace(f));
            }
        }
        let next_vertex = graph.next_vertex_id();
        let next_edge = graph.edges.keys().next_back().map_or(0, |&e| e + 1);
        let next_face = faces.keys().next_back().map_or(0, |&f| f + 1);
        Ok(Embedding { graph, faces, outer, next_vertex, next_edge, next_face })
    }

    /// The trivial embedding of a single vertex: no edges, no faces.
    pub fn single_vertex(v: VertexId) -> Self {
        let mut graph = Multigraph::new();
        graph.add_vertex(v);
        Embedding { graph, faces: BTreeMap::new(), outer: None, next_vertex: v + 1, next_edge: 0, next_face: 0 }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn faces(&self) -> &BTreeMap<FaceId, Vec<Dart>> {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> Result<&[Dart]> {
        self.faces.get(&f).map(Vec::as_slice).ok_or(EmbeddingError::UnknownFace(f))
    }

    pub fn outer(&self) -> Option<FaceId> {
        self.outer
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Same embedding with another designated outer face.
    pub fn with_outer(&self, f: FaceId) -> Result<Self> {
        self.face(f)?;
        let mut out = self.clone();
        out.outer = Some(f);
        Ok(out)
    }

    /// Equality of graph, faces (as cyclic sequences) and outer face,
    /// ignoring the id counters.
    pub fn same_structure(&self, other: &Embedding) -> bool {
        self.graph == other.graph
            && self.outer == other.outer
            && self.faces.len() == other.faces.len()
            && self
                .faces
                .iter()
                .all(|(f, ds)| other.faces.get(f).is_some_and(|o| canonical_cycle(o) == canonical_cycle(ds)))
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        let (u, v) = self.graph.edges[&d.edge];
        if d.side == 0 {
            u
        } else {
            v
        }
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(d.rev())
    }

    /// Face id and index of every dart.
    pub fn dart_positions(&self) -> HashMap<Dart, (FaceId, usize)> {
        let mut pos = HashMap::new();
        for (&f, darts) in &self.faces {
            for (i, &d) in darts.iter().enumerate() {
                pos.insert(d, (f, i));
            }
        }
        pos
    }

    pub fn face_of(&self, d: Dart) -> Option<FaceId> {
        self.faces.iter().find(|(_, ds)| ds.contains(&d)).map(|(&f, _)| f)
    }

    /// Next dart in the same face.
    pub(crate) fn phi(&self, pos: &HashMap<Dart, (FaceId, usize)>, d: Dart) -> Dart {
        let (f, i) = pos[&d];
        let face = &self.faces[&f];
        face[(i + 1) % face.len()]
    }

    /// Previous dart in the same face.
    pub(crate) fn phi_inv(&self, pos: &HashMap<Dart, (FaceId, usize)>, d: Dart) -> Dart {
        let (f, i) = pos[&d];
        let face = &self.faces[&f];
        face[(i + face.len() - 1) % face.len()]
    }

    /// Rotation successor of an outgoing dart around its tail.
    pub(crate) fn rho(&self, pos: &HashMap<Dart, (FaceId, usize)>, o: Dart) -> Dart {
        self.phi(pos, o.rev())
    }

    /// Outgoing darts at every vertex in rotation order, starting from the smallest dart.
    pub fn rotation_system(&self) -> BTreeMap<VertexId, Vec<Dart>> {
        let pos = self.dart_positions();
        let mut out: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        let mut darts: Vec<Dart> = pos.keys().copied().collect();
        darts.sort_unstable();
        for d in darts {
            if seen.contains(&d) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut o = d;
            while seen.insert(o) {
                cycle.push(o);
                o = self.rho(&pos, o);
            }
            out.entry(self.tail(d)).or_default().extend(cycle);
        }
        out
    }

    /// Vertices met along a face, one per dart tail.
    pub fn face_vertices(&self, f: FaceId) -> Result<Vec<VertexId>> {
        Ok(self.face(f)?.iter().map(|&d| self.tail(d)).collect())
    }

    /// The other occurrence of the dart at `(f, i)`, as `(face, index)`. 0-based.
    pub fn other(&self, f: FaceId, i: usize) -> Result<(FaceId, usize)> {
        let face = self.face(f)?;
        let d = *face.get(i).ok_or(EmbeddingError::IndexOutOfFace { face: f, index: i })?;
        let r = d.rev();
        for (&g, darts) in &self.faces {
            if let Some(j) = darts.iter().position(|&x| x == r) {
                return Ok((g, j));
            }
        }
        Err(EmbeddingError::MalformedEmbedding(format!("dart {r:?} missing")))
    }

    /// Checks the dart partition and chaining, then Euler's formula.
    ///
    /// Structural defects (repeated or unknown darts, broken chains, empty
    /// faces) are errors. Missing darts only make the result `false`.
    pub fn verify_planar(&self) -> Result<bool> {
        let mut seen = BTreeSet::new();
        for (&f, darts) in &self.faces {
            if darts.is_empty() {
                return Err(EmbeddingError::MalformedEmbedding(format!("face {f} is empty")));
            }
            for (i, &d) in darts.iter().enumerate() {
                if d.side > 1 || !self.graph.edges.contains_key(&d.edge) {
                    return Err(EmbeddingError::MalformedEmbedding(format!("face {f} has unknown dart {d:?}")));
                }
                if !seen.insert(d) {
                    return Err(EmbeddingError::MalformedEmbedding(format!("dart {d:?} appears twice")));
                }
                let next = darts[(i + 1) % darts.len()];
                if self.graph.edges.contains_key(&next.edge) && self.head(d) != self.tail(next) {
                    return Err(EmbeddingError::MalformedEmbedding(format!("face {f} breaks at index {i}")));
                }
            }
        }
        if self.graph.edges.is_empty() {
            return Ok(self.graph.vertices.len() == 1 && self.faces.is_empty());
        }
        if seen.len() != 2 * self.graph.edges.len() {
            return Ok(false);
        }
        let v = self.graph.vertices.len() as i64;
        let e = self.graph.edges.len() as i64;
        let f = self.faces.len() as i64;
        Ok(v - e + f == 2)
    }

    pub(crate) fn fresh_vertex(&mut self) -> VertexId {
        let v = self.next_vertex;
        self.next_vertex += 1;
        self.graph.add_vertex(v);
        v
    }

    pub(crate) fn fresh_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        let e = self.next_edge;
        self.next_edge += 1;
        self.graph.insert_edge(e, u, v);
        e
    }

    pub(crate) fn fresh_face(&mut self, darts: Vec<Dart>) -> FaceId {
        let f = self.next_face;
        self.next_face += 1;
        self.faces.insert(f, darts);
        f
    }

    /// Mirror image: every face traversed backwards, ids unchanged.
    pub fn mirrored(&self) -> Embedding {
        let mut m = self.clone();
        for ds in m.faces.values_mut() {
            *ds = ds.iter().rev().map(|x| x.rev()).collect();
        }
        m
    }

    pub(crate) fn next_face_id(&self) -> FaceId {
        self.next_face
    }

    pub(crate) fn graph_mut(&mut self) -> &mut Multigraph {
        &mut self.graph
    }

    pub(crate) fn into_parts(self) -> (Multigraph, BTreeMap<FaceId, Vec<Dart>>) {
        (self.graph, self.faces)
    }

    /// Id the next fresh edge will receive.
    pub fn peek_next_edge(&self) -> EdgeId {
        self.next_edge
    }

    pub fn peek_next_vertex(&self) -> VertexId {
        self.next_vertex
    }

    /// The same embedding drawn on `target`, an isomorphic copy of the graph
    /// with the same vertex ids in which edge `e` is called `edge_map[e]`.
    /// Darts are flipped where the copy lists the endpoints the other way.
    pub fn transport(&self, target: &Multigraph, edge_map: &BTreeMap<EdgeId, EdgeId>) -> Result<Embedding> {
        if edge_map.len() != self.graph.edges.len() || target.edges.len() != self.graph.edges.len() {
            return Err(EmbeddingError::InvalidPartition);
        }
        let mut flip = BTreeMap::new();
        for (&e, &(a, b)) in &self.graph.edges {
            let t = *edge_map.get(&e).ok_or(EmbeddingError::UnknownEdge(e))?;
            match target.edges.get(&t) {
                Some(&ends) if ends == (a, b) => flip.insert(e, (t, false)),
                Some(&ends) if ends == (b, a) => flip.insert(e, (t, true)),
                _ => return Err(EmbeddingError::UnknownEdge(t)),
            };
        }
        let faces = self
            .faces
            .iter()
            .map(|(&f, ds)| {
                let moved = ds
                    .iter()
                    .map(|d| {
                        let (t, rev) = flip[&d.edge];
                        Dart::new(t, if rev { 1 - d.side } else { d.side })
                    })
                    .collect();
                (f, moved)
            })
            .collect();
        Embedding::from_parts(target.clone(), faces, self.outer)
    }

    /// Restriction to a subset of edges, obtained by deleting the other darts
    /// from the rotation system and retracing faces. Faces that survive
    /// unchanged keep their id.
    pub fn restrict(&self, keep: &BTreeSet<EdgeId>) -> Embedding {
        let pos = self.dart_positions();
        let graph = self.graph.edge_subgraph(keep);
        let mut out = Embedding {
            graph,
            faces: BTreeMap::new(),
            outer: None,
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
            next_face: self.next_face,
        };
        if keep.is_empty() {
            return out;
        }
        let rho_kept = |o: Dart| {
            let mut x = self.rho(&pos, o);
            while !keep.contains(&x.edge) {
                x = self.rho(&pos, x);
            }
            x
        };
        let old: HashMap<Vec<Dart>, FaceId> = self.faces.iter().map(|(&f, ds)| (canonical_cycle(ds), f)).collect();
        let mut seen = BTreeSet::new();
        let mut traced = Vec::new();
        for &e in keep {
            for side in 0..2 {
                let start = Dart::new(e, side);
                if seen.contains(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = start;
                while seen.insert(d) {
                    face.push(d);
                    d = rho_kept(d.rev());
                }
                traced.push(face);
            }
        }
        let mut fresh = Vec::new();
        for face in traced {
            match old.get(&canonical_cycle(&face)) {
                Some(&f) => {
                    out.faces.insert(f, face);
                }
                None => fresh.push(face),
            }
        }
        // A changed face inherits the smallest free id among the faces its darts came from.
        for face in fresh {
            let mut origins: Vec<FaceId> = face.iter().map(|d| pos[d].0).collect();
            origins.sort_unstable();
            match origins.into_iter().find(|f| !out.faces.contains_key(f)) {
                Some(f) => {
                    out.faces.insert(f, face);
                }
                None => {
                    out.fresh_face(face);
                }
            }
        }
        if let Some(o) = self.outer {
            if out.faces.contains_key(&o) {
                out.outer = Some(o);
            }
        }
        if out.outer.is_none() {
            out.outer = out.largest_face();
        }
        out
    }

    /// Largest face, ties broken by smallest id.
    pub fn largest_face(&self) -> Option<FaceId> {
        self.faces.iter().max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0))).map(|(&f, _)| f)
    }

    /// Proper red/blue colouring of the faces (outer face blue), which exists
    /// iff the dual is bipartite.
    pub fn two_color_faces(&self) -> Result<FaceColoring> {
        let pos = self.dart_positions();
        let mut adj: BTreeMap<FaceId, Vec<FaceId>> = self.faces.keys().map(|&f| (f, Vec::new())).collect();
        for &e in self.graph.edges.keys() {
            let f0 = pos.get(&Dart::new(e, 0)).ok_or_else(|| missing(e))?.0;
            let f1 = pos.get(&Dart::new(e, 1)).ok_or_else(|| missing(e))?.0;
            if f0 == f1 {
                return Err(EmbeddingError::NotEulerian);
            }
            adj.get_mut(&f0).unwrap().push(f1);
            adj.get_mut(&f1).unwrap().push(f0);
        }
        let mut color = FaceColoring::new();
        let mut starts: Vec<FaceId> = self.outer.into_iter().collect();
        starts.extend(self.faces.keys().copied());
        for s in starts {
            if color.contains_key(&s) {
                continue;
            }
            color.insert(s, Color::Blue);
            let mut queue = VecDeque::from([s]);
            while let Some(f) = queue.pop_front() {
                let c = color[&f];
                for &g in &adj[&f] {
                    match color.get(&g) {
                        Some(&cg) if cg == c => return Err(EmbeddingError::NotEulerian),
                        Some(_) => {}
                        None => {
                            color.insert(g, c.other());
                            queue.push_back(g);
                        }
                    }
                }
            }
        }
        Ok(color)
    }

    /// Locates a subgraph H inside a single face of the embedding of G.
    ///
    /// `self` embeds G ∪ H. Returns the restriction to G together with the
    /// id (in that restriction) of the unique G-face that is not a face of
    /// `self`, i.e. the face H was drawn in.
    pub fn locate_subgraph(
        &self,
        g_edges: &BTreeSet<EdgeId>,
        h_edges: &BTreeSet<EdgeId>,
    ) -> Result<(Embedding, FaceId)> {
        let all: BTreeSet<EdgeId> = self.graph.edges.keys().copied().collect();
        if !g_edges.is_disjoint(h_edges) || g_edges.union(h_edges).copied().collect::<BTreeSet<_>>() != all {
            return Err(EmbeddingError::InvalidPartition);
        }
        let eg = self.restrict(g_edges);
        let present: BTreeSet<Vec<Dart>> = self.faces.values().map(|ds| canonical_cycle(ds)).collect();
        let absent: Vec<FaceId> =
            eg.faces.iter().filter(|(_, ds)| !present.contains(&canonical_cycle(ds))).map(|(&f, _)| f).collect();
        if absent.len() != 1 {
            return Err(EmbeddingError::NotEmbeddedInSingleFace(absent.len()));
        }
        Ok((eg, absent[0]))
    }

    /// Which side of a cycle an item lies on.
    ///
    /// `cycle` must form a simple cycle in the embedded graph and `item` must
    /// be disjoint from it. Faces reachable from the face of the side-0 dart
    /// of the smallest cycle edge without crossing the cycle form the `true`
    /// side. Fails with `NotEmbeddedInSingleFace` when the item straddles
    /// both sides.
    pub fn side_of_cycle(&self, cycle: &BTreeSet<EdgeId>, item: &BTreeSet<EdgeId>) -> Result<bool> {
        let anchor = Dart::new(*cycle.iter().next().ok_or(EmbeddingError::InvalidPartition)?, 0);
        if !cycle.is_disjoint(item) || item.is_empty() {
            return Err(EmbeddingError::InvalidPartition);
        }
        let pos = self.dart_positions();
        let face_of = |d: Dart| pos.get(&d).map(|p| p.0).ok_or(EmbeddingError::UnknownEdge(d.edge));
        let start = face_of(anchor)?;
        let mut region = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            for &d in &self.faces[&f] {
                if !cycle.contains(&d.edge) {
                    let g = face_of(d.rev())?;
                    if region.insert(g) {
                        stack.push(g);
                    }
                }
            }
        }
        let sides = item
            .iter()
            .map(|&e| Ok(region.contains(&face_of(Dart::new(e, 0))?)))
            .collect::<Result<BTreeSet<bool>>>()?;
        match sides.len() {
            1 => Ok(sides.contains(&true)),
            n => Err(EmbeddingError::NotEmbeddedInSingleFace(n)),
        }
    }

    /// Re-labels the outer face after surgery if it disappeared.
    pub(crate) fn fix_outer(&mut self) {
        if let Some(o) = self.outer {
            if !self.faces.contains_key(&o) {
                self.outer = self.faces.keys().next().copied();
            }
        } else if !self.faces.is_empty() {
            self.outer = self.largest_face();
        }
    }

    /// Graphviz rendering of the underlying graph.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph embedding {\n");
        for v in &self.graph.vertices {
            s.push_str(&format!("  v{v};\n"));
        }
        for (e, (u, v)) in &self.graph.edges {
            s.push_str(&format!("  v{u} -- v{v} [label=\"e{e}\"];\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Graphviz rendering of the graph with its dual overlaid in dashed style.
    pub fn to_dot_with_dual(&self) -> String {
        let pos = self.dart_positions();
        let mut s = String::from("graph embedding {\n");
        for v in &self.graph.vertices {
            s.push_str(&format!("  v{v};\n"));
        }
        for f in self.faces.keys() {
            s.push_str(&format!("  f{f} [shape=box, style=dashed];\n"));
        }
        for (e, (u, v)) in &self.graph.edges {
            s.push_str(&format!("  v{u} -- v{v} [label=\"e{e}\"];\n"));
            if let (Some(a), Some(b)) = (pos.get(&Dart::new(*e, 0)), pos.get(&Dart::new(*e, 1))) {
                s.push_str(&format!("  f{} -- f{} [style=dashed];\n", a.0, b.0));
            }
        }
        s.push_str("}\n");
        s
    }
}

fn missing(e: EdgeId) -> EmbeddingError {
    EmbeddingError::MalformedEmbedding(format!("dart of edge {e} missing"))
}

/// Rotation of a cyclic dart sequence starting at its smallest dart.
pub fn canonical_cycle(darts: &[Dart]) -> Vec<Dart> {
    match darts.iter().enumerate().min_by_key(|(_, d)| **d) {
        None => Vec::new(),
        Some((k, _)) => darts[k..].iter().chain(&darts[..k]).copied().collect(),
    }
}

#[cfg(test)]
mod tests;
