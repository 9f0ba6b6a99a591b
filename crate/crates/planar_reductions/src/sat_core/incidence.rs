//! Literal-clause and variable-clause graphs, their augmenting cycles, and
//! the inside/outside validity checks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Cnf, Literal, SatError, Var};
use crate::embedding::{Dart, EdgeId, Embedding, FaceId, Multigraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    VariableClause,
    LiteralClause,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    Clause(usize),
    Literal(Literal),
    Variable(Var),
}

/// Augmenting cycle: a permutation of the variables or of all literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleOrder {
    Variables(Vec<Var>),
    Literals(Vec<Literal>),
}

impl CycleOrder {
    pub fn len(&self) -> usize {
        match self {
            CycleOrder::Variables(v) => v.len(),
            CycleOrder::Literals(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> GraphKind {
        match self {
            CycleOrder::Variables(_) => GraphKind::VariableClause,
            CycleOrder::Literals(_) => GraphKind::LiteralClause,
        }
    }

    fn nodes(&self) -> Vec<Node> {
        match self {
            CycleOrder::Variables(v) => v.iter().map(|&x| Node::Variable(x)).collect(),
            CycleOrder::Literals(l) => l.iter().map(|&x| Node::Literal(x)).collect(),
        }
    }

    /// Checks that the order is a permutation of the `n` variables (or of
    /// all `2n` literals) with at least two entries.
    pub fn validate(&self, n: usize) -> Result<(), SatError> {
        let ok = match self {
            CycleOrder::Variables(v) => v.len() == n && v.iter().copied().collect::<BTreeSet<_>>() == (0..n).collect(),
            CycleOrder::Literals(l) => {
                let all: BTreeSet<Literal> = (0..n).flat_map(|x| [Literal::pos(x), Literal::neg(x)]).collect();
                l.len() == 2 * n && l.iter().copied().collect::<BTreeSet<_>>() == all
            }
        };
        if ok && self.len() >= 2 {
            Ok(())
        } else {
            Err(SatError::CycleIncomplete)
        }
    }
}

/// Bipartite incidence graph, optionally augmented by a cycle through the
/// variable (or literal) nodes and, for the literal kind, paired edges.
///
/// Clause `i` is vertex `i`; variable or literal nodes follow. Clause edges
/// run from the literal (or variable) node to the clause node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub kind: GraphKind,
    pub num_vars: usize,
    pub graph: Multigraph,
    pub nodes: BTreeMap<VertexId, Node>,
    pub vertex_of: BTreeMap<Node, VertexId>,
    /// Per clause, its literals with the edge realising each.
    pub clause_edges: Vec<Vec<(Literal, EdgeId)>>,
    /// Cycle edges in cycle order; edge `k` runs from cycle vertex `k` to `k+1`.
    pub cycle_edges: Vec<EdgeId>,
    pub cycle_vertices: Vec<VertexId>,
    /// Paired edge `x → ¬x` per variable (literal kind only).
    pub paired_edges: BTreeMap<Var, EdgeId>,
}

impl IncidenceGraph {
    pub fn is_augmented(&self) -> bool {
        !self.cycle_edges.is_empty()
    }

    pub fn clause_vertex(&self, i: usize) -> VertexId {
        self.vertex_of[&Node::Clause(i)]
    }

    pub fn cycle_set(&self) -> BTreeSet<EdgeId> {
        self.cycle_edges.iter().copied().collect()
    }

    /// Edge set of the star of clause `i`.
    pub fn clause_star(&self, i: usize) -> BTreeSet<EdgeId> {
        self.clause_edges[i].iter().map(|&(_, e)| e).collect()
    }

    pub fn clause_is_positive(&self, i: usize) -> bool {
        self.clause_edges[i].iter().all(|(l, _)| l.positive)
    }

    pub fn clause_is_negative(&self, i: usize) -> bool {
        self.clause_edges[i].iter().all(|(l, _)| !l.positive)
    }

    fn add_node(&mut self, node: Node) -> VertexId {
        if let Some(&v) = self.vertex_of.get(&node) {
            return v;
        }
        let v = self.graph.next_vertex_id();
        self.graph.add_vertex(v);
        self.nodes.insert(v, node);
        self.vertex_of.insert(node, v);
        v
    }

    /// Canonical planar layout of an augmented graph: paired edges (literal
    /// kind) or positive clauses (variable kind) inside the cycle, the rest
    /// outside. Fails with `NonPlanarEmbedding` when two items on one side cross.
    pub fn layout(&self) -> Result<Embedding, SatError> {
        if !self.is_augmented() {
            return Err(SatError::CycleIncomplete);
        }
        let m = self.clause_edges.len();
        let (inside, outside) = match self.kind {
            GraphKind::LiteralClause => (
                self.paired_edges.values().map(|&e| BTreeSet::from([e])).collect(),
                (0..m).map(|i| self.clause_star(i)).collect(),
            ),
            GraphKind::VariableClause => {
                let (pos, rest): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| self.clause_is_positive(i));
                (
                    pos.into_iter().map(|i| self.clause_star(i)).collect(),
                    rest.into_iter().map(|i| self.clause_star(i)).collect(),
                )
            }
        };
        layout_embedding(&CycleLayout {
            graph: &self.graph,
            cycle_vertices: &self.cycle_vertices,
            cycle_edges: &self.cycle_edges,
            inside,
            outside,
        })
    }
}

fn node_for(kind: GraphKind, l: Literal) -> Node {
    match kind {
        GraphKind::LiteralClause => Node::Literal(l),
        GraphKind::VariableClause => Node::Variable(l.var),
    }
}

/// Incidence graph of `f`: one node per clause and per occurring literal
/// (literal kind) or variable (variable kind), one edge per containment.
pub fn build_incidence(f: &Cnf, kind: GraphKind) -> IncidenceGraph {
    let mut g = IncidenceGraph {
        kind,
        num_vars: f.num_vars(),
        graph: Multigraph::new(),
        nodes: BTreeMap::new(),
        vertex_of: BTreeMap::new(),
        clause_edges: Vec::new(),
        cycle_edges: Vec::new(),
        cycle_vertices: Vec::new(),
        paired_edges: BTreeMap::new(),
    };
    for i in 0..f.clauses().len() {
        g.add_node(Node::Clause(i));
    }
    let occurring: BTreeSet<Node> = f.clauses().iter().flatten().map(|&l| node_for(kind, l)).collect();
    for node in occurring {
        g.add_node(node);
    }
    for (i, c) in f.clauses().iter().enumerate() {
        let hub = g.clause_vertex(i);
        let star = c.iter().map(|&l| (l, g.graph.push_edge(g.vertex_of[&node_for(kind, l)], hub))).collect();
        g.clause_edges.push(star);
    }
    g
}

/// Adds the cycle edges (and, for the literal kind, the paired edges) to an
/// unaugmented incidence graph. Literals missing from the formula become
/// isolated nodes first so the cycle can pass through them.
pub fn augment(g: &IncidenceGraph, cycle: &CycleOrder) -> Result<IncidenceGraph, SatError> {
    if cycle.kind() != g.kind || g.is_augmented() {
        return Err(SatError::KindMismatch);
    }
    cycle.validate(g.num_vars)?;
    let mut out = g.clone();
    let verts: Vec<VertexId> = cycle.nodes().into_iter().map(|n| out.add_node(n)).collect();
    let k = verts.len();
    for i in 0..k {
        let e = out.graph.push_edge(verts[i], verts[(i + 1) % k]);
        out.cycle_edges.push(e);
    }
    out.cycle_vertices = verts;
    if g.kind == GraphKind::LiteralClause {
        for x in 0..g.num_vars {
            let (p, q) =
                (out.vertex_of[&Node::Literal(Literal::pos(x))], out.vertex_of[&Node::Literal(Literal::neg(x))]);
            let e = out.graph.push_edge(p, q);
            out.paired_edges.insert(x, e);
        }
    }
    Ok(out)
}

/// Decides validity of an embedding of an augmented incidence graph.
///
/// Literal kind: every paired edge lies on one side of the cycle and every
/// clause on the other. Variable kind: positive clauses on one side and
/// negative clauses on the other (a mixed clause makes it invalid).
/// Sides come from `Embedding::side_of_cycle`, so the answer does not
/// depend on which cycle face is called the interior.
pub fn check_valid(emb: &Embedding, g: &IncidenceGraph) -> Result<bool, SatError> {
    if !g.is_augmented() {
        return Err(SatError::CycleIncomplete);
    }
    if emb.graph() != &g.graph || !matches!(emb.verify_planar(), Ok(true)) {
        return Err(SatError::NonPlanarEmbedding);
    }
    let cycle = g.cycle_set();
    let side = |item: &BTreeSet<EdgeId>| emb.side_of_cycle(&cycle, item).map_err(SatError::from);
    let m = g.clause_edges.len();
    match g.kind {
        GraphKind::LiteralClause => {
            let mut paired = BTreeSet::new();
            for &e in g.paired_edges.values() {
                paired.insert(side(&BTreeSet::from([e]))?);
            }
            let mut clauses = BTreeSet::new();
            for i in 0..m {
                clauses.insert(side(&g.clause_star(i))?);
            }
            Ok(paired.len() <= 1 && clauses.len() <= 1 && paired.is_disjoint(&clauses))
        }
        GraphKind::VariableClause => {
            let mut pos = BTreeSet::new();
            let mut neg = BTreeSet::new();
            for i in 0..m {
                let s = side(&g.clause_star(i))?;
                if g.clause_is_positive(i) {
                    pos.insert(s);
                } else if g.clause_is_negative(i) {
                    neg.insert(s);
                } else {
                    return Ok(false);
                }
            }
            Ok(pos.len() <= 1 && neg.len() <= 1 && pos.is_disjoint(&neg))
        }
    }
}

/// Whether two stars attached to a cycle at the given positions cross when
/// both are drawn on the same side. They do not cross iff one set lies in
/// the closed arc between two cyclically consecutive members of the other.
pub fn clause_sets_cross(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let sorted: Vec<usize> = a.iter().copied().collect();
    let k = sorted.len();
    let fits = (0..k).any(|i| {
        let (lo, hi) = (sorted[i], sorted[(i + 1) % k]);
        b.iter().all(|&x| if lo < hi { lo <= x && x <= hi } else { x >= lo || x <= hi })
    });
    !fits
}

fn pairwise_disjoint_drawable(sets: &[BTreeSet<usize>]) -> bool {
    sets.iter().enumerate().all(|(i, a)| sets[i + 1..].iter().all(|b| !clause_sets_cross(a, b)))
}

/// Reference validity test for a literal cycle without any embedding: the
/// paired chords must not cross each other, and neither may the clause stars.
pub fn literal_cycle_is_valid_by_crossings(f: &Cnf, cycle: &[Literal]) -> bool {
    let pos: BTreeMap<Literal, usize> = cycle.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let chords: Vec<BTreeSet<usize>> =
        (0..f.num_vars()).map(|x| BTreeSet::from([pos[&Literal::pos(x)], pos[&Literal::neg(x)]])).collect();
    let stars: Vec<BTreeSet<usize>> = f.clauses().iter().map(|c| c.iter().map(|l| pos[l]).collect()).collect();
    pairwise_disjoint_drawable(&chords) && pairwise_disjoint_drawable(&stars)
}

/// Reference test that a variable cycle separates positive from negative
/// clauses: each polarity class must be drawable on its own side.
pub fn variable_cycle_separates_by_crossings(f: &Cnf, cycle: &[Var]) -> bool {
    if !super::is_monotone(f) {
        return false;
    }
    let pos: BTreeMap<Var, usize> = cycle.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let class = |positive: bool| -> Vec<BTreeSet<usize>> {
        f.clauses()
            .iter()
            .filter(|c| c.iter().all(|l| l.positive == positive))
            .map(|c| c.iter().map(|l| pos[&l.var]).collect())
            .collect()
    };
    pairwise_disjoint_drawable(&class(true)) && pairwise_disjoint_drawable(&class(false))
}

/// A cycle with items to draw on either side. Each item is a chord (one
/// edge between cycle vertices) or a star (edges from one off-cycle hub to
/// cycle vertices).
#[derive(Debug, Clone)]
pub struct CycleLayout<'a> {
    pub graph: &'a Multigraph,
    pub cycle_vertices: &'a [VertexId],
    pub cycle_edges: &'a [EdgeId],
    pub inside: Vec<BTreeSet<EdgeId>>,
    pub outside: Vec<BTreeSet<EdgeId>>,
}

fn leaving(g: &Multigraph, e: EdgeId, from: VertexId) -> Dart {
    if g.edges[&e].0 == from {
        Dart::new(e, 0)
    } else {
        Dart::new(e, 1)
    }
}

/// Builds the embedding of a cycle with its items drawn greedily, each in
/// the first face (by id) on its side that holds all its attachments.
/// Isolated vertices of `graph` are kept. The outer face is the first
/// outside face.
pub fn layout_embedding(layout: &CycleLayout<'_>) -> Result<Embedding, SatError> {
    let g = layout.graph;
    let verts = layout.cycle_vertices;
    let k = verts.len();
    if k < 2 || layout.cycle_edges.len() != k {
        return Err(SatError::CycleIncomplete);
    }
    let forward: Vec<Dart> = (0..k).map(|i| leaving(g, layout.cycle_edges[i], verts[i])).collect();
    let backward: Vec<Dart> = forward.iter().rev().map(|d| d.rev()).collect();
    let mut sub = Multigraph::new();
    for &e in layout.cycle_edges {
        let (u, v) = g.edges[&e];
        sub.insert_edge(e, u, v);
    }
    let faces = BTreeMap::from([(0, forward), (1, backward)]);
    let mut emb = Embedding::from_parts(sub, faces, Some(1))?;
    let mut inside_faces: BTreeSet<FaceId> = BTreeSet::from([0]);

    let sides = [(true, &layout.inside), (false, &layout.outside)];
    for (is_inside, items) in sides {
        for item in items {
            let (hub, spokes) = classify_item(g, item, verts)?;
            let head = |d: Dart| if d.side == 0 { g.edges[&d.edge].1 } else { g.edges[&d.edge].0 };
            let mut targets: Vec<VertexId> = spokes.iter().map(|&d| head(d)).collect();
            if hub.is_none() {
                targets.push(g.edges[&spokes[0].edge].0);
            }
            let candidates: Vec<FaceId> =
                emb.faces().keys().copied().filter(|f| inside_faces.contains(f) == is_inside).collect();
            let face = candidates
                .into_iter()
                .find(|&f| {
                    let on: BTreeSet<VertexId> = emb.faces()[&f].iter().map(|&d| emb.tail(d)).collect();
                    targets.iter().all(|t| on.contains(t))
                })
                .ok_or(SatError::NonPlanarEmbedding)?;
            let darts = &emb.faces()[&face];
            let corner = |t: VertexId| darts.iter().position(|&d| emb.tail(d) == t).expect("target on face");
            let before = emb.next_face_id();
            match hub {
                None => {
                    let d = spokes[0];
                    let (u, v) = g.edges[&d.edge];
                    let (i, j) = (corner(u), corner(v));
                    emb.graph_mut().insert_edge(d.edge, u, v);
                    emb.split_face(face, i, j, &[d]);
                }
                Some(h) => {
                    let mut order: Vec<(usize, Dart)> =
                        spokes.iter().zip(&targets).map(|(&d, &t)| (corner(t), d)).collect();
                    order.sort();
                    emb.graph_mut().add_vertex(h);
                    for &(_, d) in &order {
                        let (u, v) = g.edges[&d.edge];
                        emb.graph_mut().insert_edge(d.edge, u, v);
                    }
                    let corners: Vec<usize> = order.iter().map(|&(c, _)| c).collect();
                    let ds: Vec<Dart> = order.iter().map(|&(_, d)| d).collect();
                    emb.place_star(face, &corners, &ds);
                }
            }
            if is_inside {
                inside_faces.extend(before..emb.next_face_id());
            }
        }
    }
    let (graph, faces) = emb.into_parts();
    let mut graph = graph;
    graph.vertices.extend(g.vertices.iter().copied());
    let outer = faces.keys().copied().find(|f| !inside_faces.contains(f));
    let emb = Embedding::from_parts(graph, faces, outer)?;
    if emb.graph() != g || !matches!(emb.verify_planar(), Ok(true)) {
        return Err(SatError::NonPlanarEmbedding);
    }
    Ok(emb)
}

/// Splits an item into an optional hub and its darts leaving the hub (or
/// the single chord dart).
fn classify_item(
    g: &Multigraph,
    item: &BTreeSet<EdgeId>,
    cycle: &[VertexId],
) -> Result<(Option<VertexId>, Vec<Dart>), SatError> {
    let on_cycle: BTreeSet<VertexId> = cycle.iter().copied().collect();
    let ends: Vec<(EdgeId, VertexId, VertexId)> = item
        .iter()
        .map(|&e| g.edges.get(&e).map(|&(u, v)| (e, u, v)).ok_or(SatError::NonPlanarEmbedding))
        .collect::<Result<_, _>>()?;
    if let [(e, u, v)] = ends[..] {
        if on_cycle.contains(&u) && on_cycle.contains(&v) {
            return Ok((None, vec![Dart::new(e, 0)]));
        }
    }
    let hubs: BTreeSet<VertexId> =
        ends.iter().flat_map(|&(_, u, v)| [u, v]).filter(|x| !on_cycle.contains(x)).collect();
    let hub = match hubs.iter().collect::<Vec<_>>()[..] {
        [&h] => h,
        _ => return Err(SatError::NonPlanarEmbedding),
    };
    let mut darts = Vec::new();
    for &(e, u, v) in &ends {
        if u == hub && on_cycle.contains(&v) {
            darts.push(Dart::new(e, 0));
        } else if v == hub && on_cycle.contains(&u) {
            darts.push(Dart::new(e, 1));
        } else {
            return Err(SatError::NonPlanarEmbedding);
        }
    }
    Ok((Some(hub), darts))
}
