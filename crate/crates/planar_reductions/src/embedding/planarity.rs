//! Planarity testing and embedding construction.
//!
//! The simple underlying graph is split into biconnected blocks. Each block
//! is embedded with the Demoucron–Malgrange–Pertuiset face-splitting
//! algorithm, blocks are glued at cut vertices, and finally parallel edges
//! (as digons) and loops are put back. All choices follow ascending ids, so
//! the result is deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::surgery::dart_leaving;
use super::{Dart, EdgeId, Embedding, EmbeddingError, Multigraph, Result, VertexId};

/// True iff every connected component of `g` is planar.
pub fn is_planar(g: &Multigraph) -> bool {
    g.components().iter().all(|comp| {
        let verts: BTreeSet<VertexId> = comp.iter().copied().collect();
        let mut sub = Multigraph::new();
        sub.vertices = verts.clone();
        for (&e, &(u, v)) in &g.edges {
            if verts.contains(&u) {
                sub.insert_edge(e, u, v);
            }
        }
        compute_embedding(&sub).is_ok()
    })
}

/// Embeds a connected planar multigraph. The outer face is the largest face,
/// ties broken by the smallest face id; see [`Embedding::with_outer`].
pub fn compute_embedding(g: &Multigraph) -> Result<Embedding> {
    if g.vertices.is_empty() || !g.is_connected() {
        return Err(EmbeddingError::Disconnected);
    }
    if g.vertices.len() == 1 && g.edges.is_empty() {
        return Ok(Embedding::single_vertex(*g.vertices.iter().next().unwrap()));
    }
    // Simple skeleton: one representative per parallel class, no loops.
    let mut rep: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
    let mut extras = Vec::new();
    let mut loops = Vec::new();
    for (&e, &(u, v)) in &g.edges {
        if u == v {
            loops.push(e);
        } else {
            let key = (u.min(v), u.max(v));
            match rep.get(&key) {
                Some(&r) => extras.push((e, r)),
                None => {
                    rep.insert(key, e);
                }
            }
        }
    }
    let mut simple = Multigraph::new();
    simple.vertices = g.vertices.clone();
    for &e in rep.values() {
        let (u, v) = g.edges[&e];
        simple.insert_edge(e, u, v);
    }

    let mut emb = Embedding::from_parts(g.clone(), BTreeMap::new(), None)?;
    emb.graph.edges = simple.edges.clone();

    if simple.edges.is_empty() {
        // A single vertex carrying loops only.
        let v = *g.vertices.iter().next().unwrap();
        let mut first = true;
        for &l in &loops {
            emb.graph.edges.insert(l, (v, v));
            if first {
                emb.fresh_face(vec![Dart::new(l, 0)]);
                emb.fresh_face(vec![Dart::new(l, 1)]);
                first = false;
            } else {
                let f = *emb.faces.keys().next().unwrap();
                emb.split_face(f, 0, 0, &[Dart::new(l, 0)]);
            }
        }
        emb.outer = emb.largest_face();
        return Ok(emb);
    }

    let blocks = biconnected_blocks(&simple);
    let mut placed: BTreeSet<VertexId> = BTreeSet::new();
    let mut remaining: Vec<Vec<EdgeId>> = blocks;
    let mut first = true;
    while !remaining.is_empty() {
        let idx = if first {
            0
        } else {
            remaining
                .iter()
                .position(|b| {
                    b.iter().any(|e| {
                        let (u, v) = simple.edges[e];
                        placed.contains(&u) || placed.contains(&v)
                    })
                })
                .expect("blocks of a connected graph are linked")
        };
        let block = remaining.remove(idx);
        let faces = embed_block(&simple, &block)?;
        let block_verts: BTreeSet<VertexId> =
            block.iter().flat_map(|e| [simple.edges[e].0, simple.edges[e].1]).collect();
        if first {
            for f in faces {
                emb.fresh_face(f);
            }
            first = false;
        } else {
            let cut = *block_verts.iter().find(|v| placed.contains(v)).unwrap();
            glue_block(&mut emb, cut, faces);
        }
        placed.extend(block_verts);
    }

    for (e, r) in extras {
        emb.graph.edges.insert(e, g.edges[&e]);
        let pos = emb.dart_positions();
        let rd = Dart::new(r, 0);
        let (f, k) = pos[&rd];
        let len = emb.faces[&f].len();
        let from = emb.tail(rd);
        let d = dart_leaving(&emb, e, from);
        // Digon next to the representative: corners k (tail) and k+1 (head).
        emb.split_face(f, (k + 1) % len, k, &[d.rev()]);
    }
    for l in loops {
        let (v, _) = g.edges[&l];
        emb.graph.edges.insert(l, (v, v));
        let (f, i) = emb
            .faces
            .iter()
            .find_map(|(&f, ds)| ds.iter().position(|&d| emb.tail(d) == v).map(|i| (f, i)))
            .expect("every vertex of a connected graph lies on a face");
        emb.split_face(f, i, i, &[Dart::new(l, 0)]);
    }
    emb.outer = emb.largest_face();
    debug_assert_eq!(emb.verify_planar(), Ok(true));
    Ok(emb)
}

/// Inserts the faces of a block sharing vertex `cut` with the embedding: the
/// block's first face through `cut` is spliced into the first host face
/// through `cut`, the other block faces are added as they are.
fn glue_block(emb: &mut Embedding, cut: VertexId, faces: Vec<Vec<Dart>>) {
    let (host, p) = emb
        .faces
        .iter()
        .find_map(|(&f, ds)| ds.iter().position(|&d| emb.tail(d) == cut).map(|i| (f, i)))
        .expect("cut vertex lies on a face");
    let mut spliced = false;
    for face in faces {
        if !spliced {
            if let Some(s) = face.iter().position(|&d| emb.tail(d) == cut) {
                let rotated: Vec<Dart> = face[s..].iter().chain(&face[..s]).copied().collect();
                emb.faces.get_mut(&host).unwrap().splice(p..p, rotated);
                spliced = true;
                continue;
            }
        }
        emb.fresh_face(face);
    }
}

/// Edge sets of the biconnected blocks of a simple graph, in discovery order
/// of a depth-first search from the smallest vertex.
fn biconnected_blocks(g: &Multigraph) -> Vec<Vec<EdgeId>> {
    let adj = g.adjacency();
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut stack: Vec<EdgeId> = Vec::new();
    let mut blocks = Vec::new();
    let mut time = 0;
    let root = *g.vertices.iter().next().unwrap();
    // Iterative DFS: frames hold (vertex, parent edge, next adjacency index).
    let mut frames: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
    disc.insert(root, time);
    low.insert(root, time);
    time += 1;
    while let Some(&mut (v, pe, ref mut next)) = frames.last_mut() {
        if *next < adj[&v].len() {
            let (e, w) = adj[&v][*next];
            *next += 1;
            if Some(e) == pe {
                continue;
            }
            match disc.get(&w) {
                None => {
                    stack.push(e);
                    disc.insert(w, time);
                    low.insert(w, time);
                    time += 1;
                    frames.push((w, Some(e), 0));
                }
                Some(&dw) => {
                    if dw < disc[&v] {
                        stack.push(e);
                        let lv = low[&v].min(dw);
                        low.insert(v, lv);
                    }
                }
            }
        } else {
            frames.pop();
            if let Some(&(u, _, _)) = frames.last() {
                let lv = low[&v];
                let lu = low[&u].min(lv);
                low.insert(u, lu);
                if lv >= disc[&u] {
                    let pe = pe.unwrap();
                    let mut block = Vec::new();
                    while let Some(x) = stack.pop() {
                        block.push(x);
                        if x == pe {
                            break;
                        }
                    }
                    block.sort_unstable();
                    blocks.push(block);
                }
            }
        }
    }
    blocks
}

/// Faces of a planar embedding of one block (a bridge or a biconnected
/// simple graph), as dart cycles over the block's edge ids.
fn embed_block(g: &Multigraph, block: &[EdgeId]) -> Result<Vec<Vec<Dart>>> {
    let ends = |e: EdgeId| g.edges[&e];
    let leaving = |e: EdgeId, from: VertexId| if ends(e).0 == from { Dart::new(e, 0) } else { Dart::new(e, 1) };
    if block.len() == 1 {
        let d = Dart::new(block[0], 0);
        return Ok(vec![vec![d, d.rev()]]);
    }
    let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for &e in block {
        let (u, v) = ends(e);
        adj.entry(u).or_default().push((e, v));
        adj.entry(v).or_default().push((e, u));
    }

    // Initial cycle: the smallest edge plus a shortest path closing it.
    let e0 = block[0];
    let (a, b) = ends(e0);
    let path = bfs_path(&adj, b, |w| w == a, |e, _| e != e0).expect("block edge lies on a cycle");
    let mut cycle = vec![Dart::new(e0, 0)];
    let mut cur = b;
    for &e in &path {
        let d = leaving(e, cur);
        cycle.push(d);
        let (x, y) = ends(e);
        cur = if x == cur { y } else { x };
    }
    let mut faces: Vec<Vec<Dart>> = vec![cycle.clone(), cycle.iter().rev().map(|d| d.rev()).collect()];
    let mut emb_v: BTreeSet<VertexId> = BTreeSet::new();
    let mut emb_e: BTreeSet<EdgeId> = BTreeSet::new();
    for &d in &cycle {
        emb_e.insert(d.edge);
        let (x, y) = ends(d.edge);
        emb_v.insert(x);
        emb_v.insert(y);
    }
    let tail = |d: Dart| if d.side == 0 { ends(d.edge).0 } else { ends(d.edge).1 };

    while emb_e.len() < block.len() {
        let fragments = fragments(&adj, block, &emb_v, &emb_e, &ends);
        let face_sets: Vec<BTreeSet<VertexId>> = faces.iter().map(|f| f.iter().map(|&d| tail(d)).collect()).collect();
        let mut choice: Option<(usize, usize)> = None;
        for (k, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> =
                (0..faces.len()).filter(|&f| frag.attachments.iter().all(|v| face_sets[f].contains(v))).collect();
            if admissible.is_empty() {
                return Err(EmbeddingError::NonPlanar);
            }
            if admissible.len() == 1 {
                choice = Some((k, admissible[0]));
                break;
            }
            if choice.is_none() {
                choice = Some((k, admissible[0]));
            }
        }
        let (k, fi) = choice.expect("at least one fragment remains");
        let frag = &fragments[k];
        let mut att = frag.attachments.iter();
        let s = *att.next().unwrap();
        let t = *att.next().expect("fragments of a block have two attachments");
        let inner = &frag.inner;
        let edges = &frag.edges;
        let path = bfs_path(&adj, s, |w| w == t, |e, w| edges.contains(&e) && (w == t || inner.contains(&w)))
            .expect("fragment connects its attachments");
        let mut darts = Vec::new();
        let mut cur = s;
        for &e in &path {
            darts.push(leaving(e, cur));
            let (x, y) = ends(e);
            cur = if x == cur { y } else { x };
            emb_v.insert(cur);
            emb_e.insert(e);
        }
        let face = &faces[fi];
        let i = face.iter().position(|&d| tail(d) == s).unwrap();
        let j = face.iter().position(|&d| tail(d) == t).unwrap();
        let n = face.len();
        let mut first: Vec<Dart> = (0..(j + n - i) % n).map(|x| face[(i + x) % n]).collect();
        first.extend(darts.iter().rev().map(|d| d.rev()));
        let mut second: Vec<Dart> = (0..(i + n - j) % n).map(|x| face[(j + x) % n]).collect();
        second.extend(darts);
        faces[fi] = second;
        faces.push(first);
    }
    Ok(faces)
}

struct Fragment {
    attachments: BTreeSet<VertexId>,
    inner: BTreeSet<VertexId>,
    edges: BTreeSet<EdgeId>,
}

fn fragments(
    adj: &BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
    block: &[EdgeId],
    emb_v: &BTreeSet<VertexId>,
    emb_e: &BTreeSet<EdgeId>,
    ends: &dyn Fn(EdgeId) -> (VertexId, VertexId),
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &e in block {
        let (u, v) = ends(e);
        if !emb_e.contains(&e) && emb_v.contains(&u) && emb_v.contains(&v) {
            out.push(Fragment {
                attachments: [u, v].into_iter().collect(),
                inner: BTreeSet::new(),
                edges: [e].into_iter().collect(),
            });
        }
    }
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for &start in adj.keys() {
        if emb_v.contains(&start) || seen.contains(&start) {
            continue;
        }
        let mut frag = Fragment { attachments: BTreeSet::new(), inner: BTreeSet::new(), edges: BTreeSet::new() };
        seen.insert(start);
        frag.inner.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &adj[&v] {
                frag.edges.insert(e);
                if emb_v.contains(&w) {
                    frag.attachments.insert(w);
                } else if seen.insert(w) {
                    frag.inner.insert(w);
                    queue.push_back(w);
                }
            }
        }
        out.push(frag);
    }
    out
}

/// Shortest path of edges from `s` to a vertex satisfying `goal`, only using
/// edges accepted by `allow(edge, next_vertex)`.
fn bfs_path(
    adj: &BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
    s: VertexId,
    goal: impl Fn(VertexId) -> bool,
    allow: impl Fn(EdgeId, VertexId) -> bool,
) -> Option<Vec<EdgeId>> {
    let mut prev: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut seen = BTreeSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &adj[&v] {
            if !allow(e, w) || seen.contains(&w) {
                continue;
            }
            seen.insert(w);
            prev.insert(w, (v, e));
            if goal(w) {
                let mut path = Vec::new();
                let mut cur = w;
                while cur != s {
                    let (p, pe) = prev[&cur];
                    path.push(pe);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}
