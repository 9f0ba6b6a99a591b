use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::random_planar;
use super::*;

fn d(e: EdgeId, s: u8) -> Dart {
    Dart::new(e, s)
}

/// u=0 v=1 w=2 x=3 y=4 z=5; uv vw vx xy yu vz zx.
fn reference_graph() -> Multigraph {
    Multigraph::from_edges(0..6, &[(0, 1), (1, 2), (1, 3), (3, 4), (4, 0), (1, 5), (5, 3)])
}

/// Faces 1 = F¹, 2 = F², 0 = F^∞ of the reference example.
fn reference_embedding() -> Embedding {
    let faces = BTreeMap::from([
        (0, vec![d(0, 1), d(4, 1), d(3, 1), d(6, 1), d(5, 1)]),
        (1, vec![d(0, 0), d(1, 0), d(1, 1), d(2, 0), d(3, 0), d(4, 0)]),
        (2, vec![d(5, 0), d(6, 0), d(2, 1)]),
    ]);
    Embedding::from_parts(reference_graph(), faces, Some(0)).unwrap()
}

fn mirror(e: &Embedding) -> Embedding {
    e.mirrored()
}

fn cycle(n: usize) -> Multigraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Multigraph::from_edges(0..n, &edges)
}

fn k4() -> Multigraph {
    Multigraph::from_edges(0..4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

fn face_lengths(e: &Embedding) -> Vec<usize> {
    let mut v: Vec<usize> = e.faces.values().map(Vec::len).collect();
    v.sort_unstable();
    v
}

fn dart_partition_holds(e: &Embedding) -> bool {
    let mut seen = BTreeSet::new();
    let all = e.faces.values().flatten().all(|&x| seen.insert(x));
    all && seen.len() == 2 * e.graph.edges.len()
}

#[test]
fn reference_example_is_planar() {
    assert_eq!(reference_embedding().verify_planar(), Ok(true));
}

#[test]
fn reference_other_occurrences() {
    let e = reference_embedding();
    // 1-based Other(F²,2) = (F^∞,4) and Other(F¹,2) = (F¹,3).
    assert_eq!(e.other(2, 1), Ok((0, 3)));
    assert_eq!(e.other(1, 1), Ok((1, 2)));
    assert_eq!(e.other(2, 7), Err(EmbeddingError::IndexOutOfFace { face: 2, index: 7 }));
}

#[test]
fn reference_dual_edges_and_vertex_face() {
    let e = reference_embedding();
    let dual = e.dual().unwrap();
    assert_eq!(dual.graph.edges[&0], (1, 0)); // uv joins F¹ and F^∞
    assert_eq!(dual.graph.edges[&1], (1, 1)); // vw is a loop at F¹
                                              // face*(v) = (F²F¹, F¹F¹, F¹F^∞, F^∞F²): vx, vw, uv, vz entering v.
    assert_eq!(canonical_cycle(&dual.faces[&1]), canonical_cycle(&[d(2, 1), d(1, 1), d(0, 0), d(5, 1)]));
    let endpoints: Vec<_> = dual.faces[&1].iter().map(|&x| (dual.tail(x), dual.head(x))).collect();
    let expected = [(2, 1), (1, 1), (1, 0), (0, 2)];
    let k = endpoints.iter().position(|p| *p == expected[0]).unwrap();
    let rotated: Vec<_> = endpoints[k..].iter().chain(&endpoints[..k]).copied().collect();
    assert_eq!(rotated, expected);
    assert_eq!(dual.verify_planar(), Ok(true));
}

#[test]
fn reference_graph_embeds_like_the_example() {
    let e = compute_embedding(&reference_graph()).unwrap();
    assert_eq!(e.verify_planar(), Ok(true));
    assert_eq!(e.faces.len(), 3);
    // The pendant edge vw may sit in any face at v; the 2-connected rest is
    // rigid up to reflection.
    let reference = reference_embedding();
    let rigid: BTreeSet<EdgeId> = [0, 2, 3, 4, 5, 6].into_iter().collect();
    let (ours, theirs) = (e.restrict(&rigid), reference.restrict(&rigid));
    assert!(equivalent(&ours, &theirs) || equivalent(&ours, &mirror(&theirs)));
    // Re-hang w inside the quadrilateral u-v-x-y as the example does.
    let mut moved = ours.clone();
    moved.graph.insert_edge(1, 1, 2);
    let quad = *moved.faces.iter().find(|(_, ds)| ds.len() == 4).unwrap().0;
    let at = moved.faces[&quad].iter().position(|&x| moved.tail(x) == 1).unwrap();
    moved.faces.get_mut(&quad).unwrap().splice(at..at, [d(1, 0), d(1, 1)]);
    assert_eq!(face_lengths(&moved), vec![3, 5, 6]);
    assert!(equivalent(&moved, &reference) || equivalent(&moved, &mirror(&reference)));
}

#[test]
fn triangle_and_single_edge() {
    let t = compute_embedding(&cycle(3)).unwrap();
    assert_eq!(face_lengths(&t), vec![3, 3]);
    assert_eq!(t.verify_planar(), Ok(true));
    let s = compute_embedding(&Multigraph::from_edges(0..2, &[(0, 1)])).unwrap();
    assert_eq!(s.faces.values().next().unwrap(), &vec![d(0, 0), d(0, 1)]);
    assert_eq!(s.other(0, 0), Ok((0, 1)));
    assert_eq!(s.verify_planar(), Ok(true));
}

#[test]
fn triangle_missing_face_is_not_planar() {
    let mut t = compute_embedding(&cycle(3)).unwrap();
    let f = *t.faces.keys().next().unwrap();
    t.faces.remove(&f);
    assert_eq!(t.verify_planar(), Ok(false));
}

#[test]
fn repeated_dart_is_malformed() {
    let mut t = compute_embedding(&cycle(3)).unwrap();
    let f = *t.faces.keys().next().unwrap();
    let first = t.faces[&f][0];
    t.faces.get_mut(&f).unwrap().push(first);
    assert!(matches!(t.verify_planar(), Err(EmbeddingError::MalformedEmbedding(_))));
}

#[test]
fn single_vertex_is_trivially_planar() {
    let e = compute_embedding(&Multigraph::from_edges([7], &[])).unwrap();
    assert!(e.faces.is_empty());
    assert_eq!(e.verify_planar(), Ok(true));
}

#[test]
fn nonplanar_and_disconnected_inputs() {
    let k5_edges: Vec<_> = (0..5).flat_map(|a| ((a + 1)..5).map(move |b| (a, b))).collect();
    assert_eq!(compute_embedding(&Multigraph::from_edges(0..5, &k5_edges)).unwrap_err(), EmbeddingError::NonPlanar);
    let k33_edges: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    assert_eq!(compute_embedding(&Multigraph::from_edges(0..6, &k33_edges)).unwrap_err(), EmbeddingError::NonPlanar);
    let two = Multigraph::from_edges(0..4, &[(0, 1), (2, 3)]);
    assert_eq!(compute_embedding(&two).unwrap_err(), EmbeddingError::Disconnected);
}

#[test]
fn multigraph_with_loops_and_parallels_embeds() {
    let g = Multigraph::from_edges(0..3, &[(0, 1), (1, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]);
    let e = compute_embedding(&g).unwrap();
    assert_eq!(e.verify_planar(), Ok(true));
    assert!(dart_partition_holds(&e));
    let only_loops = Multigraph::from_edges([0], &[(0, 0), (0, 0)]);
    assert_eq!(compute_embedding(&only_loops).unwrap().verify_planar(), Ok(true));
}

#[test]
fn outer_face_is_the_largest() {
    let g = Multigraph::from_edges(0..4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
    let e = compute_embedding(&g).unwrap();
    assert_eq!(e.faces[&e.outer.unwrap()].len(), 4);
}

#[test]
fn triangle_dual_has_three_parallel_edges() {
    let dual = compute_embedding(&cycle(3)).unwrap().dual().unwrap();
    assert_eq!(dual.graph.vertices.len(), 2);
    assert_eq!(dual.graph.edges.len(), 3);
    let ends: BTreeSet<_> = dual.graph.edges.values().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    assert_eq!(ends.len(), 1);
}

#[test]
fn c4_dual_round_trip() {
    let e = compute_embedding(&cycle(4)).unwrap();
    let dual = e.dual().unwrap();
    assert_eq!(dual.graph.vertices.len(), 2);
    assert_eq!(dual.graph.edges.len(), 4);
    assert!(equivalent(&dual.dual().unwrap(), &e));
}

#[test]
fn reference_dual_round_trip() {
    let e = reference_embedding();
    assert!(equivalent(&e.dual().unwrap().dual().unwrap(), &e));
    assert!(!equivalent(&e, &mirror(&e)));
}

#[test]
fn add_pendant_to_single_edge() {
    let e = compute_embedding(&Multigraph::from_edges(0..2, &[(0, 1)])).unwrap();
    let (p, w, _) = e.add_pendant_edge(1, 0).unwrap();
    assert_eq!(w, 2);
    assert_eq!(face_lengths(&p), vec![4]);
    assert_eq!(p.verify_planar(), Ok(true));
}

#[test]
fn c4_chord_makes_two_triangles() {
    let e = compute_embedding(&cycle(4)).unwrap();
    let inner = e.faces.keys().copied().find(|&f| Some(f) != e.outer).unwrap();
    let (c, _) = e.add_edge(0, 2, inner).unwrap();
    assert_eq!(face_lengths(&c), vec![3, 3, 4]);
    assert_eq!(c.verify_planar(), Ok(true));
}

#[test]
fn add_edge_splits_as_described() {
    // C4 face 0→1→2→3; chord between corners 0 (vertex 0) and 2 (vertex 2).
    let e = compute_embedding(&cycle(4)).unwrap();
    let f = e.faces.iter().find(|(_, ds)| ds[0] == d(0, 0)).map(|(&f, _)| f);
    let f = f.unwrap_or_else(|| e.faces.iter().find(|(_, ds)| ds.contains(&d(0, 0))).map(|(&f, _)| f).unwrap());
    let face = e.faces[&f].clone();
    let i = face.iter().position(|&x| e.tail(x) == 0).unwrap();
    let j = face.iter().position(|&x| e.tail(x) == 2).unwrap();
    let (c, new) = e.add_edge_at_corners(f, i, j).unwrap();
    let n = face.len();
    let mut f1: Vec<Dart> = (0..(j + n - i) % n).map(|k| face[(i + k) % n]).collect();
    f1.push(d(new, 1));
    let mut f2: Vec<Dart> = (0..(i + n - j) % n).map(|k| face[(j + k) % n]).collect();
    f2.push(d(new, 0));
    assert_eq!(c.faces[&f], f2);
    assert!(c.faces.values().any(|x| *x == f1));
}

#[test]
fn triangle_pendant_inside() {
    let e = compute_embedding(&cycle(3)).unwrap();
    let inner = e.faces.keys().copied().find(|&f| Some(f) != e.outer).unwrap();
    let (p, _, _) = e.add_pendant_edge(0, inner).unwrap();
    assert_eq!(face_lengths(&p), vec![3, 5]);
    let (p2, _) = p.add_edge(0, 0, inner).unwrap();
    assert_eq!(p2.verify_planar(), Ok(true));
    assert_eq!(p.add_edge(0, 9, inner).unwrap_err(), EmbeddingError::VertexNotOnFace { vertex: 9, face: inner });
}

#[test]
fn delete_edge_cases() {
    let t = compute_embedding(&cycle(3)).unwrap();
    let path = t.delete_edge(0).unwrap();
    assert_eq!(face_lengths(&path), vec![4]);
    assert_eq!(path.verify_planar(), Ok(true));
    assert_eq!(path.delete_edge(1).unwrap_err(), EmbeddingError::SingleFaceEdge(1));
    let k = compute_embedding(&k4()).unwrap();
    let k_minus = k.delete_edge(0).unwrap();
    assert_eq!(k_minus.faces.len(), 3);
    assert_eq!(k_minus.verify_planar(), Ok(true));
}

#[test]
fn add_then_delete_is_identity() {
    let e = compute_embedding(&k4()).unwrap();
    for (&f, ds) in &e.faces {
        for i in 0..ds.len() {
            for j in 0..ds.len() {
                let (a, new) = e.add_edge_at_corners(f, i, j).unwrap();
                assert!(a.delete_edge(new).unwrap().same_structure(&e));
            }
        }
    }
}

#[test]
fn relax_bowtie_between_triangles() {
    let g = Multigraph::from_edges(0..5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
    let e = compute_embedding(&g).unwrap();
    let tri: Vec<FaceId> = e.faces.iter().filter(|(_, ds)| ds.len() == 3).map(|(&f, _)| f).collect();
    assert_eq!(tri.len(), 2);
    let (r, w, new) = e.relax_vertex(0, tri[0], tri[1]).unwrap();
    assert_eq!(r.verify_planar(), Ok(true));
    assert_eq!(face_lengths(&r), vec![4, 4, 6]);
    assert_eq!(r.graph.edges[&new], (0, w));
    // vv' now separates the two triangle faces.
    let pos = r.dart_positions();
    assert_eq!(pos[&d(new, 0)].0, tri[0]);
    assert_eq!(pos[&d(new, 1)].0, tri[1]);
    assert!(r.contract_edge(new).unwrap().same_structure(&e));
}

#[test]
fn relax_c4_vertex_is_subdivision() {
    let e = compute_embedding(&cycle(4)).unwrap();
    let f: Vec<FaceId> = e.faces.keys().copied().collect();
    let (r, _, _) = e.relax_vertex(0, f[0], f[1]).unwrap();
    assert_eq!(face_lengths(&r), vec![5, 5]);
    assert_eq!(r.graph.degrees().values().filter(|&&x| x == 2).count(), 5);
    assert_eq!(e.relax_vertex(0, f[0], f[0]).unwrap_err(), EmbeddingError::FacesNotDistinct);
}

#[test]
fn contract_cases() {
    let path = Multigraph::from_edges(0..3, &[(0, 1), (1, 2)]);
    let p = compute_embedding(&path).unwrap().contract_edge(0).unwrap();
    assert_eq!(p.graph.edges.len(), 1);
    assert_eq!(p.graph.edges[&1], (0, 2));
    assert_eq!(p.verify_planar(), Ok(true));
    let c = compute_embedding(&cycle(4)).unwrap().contract_edge(0).unwrap();
    assert_eq!(face_lengths(&c), vec![3, 3]);
    let loops = compute_embedding(&Multigraph::from_edges(0..2, &[(0, 1), (1, 1)])).unwrap();
    assert_eq!(loops.contract_edge(1).unwrap_err(), EmbeddingError::SelfLoop(1));
    let digon = compute_embedding(&Multigraph::from_edges(0..2, &[(0, 1), (0, 1)])).unwrap();
    assert_eq!(digon.contract_edge(0).unwrap_err(), EmbeddingError::ShortCycle(0));
}

#[test]
fn smoothing_sixteen_cycle() {
    let mut e = compute_embedding(&cycle(16)).unwrap();
    for v in (1..16).step_by(2) {
        e = e.smooth_vertex(v).unwrap();
    }
    assert_eq!(e.graph.vertices.len(), 8);
    assert_eq!(face_lengths(&e), vec![8, 8]);
    assert_eq!(e.verify_planar(), Ok(true));
}

#[test]
fn subdivide_then_smooth() {
    let e = compute_embedding(&k4()).unwrap();
    for &edge in e.graph.edges.keys() {
        let (s, w, _) = e.subdivide_edge(edge).unwrap();
        assert_eq!(s.verify_planar(), Ok(true));
        let back = s.smooth_vertex(w).unwrap();
        assert_eq!((back.graph.clone(), back.faces.clone()), (e.graph.clone(), e.faces.clone()));
    }
    assert!(matches!(e.smooth_vertex(0), Err(EmbeddingError::WrongDegree { vertex: 0, degree: 3 })));
}

#[test]
fn subdivided_k4_smooths_back() {
    let mut e = compute_embedding(&k4()).unwrap();
    for edge in 0..6 {
        e = e.subdivide_edge(edge).unwrap().0;
    }
    let deg2: Vec<VertexId> = e.graph.degrees().into_iter().filter(|&(_, x)| x == 2).map(|(v, _)| v).collect();
    assert_eq!(deg2.len(), 6);
    for v in deg2 {
        e = e.smooth_vertex(v).unwrap();
    }
    assert_eq!(e.graph, k4());
    assert!(e.graph.degrees().values().all(|&x| x == 3));
}

#[test]
fn eulerian_predicate() {
    assert!(is_eulerian(&cycle(4)));
    assert!(!is_eulerian(&k4()));
    let two = Multigraph::from_edges(0..6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
    assert!(!is_eulerian(&two));
}

#[test]
fn c4_face_colouring() {
    let e = compute_embedding(&cycle(4)).unwrap();
    let c = e.two_color_faces().unwrap();
    let outer = e.outer.unwrap();
    assert_eq!(c[&outer], Color::Blue);
    let inner = e.faces.keys().copied().find(|&f| f != outer).unwrap();
    assert_eq!(c[&inner], Color::Red);
    let chorded = compute_embedding(&Multigraph::from_edges(0..4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])).unwrap();
    assert_eq!(chorded.two_color_faces().unwrap_err(), EmbeddingError::NotEulerian);
}

#[test]
fn locate_pendant_path_in_square() {
    // Square 0-1-2-3 with path H: 0-4-5 drawn inside or outside.
    let sq = compute_embedding(&cycle(4)).unwrap();
    let outer = sq.outer.unwrap();
    let inner = sq.faces.keys().copied().find(|&f| f != outer).unwrap();
    for target in [inner, outer] {
        let (a, w, e1) = sq.add_pendant_edge(0, target).unwrap();
        let (b, _, e2) = a.add_pendant_edge(w, target).unwrap();
        let g: BTreeSet<EdgeId> = (0..4).collect();
        let h: BTreeSet<EdgeId> = [e1, e2].into_iter().collect();
        let (eg, f) = b.locate_subgraph(&g, &h).unwrap();
        assert_eq!(canonical_cycle(&eg.faces[&f]), canonical_cycle(&sq.faces[&target]));
        assert_eq!(f, target);
    }
}

#[test]
fn locate_path_inside_frame_face() {
    // Frame 1-2-3 with extra vertices b, g: cycles 1-b-2-g and 2-3-1 sharing
    // edge 12; H = g-a-b drawn inside face 1b2g.
    let (one, two, three, a, b, g) = (1, 2, 3, 4, 5, 6);
    let base = Multigraph::from_edges(
        [one, two, three, a, b, g],
        &[(one, two), (two, three), (three, one), (one, b), (b, two), (two, g), (g, one), (g, a), (a, b)],
    );
    let e = compute_embedding(&base).unwrap();
    let gset: BTreeSet<EdgeId> = (0..7).collect();
    let hset: BTreeSet<EdgeId> = [7, 8].into_iter().collect();
    let (eg, f) = e.locate_subgraph(&gset, &hset).unwrap();
    let verts: BTreeSet<VertexId> = eg.face_vertices(f).unwrap().into_iter().collect();
    let expect: BTreeSet<VertexId> = [one, b, two, g].into_iter().collect();
    assert!(verts == expect);
}

#[test]
fn locate_rejects_subgraph_in_two_faces() {
    let sq = compute_embedding(&cycle(4)).unwrap();
    let outer = sq.outer.unwrap();
    let inner = sq.faces.keys().copied().find(|&f| f != outer).unwrap();
    let (a, _, e1) = sq.add_pendant_edge(0, inner).unwrap();
    let (b, _, e2) = a.add_pendant_edge(2, outer).unwrap();
    let g: BTreeSet<EdgeId> = (0..4).collect();
    let h: BTreeSet<EdgeId> = [e1, e2].into_iter().collect();
    assert_eq!(b.locate_subgraph(&g, &h).unwrap_err(), EmbeddingError::NotEmbeddedInSingleFace(2));
}

#[test]
fn json_round_trip() {
    let e = reference_embedding();
    let s = io::embedding_to_json(&e);
    let back = io::embedding_from_json(&s).unwrap();
    assert!(back.same_structure(&e));
    assert_eq!(io::embedding_to_json(&back), s);
}

/// Applies one random surgery step; returns None when the chosen step does not apply.
pub(crate) fn random_step(rng: &mut ChaCha8Rng, e: &Embedding) -> Option<Embedding> {
    use rand::Rng;
    let faces: Vec<FaceId> = e.faces.keys().copied().collect();
    let edges: Vec<EdgeId> = e.graph.edges.keys().copied().collect();
    let verts: Vec<VertexId> = e.graph.vertices.iter().copied().collect();
    match rng.gen_range(0..6) {
        0 => {
            let f = faces[rng.gen_range(0..faces.len())];
            let n = e.faces[&f].len();
            e.add_edge_at_corners(f, rng.gen_range(0..n), rng.gen_range(0..n)).ok().map(|x| x.0)
        }
        1 => e.delete_edge(edges[rng.gen_range(0..edges.len())]).ok(),
        2 => {
            let v = verts[rng.gen_range(0..verts.len())];
            let pos = e.dart_positions();
            let corners: Vec<(FaceId, usize)> = pos.iter().filter(|(x, _)| e.tail(**x) == v).map(|(_, &p)| p).collect();
            let a = corners[rng.gen_range(0..corners.len())];
            let b = corners[rng.gen_range(0..corners.len())];
            e.relax_vertex_at_corners(a.0, a.1, b.0, b.1).ok().map(|x| x.0)
        }
        3 => e.contract_edge(edges[rng.gen_range(0..edges.len())]).ok(),
        4 => e.smooth_vertex(verts[rng.gen_range(0..verts.len())]).ok(),
        _ => e.subdivide_edge(edges[rng.gen_range(0..edges.len())]).ok().map(|x| x.0),
    }
}

#[test]
fn random_surgery_keeps_planarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..40 {
        let mut e = random_planar(&mut rng, 3 + seed % 10, 6, false);
        for _ in 0..40 {
            if let Some(next) = random_step(&mut rng, &e) {
                if next.graph.edges.is_empty() {
                    continue;
                }
                assert_eq!(next.verify_planar(), Ok(true));
                assert!(dart_partition_holds(&next));
                assert!(next.graph.is_connected());
                e = next;
            }
        }
    }
}

#[test]
fn relax_duality_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let e = random_planar(&mut rng, 7, 5, true);
        let pos = e.dart_positions();
        for (&dart, &(f1, i1)) in &pos {
            let v = e.tail(dart);
            for (&other, &(f2, i2)) in &pos {
                if e.tail(other) != v || f1 == f2 {
                    continue;
                }
                let (r, _, new) = e.relax_vertex_at_corners(f1, i1, f2, i2).unwrap();
                let dual = e.dual().unwrap();
                // The primal corner (f, i) at v is the dual corner before the
                // dual dart of d_{i-1} in face*(v).
                let before = |f: FaceId, i: usize| {
                    let face = &e.faces[&f];
                    face[(i + face.len() - 1) % face.len()]
                };
                let dv = &dual.faces[&v];
                let j1 = dv.iter().position(|&x| x == before(f1, i1)).unwrap();
                let j2 = dv.iter().position(|&x| x == before(f2, i2)).unwrap();
                let (added, dnew) = dual.add_edge_at_corners(v, j1, j2).unwrap();
                assert_eq!(dnew, new);
                assert!(equivalent(&r.dual().unwrap(), &added), "relax duality failed");
            }
        }
    }
}

#[test]
fn contraction_duality_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let e = random_planar(&mut rng, 8, 6, true);
        for &edge in e.graph.edges.keys() {
            let Ok(c) = e.contract_edge(edge) else { continue };
            let dual = e.dual().unwrap();
            let Ok(removed) = dual.delete_edge(edge) else { continue };
            assert!(equivalent(&removed.dual().unwrap(), &c), "contraction duality failed");
        }
    }
}

#[test]
fn eulerian_two_faces_iff_cycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut cycles = 0;
    for _ in 0..300 {
        let e = random_planar(&mut rng, 2 + (cycles % 11), 8, false);
        if !is_eulerian(&e.graph) {
            assert!(e.two_color_faces().is_err());
            continue;
        }
        assert!(e.two_color_faces().is_ok());
        let is_cycle = e.graph.degrees().values().all(|&x| x == 2);
        assert_eq!(e.faces.len() == 2, is_cycle);
        cycles += usize::from(is_cycle);
    }
    for n in 1..12 {
        let e = compute_embedding(&cycle(n + 1)).unwrap();
        assert_eq!(e.faces.len(), 2);
        assert!(e.two_color_faces().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn other_is_an_involution(seed in 0u64..1000, n in 2usize..12, chords in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_planar(&mut rng, n, chords, false);
        for (&f, ds) in &e.faces {
            for i in 0..ds.len() {
                let (g, j) = e.other(f, i).unwrap();
                prop_assert_eq!(e.other(g, j).unwrap(), (f, i));
            }
        }
    }

    #[test]
    fn dual_of_dual_is_identity(seed in 0u64..1000, n in 2usize..12, chords in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_planar(&mut rng, n, chords, false);
        let dd = e.dual().unwrap().dual().unwrap();
        prop_assert!(equivalent(&dd, &e));
    }

    #[test]
    fn computed_embeddings_are_planar(seed in 0u64..1000, n in 2usize..14, chords in 0usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_planar(&mut rng, n, chords, false);
        let c = compute_embedding(&e.graph).unwrap();
        prop_assert_eq!(c.verify_planar(), Ok(true));
        prop_assert_eq!(c.faces.len(), e.faces.len());
        prop_assert_eq!(compute_embedding(&e.graph).unwrap(), c);
    }

    #[test]
    fn eulerian_iff_bipartite_dual(seed in 0u64..1000, n in 2usize..12, chords in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_planar(&mut rng, n, chords, false);
        prop_assert_eq!(is_eulerian(&e.graph), e.two_color_faces().is_ok());
    }
}

#[test]
fn lone_vertex_is_self_dual() {
    let e = Embedding::single_vertex(4);
    let d = e.dual().unwrap();
    assert!(d.graph.edges.is_empty());
    assert_eq!(d.graph.vertices.len(), 1);
    assert!(equivalent(&d.dual().unwrap(), &e));
}

#[test]
fn side_of_cycle_for_edges_away_from_the_cycle() {
    // Triangle 0-1-2 with a path 0-3-4 hanging outside it.
    let g = Multigraph::from_edges(0..5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4)]);
    let e = compute_embedding(&g).unwrap();
    let cycle = BTreeSet::from([0, 1, 2]);
    let near = e.side_of_cycle(&cycle, &BTreeSet::from([3])).unwrap();
    let far = e.side_of_cycle(&cycle, &BTreeSet::from([4])).unwrap();
    assert_eq!(near, far);
    assert_eq!(e.side_of_cycle(&cycle, &BTreeSet::from([3, 4])).unwrap(), near);
    assert!(e.side_of_cycle(&cycle, &BTreeSet::from([0, 3])).is_err());
}
