//! Random planar embeddings grown by surgery, for tests and benchmarks.

use rand::Rng;

use super::{Embedding, FaceId};

/// Grows a connected planar embedding with `n >= 2` vertices by random
/// pendant additions, then adds up to `chords` random chords. With `simple`
/// set, chords that would create loops or parallel edges are skipped.
pub fn random_planar<R: Rng>(rng: &mut R, n: usize, chords: usize, simple: bool) -> Embedding {
    let mut emb = Embedding::single_vertex(0);
    emb = emb.add_pendant_edge(0, 0).expect("edgeless pendant").0;
    while emb.graph().vertices.len() < n.max(2) {
        let (f, len) = random_face(rng, &emb);
        let i = rng.gen_range(0..len);
        emb = emb.add_pendant_at_corner(f, i).expect("corner exists").0;
    }
    for _ in 0..chords {
        let (f, len) = random_face(rng, &emb);
        let i = rng.gen_range(0..len);
        let j = rng.gen_range(0..len);
        let face = &emb.faces()[&f];
        let (u, v) = (emb.tail(face[i]), emb.tail(face[j]));
        if simple && (u == v || emb.neighbours(u).contains(&v)) {
            continue;
        }
        emb = emb.add_edge_at_corners(f, i, j).expect("corners exist").0;
    }
    emb
}

pub fn random_face<R: Rng>(rng: &mut R, emb: &Embedding) -> (FaceId, usize) {
    let ids: Vec<FaceId> = emb.faces().keys().copied().collect();
    let f = ids[rng.gen_range(0..ids.len())];
    (f, emb.faces()[&f].len())
}
