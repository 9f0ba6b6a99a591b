//! JSON form of graphs and embeddings.
//!
//! ```json
//! {"vertices":[0,1],"edges":[[0,0,1]],"faces":[[[0,0],[0,1]]],"face_ids":[0],"outer":0}
//! ```
//!
//! `face_ids` is optional; faces are numbered by position when it is absent.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Dart, Embedding, EmbeddingError, FaceId, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[usize; 3]>,
    pub faces: Vec<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_ids: Option<Vec<FaceId>>,
    #[serde(default)]
    pub outer: Option<FaceId>,
}

impl From<&Multigraph> for GraphJson {
    fn from(g: &Multigraph) -> Self {
        GraphJson {
            vertices: g.vertices.iter().copied().collect(),
            edges: g.edges.iter().map(|(&e, &(u, v))| [e, u, v]).collect(),
        }
    }
}

impl From<&GraphJson> for Multigraph {
    fn from(j: &GraphJson) -> Self {
        let mut g = Multigraph::new();
        g.vertices.extend(j.vertices.iter().copied());
        for &[e, u, v] in &j.edges {
            g.insert_edge(e, u, v);
        }
        g
    }
}

impl From<&Embedding> for EmbeddingJson {
    fn from(emb: &Embedding) -> Self {
        let g = GraphJson::from(&emb.graph);
        let ids: Vec<FaceId> = emb.faces.keys().copied().collect();
        let positional = ids.iter().enumerate().all(|(i, &f)| i == f);
        EmbeddingJson {
            vertices: g.vertices,
            edges: g.edges,
            faces: emb.faces.values().map(|ds| ds.iter().map(|d| [d.edge, d.side as usize]).collect()).collect(),
            face_ids: if positional { None } else { Some(ids) },
            outer: emb.outer,
        }
    }
}

impl TryFrom<&EmbeddingJson> for Embedding {
    type Error = EmbeddingError;

    fn try_from(j: &EmbeddingJson) -> Result<Self, Self::Error> {
        let graph = Multigraph::from(&GraphJson { vertices: j.vertices.clone(), edges: j.edges.clone() });
        let ids: Vec<FaceId> = match &j.face_ids {
            Some(ids) if ids.len() == j.faces.len() => ids.clone(),
            Some(_) => return Err(EmbeddingError::MalformedEmbedding("face_ids length mismatch".into())),
            None => (0..j.faces.len()).collect(),
        };
        let mut faces = BTreeMap::new();
        for (f, darts) in ids.into_iter().zip(&j.faces) {
            let mut ds = Vec::with_capacity(darts.len());
            for &[e, s] in darts {
                if s > 1 {
                    return Err(EmbeddingError::MalformedEmbedding(format!("dart side {s}")));
                }
                ds.push(Dart::new(e, s as u8));
            }
            if faces.insert(f, ds).is_some() {
                return Err(EmbeddingError::MalformedEmbedding(format!("duplicate face id {f}")));
            }
        }
        Embedding::from_parts(graph, faces, j.outer)
    }
}

pub fn embedding_to_json(emb: &Embedding) -> String {
    serde_json::to_string(&EmbeddingJson::from(emb)).expect("embedding serializes")
}

pub fn embedding_from_json(s: &str) -> Result<Embedding, EmbeddingError> {
    let j: EmbeddingJson = serde_json::from_str(s).map_err(|e| EmbeddingError::MalformedEmbedding(e.to_string()))?;
    Embedding::try_from(&j)
}

pub fn graph_to_json(g: &Multigraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serializes")
}

pub fn graph_from_json(s: &str) -> Result<Multigraph, serde_json::Error> {
    serde_json::from_str::<GraphJson>(s).map(|j| Multigraph::from(&j))
}

pub fn graph_to_dot(g: &Multigraph) -> String {
    let mut s = String::from("graph g {\n");
    for v in &g.vertices {
        s.push_str(&format!("  v{v};\n"));
    }
    for (e, (u, v)) in &g.edges {
        s.push_str(&format!("  v{u} -- v{v} [label=\"e{e}\"];\n"));
    }
    s.push_str("}\n");
    s
}
