//! The JSON network document read and written by the command-line tool.
//!
//! ```json
//! {
//!   "vertices": [{"id": 0, "boundary": true}, {"id": 1, "boundary": false, "d": "0"}],
//!   "edges": [{"id": 0, "tail": 0, "head": 1, "w": "1/2"}],
//!   "embedding": {"rotation": [{"vertex": 0, "edges": [0]}, {"vertex": 1, "edges": [0]}], "boundary_order": [0]},
//!   "metadata": {"name": "K2"}
//! }
//! ```
//!
//! Weights and offsets are integers or `"p/q"` strings and are always
//! written as strings. A rotation lists, counterclockwise, the edges leaving
//! a vertex; for a loop the first occurrence is read as the dart from tail to
//! head, so a loop may come back with its two darts exchanged.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{Ring, Scalar};
use crate::network::Network;
use crate::partial_graph::PartialGraph;
use crate::planar::EmbeddedPartialGraph;

/// A number given either as a JSON integer or as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberText {
    Int(i64),
    Text(String),
}

impl NumberText {
    fn parse(&self) -> Result<Scalar> {
        match self {
            NumberText::Int(v) => Ok(Scalar::int(*v)),
            NumberText::Text(t) => Scalar::parse(t),
        }
    }

    /// Rationals keep a denominator so that a network over ℚ reads back
    /// over ℚ.
    fn of(s: &Scalar) -> NumberText {
        match s {
            Scalar::Rat(r) if r.is_integer() => NumberText::Text(format!("{}/1", r.numer())),
            other => NumberText::Text(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: u64,
    pub boundary: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<NumberText>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: u64,
    pub tail: u64,
    pub head: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<NumberText>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationEntry {
    pub vertex: u64,
    pub edges: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingEntry {
    pub rotation: Vec<RotationEntry>,
    #[serde(default)]
    pub boundary_order: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
}

/// A decoded document. Vertex `i` and edge `i` are the `i`-th entries of
/// the document; edge `i` is dart `2i` of the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub network: Network,
    pub embedding: Option<EmbeddedPartialGraph>,
    pub vertex_ids: Vec<u64>,
    pub edge_ids: Vec<u64>,
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
}

impl Decoded {
    /// Position of a document vertex id.
    pub fn vertex_index(&self, id: u64) -> Result<usize> {
        self.vertex_ids.iter().position(|&v| v == id).ok_or_else(|| Error::Parse(format!("unknown vertex id {id}")))
    }
}

fn index_of(ids: &[u64], what: &str) -> Result<BTreeMap<u64, usize>> {
    let mut map = BTreeMap::new();
    for (i, &id) in ids.iter().enumerate() {
        if map.insert(id, i).is_some() {
            return Err(Error::Parse(format!("duplicate {what} id {id}")));
        }
    }
    Ok(map)
}

impl NetworkDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Validate ids and build the network and embedding.
    pub fn decode(&self) -> Result<Decoded> {
        let vertex_ids: Vec<u64> = self.vertices.iter().map(|v| v.id).collect();
        let edge_ids: Vec<u64> = self.edges.iter().map(|e| e.id).collect();
        let vmap = index_of(&vertex_ids, "vertex")?;
        let emap = index_of(&edge_ids, "edge")?;
        let lookup = |id: u64, at: String| vmap.get(&id).copied().ok_or_else(|| Error::Parse(format!("{at}: unknown vertex id {id}")));
        let mut g = PartialGraph::with_vertices(self.vertices.iter().map(|v| v.boundary).collect());
        let mut w = Vec::with_capacity(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            let a = lookup(e.tail, format!("edges[{k}].tail"))?;
            let b = lookup(e.head, format!("edges[{k}].head"))?;
            g.add_edge(a, b);
            let weight = e.w.as_ref().map(|x| x.parse()).transpose().map_err(|err| Error::Parse(format!("edges[{k}].w: {err}")))?;
            w.push(weight.unwrap_or_else(|| Scalar::int(1)));
        }
        let mut d = Vec::with_capacity(self.vertices.len());
        for (k, v) in self.vertices.iter().enumerate() {
            let off = v.d.as_ref().map(|x| x.parse()).transpose().map_err(|err| Error::Parse(format!("vertices[{k}].d: {err}")))?;
            d.push(off.unwrap_or_else(|| Scalar::int(0)));
        }
        let network = Network::from_edge_weights(g.clone(), w, d)?;
        let embedding = match &self.embedding {
            None => None,
            Some(emb) => {
                let mut rotation: Vec<Option<Vec<usize>>> = vec![None; g.num_vertices()];
                for (k, r) in emb.rotation.iter().enumerate() {
                    let x = lookup(r.vertex, format!("embedding.rotation[{k}].vertex"))?;
                    if rotation[x].is_some() {
                        return Err(Error::Parse(format!("embedding.rotation[{k}]: vertex {} listed twice", r.vertex)));
                    }
                    let mut seen_loop = BTreeMap::new();
                    let mut darts = Vec::with_capacity(r.edges.len());
                    for &eid in &r.edges {
                        let i = *emap.get(&eid).ok_or_else(|| Error::Parse(format!("embedding.rotation[{k}]: unknown edge id {eid}")))?;
                        let fwd = 2 * i;
                        let dart = if g.tail(fwd) == x && g.head(fwd) == x {
                            let count = seen_loop.entry(i).or_insert(0usize);
                            *count += 1;
                            if *count == 1 { fwd } else { fwd + 1 }
                        } else if g.tail(fwd) == x {
                            fwd
                        } else if g.head(fwd) == x {
                            fwd + 1
                        } else {
                            return Err(Error::Parse(format!("embedding.rotation[{k}]: edge {eid} does not meet vertex {}", r.vertex)));
                        };
                        darts.push(dart);
                    }
                    rotation[x] = Some(darts);
                }
                let rotation: Vec<Vec<usize>> = rotation.into_iter().map(|r| r.unwrap_or_default()).collect();
                let order = emb
                    .boundary_order
                    .iter()
                    .enumerate()
                    .map(|(k, &id)| lookup(id, format!("embedding.boundary_order[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Some(EmbeddedPartialGraph::new(g, rotation, order)?)
            }
        };
        Ok(Decoded { network, embedding, vertex_ids, edge_ids, metadata: self.metadata.clone() })
    }

    /// Encode a network over ℤ or ℚ, with ids `0..`.
    pub fn encode(network: &Network, embedding: Option<&EmbeddedPartialGraph>) -> Result<Self> {
        if matches!(network.ring(), Ring::Residues(_)) {
            return Err(Error::RingMismatch("documents hold integer or rational networks".into()));
        }
        let g = network.graph();
        let edges = g.edges();
        let mut edge_of = vec![0u64; g.num_darts()];
        for (i, &e) in edges.iter().enumerate() {
            edge_of[e] = i as u64;
            edge_of[g.rev(e)] = i as u64;
        }
        let vertices = (0..g.num_vertices())
            .map(|x| {
                let off = network.offset(x);
                VertexEntry { id: x as u64, boundary: g.is_boundary(x), d: (!off.is_zero()).then(|| NumberText::of(off)) }
            })
            .collect();
        let edge_entries = edges
            .iter()
            .enumerate()
            .map(|(i, &e)| EdgeEntry { id: i as u64, tail: g.tail(e) as u64, head: g.head(e) as u64, w: Some(NumberText::of(network.weight(e))) })
            .collect();
        let embedding = embedding.map(|eg| EmbeddingEntry {
            rotation: eg
                .rotation
                .iter()
                .enumerate()
                .map(|(x, darts)| RotationEntry { vertex: x as u64, edges: darts.iter().map(|&e| edge_of[e]).collect() })
                .collect(),
            boundary_order: eg.boundary_order.iter().map(|&x| x as u64).collect(),
        });
        Ok(NetworkDocument { vertices, edges: edge_entries, embedding, metadata: None })
    }
}
