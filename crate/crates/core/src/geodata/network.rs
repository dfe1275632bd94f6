use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodata::io::read_to_string;
use crate::geodata::raster::annotate;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Outdoor,
    Indoor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Road,
    Corridor,
    /// Joins the outdoor layer to an indoor layer (a building entrance).
    Connector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node<T> {
    pub id: String,
    pub x: T,
    pub y: T,
    pub z: T,
    pub layer: Layer,
}

impl<T: Real> Node<T> {
    pub fn position(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }
}

/// Undirected edge between node indices, `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge<T> {
    pub a: usize,
    pub b: usize,
    pub length: T,
    pub kind: EdgeKind,
}

/// Input edge description; `length: None` means Euclidean 3D distance.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec<T> {
    pub from: String,
    pub to: String,
    pub length: Option<T>,
    pub kind: EdgeKind,
}

/// Layered undirected graph of 3D nodes.
///
/// Duplicate edges collapse to the shortest one. Adjacency lists are kept in
/// ascending neighbour-id order so every traversal is deterministic.
#[derive(Debug, Clone)]
pub struct Network3D<T> {
    nodes: Vec<Node<T>>,
    index: HashMap<String, usize>,
    edges: Vec<Edge<T>>,
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Position of each node in ascending-id order.
    rank: Vec<usize>,
}

impl<T: Real> Network3D<T> {
    pub fn new(nodes: Vec<Node<T>>, edge_specs: Vec<EdgeSpec<T>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if !(n.x.is_finite() && n.y.is_finite() && n.z.is_finite()) {
                return Err(Error::Invalid(format!("node '{}' has non-finite coordinates", n.id)));
            }
            if index.insert(n.id.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate node id '{}'", n.id)));
            }
        }

        let mut dedup: BTreeMap<(usize, usize), Edge<T>> = BTreeMap::new();
        for e in edge_specs {
            let lookup = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::Invalid(format!("dangling endpoint '{id}'")))
            };
            let (u, v) = (lookup(&e.from)?, lookup(&e.to)?);
            if u == v {
                return Err(Error::Invalid(format!("self-loop at node '{}'", e.from)));
            }
            if nodes[u].layer != nodes[v].layer && e.kind != EdgeKind::Connector {
                return Err(Error::Invalid(format!(
                    "cross-layer edge must be connector: '{}'-'{}'",
                    e.from, e.to
                )));
            }
            let length = match e.length {
                Some(l) if l < T::zero() || !l.is_finite() => {
                    return Err(Error::Invalid(format!(
                        "negative length {l} on edge '{}'-'{}'",
                        e.from, e.to
                    )))
                }
                Some(l) => l,
                None => distance3(nodes[u].position(), nodes[v].position()),
            };
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            let edge = Edge { a, b, length, kind: e.kind };
            dedup
                .entry((a, b))
                .and_modify(|old| {
                    if length < old.length {
                        *old = edge.clone();
                    }
                })
                .or_insert(edge);
        }

        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&i, &j| nodes[i].id.cmp(&nodes[j].id));
        let mut rank = vec![0; nodes.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }

        let edges: Vec<Edge<T>> = dedup.into_values().collect();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (ei, e) in edges.iter().enumerate() {
            adjacency[e.a].push((e.b, ei));
            adjacency[e.b].push((e.a, ei));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| rank[v]);
        }

        Ok(Network3D {
            nodes,
            index,
            edges,
            adjacency,
            rank,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NetworkDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("network JSON: {e}")))?;
        let lit = |v: f64| T::from_f64(v).ok_or_else(|| Error::Parse(format!("number {v} out of range")));
        let nodes = doc
            .nodes
            .into_iter()
            .map(|n| {
                Ok(Node {
                    id: n.id,
                    x: lit(n.x)?,
                    y: lit(n.y)?,
                    z: lit(n.z)?,
                    layer: n.layer,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = doc
            .edges
            .into_iter()
            .map(|e| {
                Ok(EdgeSpec {
                    from: e.from,
                    to: e.to,
                    length: e.length.map(lit).transpose()?,
                    kind: e.kind,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(nodes, edges)
    }

    /// Serializes to the network JSON format with explicit edge lengths.
    pub fn to_json(&self) -> String {
        let doc = NetworkDoc {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    x: n.x.as_f64(),
                    y: n.y.as_f64(),
                    z: n.z.as_f64(),
                    layer: n.layer,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: self.nodes[e.a].id.clone(),
                    to: self.nodes[e.b].id.clone(),
                    length: Some(e.length.as_f64()),
                    kind: e.kind,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("network serializes")
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn node(&self, i: usize) -> &Node<T> {
        &self.nodes[i]
    }

    pub fn node_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    /// `(neighbour, edge index)` pairs in ascending neighbour-id order.
    pub fn adjacent(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    /// Rank of node `i` in ascending-id order.
    pub fn id_rank(&self, i: usize) -> usize {
        self.rank[i]
    }
}

pub(crate) fn distance3<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    let (dx, dy, dz) = (a[0] - b[0], a[1] - b[1], a[2] - b[2]);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    x: f64,
    y: f64,
    z: f64,
    layer: Layer,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<f64>,
    kind: EdgeKind,
}

pub fn load_network<T: Real>(path: impl AsRef<Path>) -> Result<Network3D<T>> {
    let path = path.as_ref();
    Network3D::from_json(&read_to_string(path)?).map_err(|e| annotate(path, e))
}
