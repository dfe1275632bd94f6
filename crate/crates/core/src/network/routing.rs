use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geodata::{EdgeKind, Network3D};
use crate::scalar::{total_cmp, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct RouteResult<T> {
    pub node_path: Vec<String>,
    pub total_length: T,
    /// Connector edges traversed.
    pub layer_transitions: usize,
}

/// Min-heap entry: smaller distance first, then smaller node id.
struct Frontier<T> {
    dist: T,
    rank: usize,
    node: usize,
}

impl<T: Real> PartialEq for Frontier<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Frontier<T> {}

impl<T: Real> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Frontier<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        total_cmp(other.dist, self.dist).then(other.rank.cmp(&self.rank))
    }
}

/// Dijkstra over the whole network.
///
/// Among equal-distance frontier entries the lexicographically smaller node id
/// is settled first, and predecessors change only on strict improvement, so
/// the returned path is deterministic.
pub fn shortest_path<T: Real>(net: &Network3D<T>, start: &str, end: &str) -> Result<RouteResult<T>> {
    let s = net.node_index(start)?;
    let t = net.node_index(end)?;
    let n = net.node_count();
    let mut dist = vec![T::infinity(); n];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = T::zero();
    heap.push(Frontier {
        dist: T::zero(),
        rank: net.id_rank(s),
        node: s,
    });
    while let Some(Frontier { dist: d, node: u, .. }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == t {
            break;
        }
        for &(v, ei) in net.adjacent(u) {
            if done[v] {
                continue;
            }
            let nd = d + net.edges()[ei].length;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = Some((u, ei));
                heap.push(Frontier {
                    dist: nd,
                    rank: net.id_rank(v),
                    node: v,
                });
            }
        }
    }
    if !done[t] {
        return Err(Error::NoRoute {
            from: start.to_string(),
            to: end.to_string(),
        });
    }

    let mut path = vec![t];
    let mut used = Vec::new();
    let mut cur = t;
    while let Some((p, ei)) = pred[cur] {
        path.push(p);
        used.push(ei);
        cur = p;
    }
    path.reverse();
    used.reverse();
    let total_length = used.iter().fold(T::zero(), |acc, &ei| acc + net.edges()[ei].length);
    let layer_transitions = used
        .iter()
        .filter(|&&ei| net.edges()[ei].kind == EdgeKind::Connector)
        .count();
    Ok(RouteResult {
        node_path: path.into_iter().map(|i| net.node(i).id.clone()).collect(),
        total_length,
        layer_transitions,
    })
}

/// Shortest route across the outdoor and indoor layers.
///
/// Layers meet only at connector edges (enforced when the network is built),
/// so `layer_transitions` counts how often the route enters or leaves a
/// building.
pub fn indoor_outdoor_route<T: Real>(net: &Network3D<T>, start: &str, end: &str) -> Result<RouteResult<T>> {
    let route = shortest_path(net, start, end)?;
    debug_assert!(route.node_path.windows(2).all(|w| {
        let (a, b) = (net.node_index(&w[0]).unwrap(), net.node_index(&w[1]).unwrap());
        net.node(a).layer == net.node(b).layer
            || net
                .adjacent(a)
                .iter()
                .any(|&(v, ei)| v == b && net.edges()[ei].kind == EdgeKind::Connector)
    }));
    Ok(route)
}
