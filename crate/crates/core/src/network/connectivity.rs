use crate::error::Result;
use crate::geodata::Network3D;
use crate::scalar::Real;

/// Component label per node plus the number of components.
pub(crate) fn component_labels<T: Real>(net: &Network3D<T>) -> (Vec<usize>, usize) {
    let n = net.node_count();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &(v, _) in net.adjacent(u) {
                if label[v] == usize::MAX {
                    label[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Connected components as sorted id lists, ordered by smallest member id.
pub fn connectivity<T: Real>(net: &Network3D<T>) -> Vec<Vec<String>> {
    let (label, count) = component_labels(net);
    let mut comps: Vec<Vec<String>> = vec![Vec::new(); count];
    for (i, &c) in label.iter().enumerate() {
        comps[c].push(net.node(i).id.clone());
    }
    for c in &mut comps {
        c.sort();
    }
    comps.sort();
    comps
}

/// Ids of nodes sharing an edge with `node`, ascending.
pub fn neighbors<T: Real>(net: &Network3D<T>, node: &str) -> Result<Vec<String>> {
    let i = net.node_index(node)?;
    Ok(net
        .adjacent(i)
        .iter()
        .map(|&(v, _)| net.node(v).id.clone())
        .collect())
}
