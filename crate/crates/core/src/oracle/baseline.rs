use crate::graph::Graph;
use crate::tree::{bfs_tree, SpanningTree};

/// Repeatedly swaps in a non-tree edge whose endpoints both have degree at
/// most `Δ - 2` and whose tree cycle passes a degree-`Δ` vertex, dropping one
/// tree edge at that vertex. Stops when no such edge exists for the current
/// `Δ`.
pub fn local_search_baseline(g: &Graph) -> SpanningTree {
    let mut t = bfs_tree(g, 0);
    'outer: loop {
        let k = t.max_degree();
        if k < 3 {
            return t;
        }
        for e in 0..g.m() {
            if t.contains_edge(e) {
                continue;
            }
            let (u, v) = g.endpoints(e);
            if t.degree(u) + 2 > k || t.degree(v) + 2 > k {
                continue;
            }
            let path = t.tree_path(u, v).expect("distinct endpoints").0;
            if let Some(i) = path.iter().position(|&w| t.degree(w) >= k) {
                let remove = g.edge_id(path[i], path[i + 1]).expect("tree edge");
                t.swap_edge(g, e, remove).expect("edge lies on the cycle");
                continue 'outer;
            }
        }
        return t;
    }
}
