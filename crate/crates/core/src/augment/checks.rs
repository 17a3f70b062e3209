use std::collections::HashMap;
use std::fmt;

use super::layering::LayeringState;
use crate::graph::{Graph, VertexId};
use crate::tree::SpanningTree;

/// Component labels of `T` minus the `removed` vertices, by BFS. Removed
/// vertices get `usize::MAX`; labels are dense and ordered by smallest vertex.
pub fn components_from_scratch(t: &SpanningTree, removed: &[bool]) -> Vec<usize> {
    let n = t.n();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if removed[s] || label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for (v, _) in t.neighbors(u) {
                if !removed[v] && label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

fn removed_through(state: &LayeringState, i: usize) -> Vec<bool> {
    (0..state.layer_of.len()).map(|v| !state.unlayered_through(v, i)).collect()
}

/// Compares every maintained layer partition with one computed from the
/// current tree.
pub fn check_components(g: &Graph, t: &SpanningTree, state: &mut LayeringState) -> Result<(), String> {
    for i in 0..state.components.len() {
        let removed = removed_through(state, i);
        let fresh = components_from_scratch(t, &removed);
        let mut fwd: HashMap<usize, usize> = HashMap::new();
        let mut back: HashMap<usize, usize> = HashMap::new();
        for v in 0..g.n() {
            if removed[v] {
                continue;
            }
            let r = state.components[i].find(v);
            let f = fresh[v];
            if *fwd.entry(f).or_insert(r) != r || *back.entry(r).or_insert(f) != f {
                return Err(format!("layer {i} partition disagrees with the tree at vertex {v}"));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingViolation {
    pub level: usize,
    pub u: VertexId,
    pub v: VertexId,
}

impl fmt::Display for BlockingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "edge ({}, {}) crosses components at level {} but {} is not in the next layer",
            self.u, self.v, self.level, self.v
        )
    }
}

/// For each level `i < h`: any edge between vertices outside `B_0..B_i` in
/// different components, with `u` unmarked, must have `v` in `B_{i+1}`.
/// Components are recomputed from the tree.
pub fn check_blocking(g: &Graph, t: &SpanningTree, state: &LayeringState) -> Result<(), BlockingViolation> {
    // Levels past the last computed layer all see the same sets.
    let last = state.h.min(state.layers.len());
    for i in 0..last {
        let removed = removed_through(state, i);
        let comp = components_from_scratch(t, &removed);
        for &(a, b) in g.edges() {
            if removed[a] || removed[b] || comp[a] == comp[b] {
                continue;
            }
            for (u, v) in [(a, b), (b, a)] {
                if !state.marked[u] && state.layer_of(v) != Some(i + 1) {
                    return Err(BlockingViolation { level: i, u, v });
                }
            }
        }
    }
    Ok(())
}
