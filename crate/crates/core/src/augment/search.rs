use super::layering::LayeringState;
use super::sequence::{AugmentingSequence, OrientedEdge};
use super::AugmentError;
use crate::forest::DynamicForest;
use crate::graph::{EdgeId, Graph, VertexId};

impl LayeringState {
    /// Depth-first search for a sequence ending in the non-tree edge
    /// `(u, v)`, where `u` plays the role of `w_i` and `v` of `z_i`.
    ///
    /// Both endpoints must be unmarked and outside `B_0..B_{i-1}`, in different
    /// components of layer `i - 1`. Vertices found without a continuation are
    /// tagged and stay tagged until the next relayering.
    pub fn aug_dfs(
        &mut self,
        g: &Graph,
        i: usize,
        u: VertexId,
        v: VertexId,
    ) -> Result<Option<AugmentingSequence>, AugmentError> {
        let e = g
            .edge_id(u, v)
            .ok_or_else(|| AugmentError::InvalidSequence(format!("({u}, {v}) is not an edge")))?;
        if i == 0 || i > self.h + 1 {
            return Err(AugmentError::InvalidSequence(format!("level {i} outside 1..={}", self.h + 1)));
        }
        let mut out = Vec::with_capacity(i);
        if !self.dfs(g, i, u, v, e, &mut out)? {
            return Ok(None);
        }
        let (w1, z1) = (out[0].w, out[0].z);
        let (anchor, weight) = self.forest.path_min_unchecked(w1, z1);
        if weight != 0 {
            return Err(AugmentError::Invariant(format!("no anchor on the path of ({w1}, {z1})")));
        }
        Ok(Some(AugmentingSequence { anchor, edges: out }))
    }

    pub(crate) fn dfs(
        &mut self,
        g: &Graph,
        i: usize,
        u: VertexId,
        v: VertexId,
        e: EdgeId,
        out: &mut Vec<OrientedEdge>,
    ) -> Result<bool, AugmentError> {
        let want = (i - 1) as u32;
        if i == 1 {
            // B_0 vertices that dropped below k carry a top weight, so a
            // zero minimum means a live anchor.
            let (_, w) = self.forest.path_min_unchecked(u, v);
            if w != 0 {
                return Ok(false);
            }
            out.push(OrientedEdge { w: u, z: v, edge: e });
            return Ok(true);
        }
        loop {
            let (w, wt) = self.forest.path_min_unchecked(u, v);
            if wt > want {
                return Ok(false);
            }
            if wt < want {
                return Err(AugmentError::Invariant(format!(
                    "vertex {w} of weight {wt} on the path of ({u}, {v}) at level {i}"
                )));
            }
            let lvl = i - 2;
            let c = self.comp_index(lvl);
            while (self.cursor[w] as usize) < g.degree(w) {
                let (z, ez) = g.neighbor(w, self.cursor[w] as usize);
                self.cursor[w] += 1;
                if self.marked[z] || !self.unlayered_through(z, lvl) {
                    continue;
                }
                let d = &mut self.components[c];
                if d.find(z) == d.find(w) {
                    continue;
                }
                if self.dfs(g, i - 1, w, z, ez, out)? {
                    out.push(OrientedEdge { w: u, z: v, edge: e });
                    return Ok(true);
                }
            }
            self.tagged[w] = true;
            let top = self.h as u32 + 1;
            self.forest.set_weight(w, top);
        }
    }
}
