use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::layering::LayeringState;
use super::AugmentError;
use crate::forest::DynamicForest;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::tree::SpanningTree;

/// A non-tree edge with a chosen orientation: `w` is the endpoint whose tree
/// degree goes up once the edge is inserted, `z` the other one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub w: VertexId,
    pub z: VertexId,
    pub edge: EdgeId,
}

/// `w_0` followed by edges `(w_1, z_1), ..., (w_l, z_l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentingSequence {
    pub anchor: VertexId,
    pub edges: Vec<OrientedEdge>,
}

impl AugmentingSequence {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `w_i`, with `w_0` the anchor.
    pub fn w(&self, i: usize) -> VertexId {
        if i == 0 {
            self.anchor
        } else {
            self.edges[i - 1].w
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceViolation {
    Empty,
    NotAnEdge { index: usize },
    TreeEdge { index: usize },
    RepeatedEndpoint { vertex: VertexId },
    AnchorBelowThreshold { anchor: VertexId, degree: usize },
    /// `w_i` is missing from the path of edge `i + 1`.
    NotOnNextPath { i: usize },
    /// `w_i` lies on the path of edge `j >= i + 2`.
    OnLaterPath { i: usize, j: usize },
    MarkedZ { i: usize },
    UnmarkedInteriorW { i: usize },
    MarkedLastW,
}

impl SequenceViolation {
    /// Which of the two defining properties fails (0 for malformed input).
    pub fn property(&self) -> u8 {
        match self {
            SequenceViolation::NotOnNextPath { .. } | SequenceViolation::OnLaterPath { .. } => 1,
            SequenceViolation::MarkedZ { .. }
            | SequenceViolation::UnmarkedInteriorW { .. }
            | SequenceViolation::MarkedLastW => 2,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<SequenceViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every condition on an augmenting sequence directly, with explicit
/// tree paths.
pub fn validate_sequence(
    g: &Graph,
    t: &SpanningTree,
    k: usize,
    marked: &[bool],
    seq: &AugmentingSequence,
) -> ValidationReport {
    let mut bad = Vec::new();
    let l = seq.len();
    if l == 0 {
        bad.push(SequenceViolation::Empty);
        return ValidationReport { violations: bad };
    }
    for (i, oe) in seq.edges.iter().enumerate() {
        let index = i + 1;
        if oe.edge >= g.m() || {
            let (a, b) = g.endpoints(oe.edge);
            !((a, b) == (oe.w, oe.z) || (b, a) == (oe.w, oe.z))
        } {
            bad.push(SequenceViolation::NotAnEdge { index });
        } else if t.contains_edge(oe.edge) {
            bad.push(SequenceViolation::TreeEdge { index });
        }
    }
    if !bad.is_empty() {
        return ValidationReport { violations: bad };
    }
    let mut seen = HashSet::new();
    for oe in &seq.edges {
        for x in [oe.w, oe.z] {
            if !seen.insert(x) {
                bad.push(SequenceViolation::RepeatedEndpoint { vertex: x });
            }
        }
    }
    if t.degree(seq.anchor) < k {
        bad.push(SequenceViolation::AnchorBelowThreshold {
            anchor: seq.anchor,
            degree: t.degree(seq.anchor),
        });
    }
    let paths: Vec<HashSet<VertexId>> = seq
        .edges
        .iter()
        .map(|oe| t.tree_path(oe.w, oe.z).map(|p| p.0.into_iter().collect()).unwrap_or_default())
        .collect();
    for i in 0..l {
        let wi = seq.w(i);
        if !paths[i].contains(&wi) {
            bad.push(SequenceViolation::NotOnNextPath { i });
        }
        for j in i + 2..=l {
            if paths[j - 1].contains(&wi) {
                bad.push(SequenceViolation::OnLaterPath { i, j });
            }
        }
    }
    for (idx, oe) in seq.edges.iter().enumerate() {
        let i = idx + 1;
        if marked[oe.z] {
            bad.push(SequenceViolation::MarkedZ { i });
        }
        if i < l && !marked[oe.w] {
            bad.push(SequenceViolation::UnmarkedInteriorW { i });
        }
    }
    if marked[seq.edges[l - 1].w] {
        bad.push(SequenceViolation::MarkedLastW);
    }
    ValidationReport { violations: bad }
}

/// What one staged insertion changed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModificationReport {
    pub added: Vec<EdgeId>,
    pub removed: Vec<EdgeId>,
    /// Net degree change per touched vertex, nonzero entries only.
    pub degree_deltas: Vec<(VertexId, i64)>,
    pub newly_marked: Vec<VertexId>,
    pub d_k_before: usize,
    pub d_k_after: usize,
}

/// Inserts `seq` into `t` from the last edge down, removing at each step the
/// edge at `w_i` on the cycle through `z_{i+1}`.
///
/// The forest, components, marks and anchor weights in `state` are kept in
/// step with the tree.
pub fn apply_sequence(
    g: &Graph,
    t: &mut SpanningTree,
    state: &mut LayeringState,
    seq: &AugmentingSequence,
) -> Result<ModificationReport, AugmentError> {
    let before = t.degree_sum_at_least(state.k);
    state.apply(g, t, seq, before)
}

impl LayeringState {
    pub(crate) fn apply(
        &mut self,
        g: &Graph,
        t: &mut SpanningTree,
        seq: &AugmentingSequence,
        d_k_before: usize,
    ) -> Result<ModificationReport, AugmentError> {
        let k = self.k;
        let l = seq.len();
        if l == 0 {
            return Err(AugmentError::InvalidSequence("empty sequence".into()));
        }
        let mut touched: Vec<(VertexId, usize)> = Vec::with_capacity(4 * l);
        let mut note = |v: VertexId, t: &SpanningTree| {
            if !touched.iter().any(|&(x, _)| x == v) {
                touched.push((v, t.degree(v)));
            }
        };
        let mut report = ModificationReport { d_k_before, ..Default::default() };
        for i in (0..l).rev() {
            let OrientedEdge { w: a, z: b, edge: e } = seq.edges[i];
            let wi = seq.w(i);
            if t.contains_edge(e) {
                return Err(AugmentError::InvalidSequence(format!("edge {e} is already in the tree")));
            }
            if wi == a || wi == b {
                return Err(AugmentError::InvalidSequence(format!("w_{i} is an endpoint of edge {}", i + 1)));
            }
            if !self.forest.on_path(a, b, wi) {
                return Err(AugmentError::InvalidSequence(format!(
                    "w_{i} = {wi} is not on the path of ({a}, {b})"
                )));
            }
            let x = self.forest.step_toward(wi, b);
            let r = g.edge_id(wi, x).expect("forest mirrors tree edges");
            for v in [a, b, wi, x] {
                note(v, t);
            }
            t.swap_unchecked(g, e, r);
            self.forest.cut(wi, x)?;
            self.forest.link(a, b)?;
            let c = self.comp_index(i);
            self.components[c].union(a, b).expect("in range");
            report.added.push(e);
            report.removed.push(r);
            for v in [a, b, wi, x] {
                let d = t.degree(v);
                if d + 1 == k && !self.marked[v] {
                    self.marked[v] = true;
                    report.newly_marked.push(v);
                }
                if self.layer_of[v] == 0 && !self.retired[v] && d < k {
                    self.retired[v] = true;
                    self.live_anchors -= 1;
                    let top = self.h as u32 + 1;
                    self.forest.set_weight(v, top);
                }
            }
        }
        let contrib = |d: usize| if d >= k { d as i64 } else { 0 };
        let mut delta = 0i64;
        for &(v, old) in &touched {
            let new = t.degree(v);
            if old < k && new >= k {
                return Err(AugmentError::Invariant(format!("vertex {v} entered S_{k}")));
            }
            delta += contrib(new) - contrib(old);
            if new != old {
                report.degree_deltas.push((v, new as i64 - old as i64));
            }
        }
        report.degree_deltas.sort_unstable();
        if delta >= 0 {
            return Err(AugmentError::Invariant(format!("d_{k} did not decrease (change {delta})")));
        }
        report.d_k_after = (d_k_before as i64 + delta) as usize;
        Ok(report)
    }
}
