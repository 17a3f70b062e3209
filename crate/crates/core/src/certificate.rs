//! Lower-bound certificates for the minimum tree degree.
//!
//! If disjoint vertex sets `V_1, ..., V_l` have every boundary edge covered
//! by a set `W`, any spanning tree must spend `l - 1` edges on those boundary
//! edges, so some vertex of `W` has tree degree at least `(l - 1) / |W|`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::augment::{components_from_scratch, LayeringState};
use crate::graph::{Graph, VertexId};
use crate::tree::SpanningTree;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    /// `B_0, ..., B_{h+1}`.
    pub layers: Vec<Vec<VertexId>>,
    pub h: usize,
    pub clean_components: Vec<Vec<VertexId>>,
    pub bound: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum CertificateError {
    #[error("layering is not terminal")]
    NotTerminal,
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("vertex {0} appears in two layers")]
    LayersOverlap(VertexId),
    #[error("vertex {0} appears in two components")]
    ComponentsOverlap(VertexId),
    #[error("component {component} contains layer vertex {vertex}")]
    ComponentInLayer { component: usize, vertex: VertexId },
    #[error("component {component} is not connected (vertex {vertex} unreachable)")]
    ComponentNotConnected { component: usize, vertex: VertexId },
    #[error("boundary edge ({u}, {v}) has no endpoint in the boundary set")]
    UncoveredBoundaryEdge { u: VertexId, v: VertexId },
    #[error("claimed bound {claimed} exceeds verified bound {verified}")]
    BoundOverclaimed { claimed: usize, verified: usize },
    #[error("tree is not a spanning tree of the graph: {0}")]
    BadTree(String),
}

impl LowerBoundCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        serde_json::from_str(text).map_err(|e| CertificateError::Malformed(e.to_string()))
    }

    /// `|B_0| + ... + |B_i|`.
    pub fn prefix_size(&self, i: usize) -> usize {
        self.layers.iter().take(i + 1).map(Vec::len).sum()
    }

    /// Whether `(|B_0| + ... + |B_h|) / (|B_0| + ... + |B_{h+1}|) >= 1 / (1 + eps)`.
    pub fn pigeonhole_holds(&self) -> bool {
        ratio_within(self.prefix_size(self.h), self.prefix_size(self.h + 1), self.eps)
    }
}

/// Exact test of `outer <= (1 + eps) * inner`, reading `eps` as the dyadic
/// rational it stores.
pub fn ratio_within(inner: usize, outer: usize, eps: f64) -> bool {
    if outer <= inner {
        return true;
    }
    assert!(eps.is_finite() && eps > 0.0 && eps < 1.0);
    // eps = mant * 2^-shift exactly, with shift <= 1074
    let bits = eps.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, shift) = if exp == 0 { (frac, 1074) } else { (frac | (1u64 << 52), 1075 - exp) };
    let diff = (outer - inner) as u128;
    let rhs = mant as u128 * inner as u128;
    // diff * 2^shift <= rhs; rhs < 2^117
    if shift >= 117 {
        return false;
    }
    match diff.checked_shl(shift as u32) {
        Some(lhs) if lhs >> shift == diff => lhs <= rhs,
        _ => false,
    }
}

/// `Σ_{u∈B} deg(u) - 2|B| + 2`, a lower bound on the number of components of
/// `T \ B` (may be non-positive).
pub fn component_count_bound(t: &SpanningTree, b: &[VertexId]) -> i64 {
    let s: i64 = b.iter().map(|&u| t.degree(u) as i64).sum();
    s - 2 * b.len() as i64 + 2
}

fn ceil_bound(l: usize, w: usize) -> usize {
    if l <= 1 || w == 0 {
        0
    } else {
        (l - 1).div_ceil(w)
    }
}

fn clean_components(t: &SpanningTree, removed: &[bool], marked: &[bool]) -> Vec<Vec<VertexId>> {
    let label = components_from_scratch(t, removed);
    let count = label.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
    let mut comps = vec![Vec::new(); count];
    let mut dirty = vec![false; count];
    for (v, &c) in label.iter().enumerate() {
        if c == usize::MAX {
            continue;
        }
        comps[c].push(v);
        dirty[c] |= marked[v];
    }
    comps.into_iter().zip(dirty).filter(|(_, d)| !d).map(|(c, _)| c).collect()
}

/// Picks, among the levels where the layer sizes grow by at most a factor
/// `1 + eps`, the one with the strongest bound (smallest level on ties).
pub fn build_certificate(
    state: &LayeringState,
    t: &SpanningTree,
) -> Result<LowerBoundCertificate, CertificateError> {
    if !state.is_terminal() {
        return Err(CertificateError::NotTerminal);
    }
    let n = t.n();
    let computed = state.layers().len();
    let last = (computed - 1).min(state.h_max().saturating_sub(1));
    let size = |i: usize| state.layer(i).len();
    let mut prefix = vec![0usize; computed + 2];
    for i in 0..computed + 1 {
        prefix[i + 1] = prefix[i] + size(i);
    }
    // prefix[i + 1] = |B_0| + ... + |B_i|
    let mut removed = vec![false; n];
    let mut best: Option<(usize, usize, Vec<Vec<VertexId>>)> = None;
    for h in 0..=last {
        for &v in state.layer(h) {
            removed[v] = true;
        }
        if !ratio_within(prefix[h + 1], prefix[h + 2], state.eps()) {
            continue;
        }
        let comps = clean_components(t, &removed, state.marked());
        let bound = ceil_bound(comps.len(), prefix[h + 2]);
        if best.as_ref().is_none_or(|b| bound > b.1) {
            best = Some((h, bound, comps));
        }
    }
    let (h, bound, clean) = best.expect("some level always passes the ratio test");
    let layers = (0..h + 2).map(|i| state.layer(i).to_vec()).collect();
    Ok(LowerBoundCertificate {
        n,
        k: state.k(),
        eps: state.eps(),
        layers,
        h,
        clean_components: clean,
        bound,
    })
}

/// Re-derives the bound from the graph, the tree and the claimed sets alone.
pub fn verify_certificate(
    g: &Graph,
    t: &SpanningTree,
    cert: &LowerBoundCertificate,
) -> Result<usize, CertificateError> {
    let n = g.n();
    if cert.n != n || t.n() != n {
        return Err(CertificateError::Malformed(format!("certificate is for n = {}, graph has {n}", cert.n)));
    }
    t.check(g).map_err(|e| CertificateError::BadTree(e.to_string()))?;
    if cert.layers.len() != cert.h + 2 {
        return Err(CertificateError::Malformed(format!(
            "expected {} layers for h = {}, found {}",
            cert.h + 2,
            cert.h,
            cert.layers.len()
        )));
    }
    const NONE: usize = usize::MAX;
    let mut layer_of = vec![NONE; n];
    for (i, layer) in cert.layers.iter().enumerate() {
        for &v in layer {
            if v >= n {
                return Err(CertificateError::VertexOutOfRange(v));
            }
            if layer_of[v] != NONE {
                return Err(CertificateError::LayersOverlap(v));
            }
            layer_of[v] = i;
        }
    }
    let in_w = |v: VertexId| layer_of[v] != NONE;
    let removed: Vec<bool> = layer_of.iter().map(|&i| i != NONE && i <= cert.h).collect();
    let mut comp_of = vec![NONE; n];
    for (c, comp) in cert.clean_components.iter().enumerate() {
        if comp.is_empty() {
            return Err(CertificateError::Malformed(format!("component {c} is empty")));
        }
        for &v in comp {
            if v >= n {
                return Err(CertificateError::VertexOutOfRange(v));
            }
            if comp_of[v] != NONE {
                return Err(CertificateError::ComponentsOverlap(v));
            }
            if removed[v] {
                return Err(CertificateError::ComponentInLayer { component: c, vertex: v });
            }
            comp_of[v] = c;
        }
    }
    // each component must be connected through tree edges inside it
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for (c, comp) in cert.clean_components.iter().enumerate() {
        seen[comp[0]] = true;
        stack.push(comp[0]);
        while let Some(u) = stack.pop() {
            for (v, _) in t.neighbors(u) {
                if comp_of[v] == c && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if let Some(&v) = comp.iter().find(|&&v| !seen[v]) {
            return Err(CertificateError::ComponentNotConnected { component: c, vertex: v });
        }
    }
    for &(u, v) in g.edges() {
        let (cu, cv) = (comp_of[u], comp_of[v]);
        if (cu != NONE || cv != NONE) && cu != cv && !in_w(u) && !in_w(v) {
            return Err(CertificateError::UncoveredBoundaryEdge { u, v });
        }
    }
    let w = layer_of.iter().filter(|&&i| i != NONE).count();
    let verified = ceil_bound(cert.clean_components.len(), w);
    if verified < cert.bound {
        return Err(CertificateError::BoundOverclaimed { claimed: cert.bound, verified });
    }
    Ok(verified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::bfs_tree;

    fn star(n: usize) -> (Graph, SpanningTree) {
        let g = Graph::new(n, (1..n).map(|v| (0, v)).collect()).unwrap();
        let t = bfs_tree(&g, 0);
        (g, t)
    }

    fn cert(n: usize, layers: Vec<Vec<usize>>, comps: Vec<Vec<usize>>, bound: usize) -> LowerBoundCertificate {
        LowerBoundCertificate {
            n,
            k: 3,
            eps: 0.01,
            h: layers.len() - 2,
            layers,
            clean_components: comps,
            bound,
        }
    }

    #[test]
    fn star_residue_bound() {
        let (g, t) = star(5);
        let c = cert(5, vec![vec![0], vec![]], vec![vec![1], vec![2], vec![3], vec![4]], 3);
        assert_eq!(verify_certificate(&g, &t, &c), Ok(3));
        let over = LowerBoundCertificate { bound: 4, ..c };
        assert_eq!(
            verify_certificate(&g, &t, &over),
            Err(CertificateError::BoundOverclaimed { claimed: 4, verified: 3 })
        );
    }

    #[test]
    fn five_sets_two_hubs() {
        // hubs 0 and 1 joined, leaves 2..=4 on 0 and 5..=6 on 1
        let g = Graph::new(7, vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6)]).unwrap();
        let t = bfs_tree(&g, 0);
        let c = cert(7, vec![vec![0, 1], vec![]], (2..7).map(|v| vec![v]).collect(), 2);
        assert_eq!(verify_certificate(&g, &t, &c), Ok(2));
    }

    #[test]
    fn uncovered_edge_is_named() {
        let g = Graph::new(5, vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2)]).unwrap();
        let t = bfs_tree(&g, 0);
        let c = cert(5, vec![vec![0], vec![]], vec![vec![1], vec![2], vec![3], vec![4]], 3);
        assert_eq!(
            verify_certificate(&g, &t, &c),
            Err(CertificateError::UncoveredBoundaryEdge { u: 1, v: 2 })
        );
    }

    #[test]
    fn structural_rejections() {
        let (g, t) = star(5);
        let overlap = cert(5, vec![vec![0], vec![]], vec![vec![1], vec![1]], 0);
        assert_eq!(verify_certificate(&g, &t, &overlap), Err(CertificateError::ComponentsOverlap(1)));
        let split = cert(5, vec![vec![0], vec![]], vec![vec![1, 2]], 0);
        assert_eq!(
            verify_certificate(&g, &t, &split),
            Err(CertificateError::ComponentNotConnected { component: 0, vertex: 2 })
        );
        let inside = cert(5, vec![vec![0], vec![]], vec![vec![0]], 0);
        assert_eq!(
            verify_certificate(&g, &t, &inside),
            Err(CertificateError::ComponentInLayer { component: 0, vertex: 0 })
        );
        let vacuous = cert(5, vec![vec![0], vec![1, 2, 3, 4]], vec![], 0);
        assert_eq!(verify_certificate(&g, &t, &vacuous), Ok(0));
    }

    #[test]
    fn json_roundtrip() {
        let c = cert(5, vec![vec![0], vec![]], vec![vec![1], vec![2]], 1);
        let back = LowerBoundCertificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(matches!(
            LowerBoundCertificate::from_json("{\"n\": 1}"),
            Err(CertificateError::Malformed(_))
        ));
    }

    #[test]
    fn ratio_is_exact() {
        assert!(ratio_within(100, 110, 0.1));
        assert!(!ratio_within(100, 111, 0.1));
        // 0.1 as a double is slightly above 1/10, so 10 * 1.1 lands just inside
        assert!(ratio_within(10, 11, 0.1));
        assert!(ratio_within(0, 0, 0.1));
        assert!(!ratio_within(0, 1, 0.1));
        assert!(ratio_within(1 << 40, (1 << 40) + (1 << 30), 0.001));
    }

    #[test]
    fn boundary_bound_examples() {
        let g = Graph::new(5, (0..4).map(|i| (i, i + 1)).collect()).unwrap();
        let t = bfs_tree(&g, 0);
        assert_eq!(component_count_bound(&t, &[2]), 2);
        let (_, s) = star(6);
        assert_eq!(component_count_bound(&s, &[0]), 5);
    }
}
