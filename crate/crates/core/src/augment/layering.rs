use super::AugmentError;
use crate::dsu::DisjointSets;
use crate::forest::LinkCutForest;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::tree::SpanningTree;

/// `layer_of` value for vertices outside every layer.
pub const UNLAYERED: u32 = u32::MAX;

/// Number of layers after which the search gives up: `⌈1 + ln n / ln(1 + eps)⌉`.
pub fn h_max_for(n: usize, eps: f64) -> usize {
    (1.0 + (n.max(1) as f64).ln() / (1.0 + eps).ln()).ceil() as usize
}

/// One layering of the repeat loop, plus the search state that lives with it.
///
/// `components[i]` partitions `T \ (B_0 ∪ ... ∪ B_i)`; vertices inside those
/// layers stay as inert singletons. Only layers up to the last computed one
/// get a partition: once a layer comes out empty every later one would too,
/// and their partitions coincide with the last.
#[derive(Clone, Debug)]
pub struct LayeringState {
    pub(crate) k: usize,
    pub(crate) eps: f64,
    pub(crate) h: usize,
    pub(crate) h_max: usize,
    pub(crate) layer_of: Vec<u32>,
    pub(crate) layers: Vec<Vec<VertexId>>,
    pub(crate) marked: Vec<bool>,
    pub(crate) tagged: Vec<bool>,
    /// B_0 vertices whose degree fell below k; they no longer anchor sequences.
    pub(crate) retired: Vec<bool>,
    pub(crate) live_anchors: usize,
    pub(crate) cursor: Vec<u32>,
    pub(crate) components: Vec<DisjointSets>,
    pub(crate) forest: LinkCutForest,
    pub(crate) terminal: bool,
    pub(crate) cross_edge: Option<EdgeId>,
}

/// Runs the layering for threshold `k` on tree `t`.
///
/// `marked` must contain every vertex of degree `k - 1`.
pub fn build_layering(
    g: &Graph,
    t: &SpanningTree,
    k: usize,
    eps: f64,
    marked: Vec<bool>,
) -> Result<LayeringState, AugmentError> {
    if k < 3 {
        return Err(AugmentError::ThresholdTooSmall(k));
    }
    let n = g.n();
    assert_eq!(marked.len(), n);
    let mut state = LayeringState {
        k,
        eps,
        h: 0,
        h_max: h_max_for(n, eps),
        layer_of: vec![UNLAYERED; n],
        layers: Vec::new(),
        marked,
        tagged: vec![false; n],
        retired: vec![false; n],
        live_anchors: 0,
        cursor: vec![0; n],
        components: Vec::new(),
        forest: LinkCutForest::new(0),
        terminal: false,
        cross_edge: None,
    };
    state.relayer(g, t)?;
    Ok(state)
}

impl LayeringState {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Current top layer index. Equals `h_max` (or more) once terminal.
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn h_max(&self) -> usize {
        self.h_max
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal
    }

    /// Computed layers `B_0, ..., B_L`; any layer past `L` is empty.
    pub fn layers(&self) -> &[Vec<VertexId>] {
        &self.layers
    }

    /// `|B_i|` for `i` in `0..=h`, including trailing empty layers.
    pub fn layer_sizes(&self) -> Vec<usize> {
        (0..=self.h).map(|i| self.layers.get(i).map_or(0, Vec::len)).collect()
    }

    pub fn layer(&self, i: usize) -> &[VertexId] {
        self.layers.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn layer_of(&self, v: VertexId) -> Option<usize> {
        match self.layer_of[v] {
            UNLAYERED => None,
            i => Some(i as usize),
        }
    }

    pub fn is_marked(&self, v: VertexId) -> bool {
        self.marked[v]
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    pub fn is_tagged(&self, v: VertexId) -> bool {
        self.tagged[v]
    }

    /// The edge that stopped the layering, if it stopped before `h_max`.
    pub fn cross_edge(&self) -> Option<EdgeId> {
        self.cross_edge
    }

    /// Index into `components` serving layer `i`.
    #[inline]
    pub(crate) fn comp_index(&self, i: usize) -> usize {
        i.min(self.components.len() - 1)
    }

    /// Whether `u` and `v` (both outside `B_0..B_i`) share a component of
    /// `T \ (B_0 ∪ ... ∪ B_i)` according to the maintained partition.
    pub fn same_component(&mut self, i: usize, u: VertexId, v: VertexId) -> bool {
        let c = self.comp_index(i);
        let d = &mut self.components[c];
        d.find(u) == d.find(v)
    }

    /// Forest weight for `v` under the current layering and tags.
    #[inline]
    pub(crate) fn weight_of(&self, v: VertexId) -> u32 {
        let top = self.h as u32 + 1;
        match self.layer_of[v] {
            UNLAYERED => top,
            _ if self.tagged[v] || self.retired[v] => top,
            i => i,
        }
    }

    #[inline]
    pub(crate) fn unlayered_through(&self, v: VertexId, i: usize) -> bool {
        let l = self.layer_of[v];
        l == UNLAYERED || l as usize > i
    }

    fn partition_without_layers(&self, g: &Graph, t: &SpanningTree) -> DisjointSets {
        let mut d = DisjointSets::new(g.n());
        for u in 0..g.n() {
            if self.layer_of[u] != UNLAYERED {
                continue;
            }
            for (v, _) in t.neighbors(u) {
                if u < v && self.layer_of[v] == UNLAYERED {
                    d.union(u, v).expect("in range");
                }
            }
        }
        d
    }

    fn find_cross_edge(&mut self, g: &Graph) -> Option<EdgeId> {
        let c = self.components.len() - 1;
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if self.layer_of[u] != UNLAYERED || self.layer_of[v] != UNLAYERED {
                continue;
            }
            if self.marked[u] || self.marked[v] {
                continue;
            }
            let d = &mut self.components[c];
            if d.find(u) != d.find(v) {
                return Some(e);
            }
        }
        None
    }

    fn next_layer(&mut self, g: &Graph) -> Vec<VertexId> {
        let c = self.components.len() - 1;
        let mut next = Vec::new();
        for u in 0..g.n() {
            if !self.marked[u] || self.layer_of[u] != UNLAYERED {
                continue;
            }
            let d = &mut self.components[c];
            let cu = d.find(u);
            let hit = g.neighbors(u).any(|(v, _)| {
                self.layer_of[v] == UNLAYERED && !self.marked[v] && d.find(v) != cu
            });
            if hit {
                next.push(u);
            }
        }
        next
    }

    /// Recomputes layers from scratch for the current tree and marks, clears
    /// all tags, and rebuilds the forest weights.
    pub(crate) fn relayer(&mut self, g: &Graph, t: &SpanningTree) -> Result<(), AugmentError> {
        let n = g.n();
        self.layer_of.fill(UNLAYERED);
        self.layers.clear();
        self.components.clear();
        self.tagged.fill(false);
        self.retired.fill(false);
        self.cursor.fill(0);
        self.terminal = false;
        self.cross_edge = None;

        let b0 = t.vertices_at_least(self.k);
        if b0.is_empty() {
            return Err(AugmentError::EmptySk(self.k));
        }
        for &v in &b0 {
            self.layer_of[v] = 0;
        }
        self.live_anchors = b0.len();
        self.layers.push(b0);
        self.h = 0;
        loop {
            let d = self.partition_without_layers(g, t);
            self.components.push(d);
            if self.h >= self.h_max {
                self.terminal = true;
                break;
            }
            if let Some(e) = self.find_cross_edge(g) {
                self.cross_edge = Some(e);
                break;
            }
            let next = self.next_layer(g);
            if next.is_empty() {
                self.h = self.h_max;
                self.terminal = true;
                break;
            }
            let idx = self.layers.len() as u32;
            for &v in &next {
                self.layer_of[v] = idx;
            }
            self.layers.push(next);
            self.h += 1;
        }
        let weights: Vec<u32> = (0..n).map(|v| self.weight_of(v)).collect();
        self.forest = LinkCutForest::from_tree(t, &weights);
        Ok(())
    }
}
