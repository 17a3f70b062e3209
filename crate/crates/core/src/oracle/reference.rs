use crate::augment::{components_from_scratch, h_max_for, AugmentError, DegRedReport};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::tree::SpanningTree;

const NONE: usize = usize::MAX;

/// Direct restatement of the layered search: explicit tree paths, and every
/// layer partition recomputed by BFS after each tree change. Tie-breaks match
/// the fast version, so the two must agree step for step.
struct Naive<'a> {
    g: &'a Graph,
    k: usize,
    h: usize,
    h_max: usize,
    layer: Vec<usize>,
    layers: Vec<Vec<VertexId>>,
    marked: Vec<bool>,
    tagged: Vec<bool>,
    retired: Vec<bool>,
    cursor: Vec<usize>,
    /// `comp[i]` labels `T \ (B_0 ∪ ... ∪ B_i)` for each computed layer.
    comp: Vec<Vec<usize>>,
}

impl Naive<'_> {
    fn removed_through(&self, i: usize) -> Vec<bool> {
        self.layer.iter().map(|&l| l != NONE && l <= i).collect()
    }

    fn recompute(&mut self, t: &SpanningTree) {
        self.comp = (0..self.layers.len()).map(|i| components_from_scratch(t, &self.removed_through(i))).collect();
    }

    fn comp_at(&self, i: usize) -> &[usize] {
        &self.comp[i.min(self.comp.len() - 1)]
    }

    fn weight(&self, v: VertexId) -> usize {
        let top = self.h + 1;
        if self.layer[v] == NONE || self.tagged[v] || self.retired[v] {
            top
        } else {
            self.layer[v]
        }
    }

    fn path_min(&self, t: &SpanningTree, u: VertexId, v: VertexId) -> (VertexId, usize) {
        let path = t.tree_path(u, v).expect("distinct endpoints").0;
        path.into_iter().map(|x| (x, self.weight(x))).min_by_key(|&(x, w)| (w, x)).expect("nonempty")
    }

    fn layering(&mut self, t: &SpanningTree) {
        let n = self.g.n();
        self.layer = vec![NONE; n];
        self.tagged = vec![false; n];
        self.retired = vec![false; n];
        self.cursor = vec![0; n];
        let b0: Vec<VertexId> = (0..n).filter(|&v| t.degree(v) >= self.k).collect();
        for &v in &b0 {
            self.layer[v] = 0;
        }
        self.layers = vec![b0];
        self.h = 0;
        loop {
            let c = components_from_scratch(t, &self.removed_through(self.h));
            let free = |v: VertexId| self.layer[v] == NONE;
            if self.h >= self.h_max {
                break;
            }
            let cross = self.g.edges().iter().any(|&(u, v)| {
                free(u) && free(v) && !self.marked[u] && !self.marked[v] && c[u] != c[v]
            });
            if cross {
                break;
            }
            let next: Vec<VertexId> = (0..n)
                .filter(|&u| {
                    free(u)
                        && self.marked[u]
                        && self.g.neighbors(u).any(|(v, _)| free(v) && !self.marked[v] && c[u] != c[v])
                })
                .collect();
            if next.is_empty() {
                self.h = self.h_max;
                break;
            }
            for &v in &next {
                self.layer[v] = self.layers.len();
            }
            self.layers.push(next);
            self.h += 1;
        }
        self.recompute(t);
    }

    fn outside(&self, v: VertexId, i: usize) -> bool {
        self.layer[v] == NONE || self.layer[v] > i
    }

    fn dfs(
        &mut self,
        t: &SpanningTree,
        i: usize,
        u: VertexId,
        v: VertexId,
        e: EdgeId,
        out: &mut Vec<(VertexId, VertexId, EdgeId)>,
    ) -> Result<bool, AugmentError> {
        if i == 1 {
            if self.path_min(t, u, v).1 != 0 {
                return Ok(false);
            }
            out.push((u, v, e));
            return Ok(true);
        }
        loop {
            let (w, wt) = self.path_min(t, u, v);
            if wt > i - 1 {
                return Ok(false);
            }
            if wt < i - 1 {
                return Err(AugmentError::Invariant(format!("reference: weight {wt} below level {i}")));
            }
            while self.cursor[w] < self.g.degree(w) {
                let (z, ez) = self.g.neighbor(w, self.cursor[w]);
                self.cursor[w] += 1;
                if self.marked[z] || !self.outside(z, i - 2) {
                    continue;
                }
                let c = self.comp_at(i - 2);
                if c[z] == c[w] {
                    continue;
                }
                if self.dfs(t, i - 1, w, z, ez, out)? {
                    out.push((u, v, e));
                    return Ok(true);
                }
            }
            self.tagged[w] = true;
        }
    }

    fn live_anchors(&self, t: &SpanningTree) -> usize {
        self.layers[0].iter().filter(|&&v| t.degree(v) >= self.k).count()
    }

    /// Applies `seq` (edges from `w_1` upward) with explicit paths and the
    /// checked swap.
    fn apply(
        &mut self,
        t: &mut SpanningTree,
        anchor: VertexId,
        seq: &[(VertexId, VertexId, EdgeId)],
    ) -> Result<(), AugmentError> {
        let k = self.k;
        let before: Vec<usize> = t.degrees();
        for i in (0..seq.len()).rev() {
            let (a, b, e) = seq[i];
            let wi = if i == 0 { anchor } else { seq[i - 1].0 };
            let path = t.tree_path(a, b).expect("distinct endpoints").0;
            let pos = path
                .iter()
                .position(|&x| x == wi)
                .ok_or_else(|| AugmentError::InvalidSequence(format!("reference: w_{i} off path")))?;
            let x = path[pos + 1];
            let r = self.g.edge_id(wi, x).expect("tree edge");
            t.swap_edge(self.g, e, r).map_err(|err| AugmentError::InvalidSequence(err.to_string()))?;
            for v in [a, b, wi, x] {
                if t.degree(v) + 1 == k {
                    self.marked[v] = true;
                }
                if self.layer[v] == 0 && t.degree(v) < k {
                    self.retired[v] = true;
                }
            }
        }
        let after = t.degrees();
        let dk = |d: &[usize]| d.iter().filter(|&&x| x >= k).sum::<usize>();
        if dk(&after) >= dk(&before) || (0..after.len()).any(|v| before[v] < k && after[v] >= k) {
            return Err(AugmentError::Invariant("reference: modification did not help".into()));
        }
        self.recompute(t);
        Ok(())
    }
}

/// Same contract as the fast degree reduction, computed naively.
pub fn reference_degred(
    g: &Graph,
    t: &mut SpanningTree,
    k: usize,
    eps: f64,
) -> Result<DegRedReport, AugmentError> {
    if k < 3 {
        return Err(AugmentError::ThresholdTooSmall(k));
    }
    let n = g.n();
    let d_before = t.degree_sum_at_least(k);
    if d_before == 0 {
        return Err(AugmentError::EmptySk(k));
    }
    let mut s = Naive {
        g,
        k,
        h: 0,
        h_max: h_max_for(n, eps),
        layer: Vec::new(),
        layers: Vec::new(),
        marked: (0..n).map(|v| t.degree(v) + 1 == k).collect(),
        tagged: Vec::new(),
        retired: Vec::new(),
        cursor: Vec::new(),
        comp: Vec::new(),
    };
    let mut report = DegRedReport {
        k,
        d_before,
        d_after: d_before,
        modifications: 0,
        marked_growth: 0,
        h_trace: Vec::new(),
        h_non_increase: 0,
        h_non_increase_clean: 0,
        d_trace: Vec::new(),
        s_trace: Vec::new(),
        validated: 0,
        emptied: false,
        last_h: 0,
        last_layer_sizes: Vec::new(),
        final_state: None,
    };
    let marked_at_start = s.marked.iter().filter(|&&m| m).count();
    s.layering(t);
    loop {
        report.h_trace.push(s.h);
        let anchors_before = s.layers[0].len();
        let mods_before = report.modifications;
        for e in 0..g.m() {
            if s.live_anchors(t) == 0 {
                break;
            }
            let (u, v) = g.endpoints(e);
            if t.contains_edge(e) || s.layer[u] != NONE || s.layer[v] != NONE || s.marked[u] || s.marked[v] {
                continue;
            }
            let c = s.comp_at(s.h);
            if c[u] == c[v] {
                continue;
            }
            let mut out = Vec::new();
            if !s.dfs(t, s.h + 1, u, v, e, &mut out)? {
                continue;
            }
            let (anchor, w) = s.path_min(t, out[0].0, out[0].1);
            if w != 0 {
                return Err(AugmentError::Invariant("reference: no anchor".into()));
            }
            s.apply(t, anchor, &out)?;
            report.modifications += 1;
            report.d_trace.push(t.degree_sum_at_least(k));
            report.s_trace.push(t.count_at_least(k));
        }
        let live = s.live_anchors(t);
        if live == 0 {
            report.emptied = true;
            break;
        }
        if s.h >= s.h_max {
            break;
        }
        let prev = s.h;
        s.layering(t);
        if s.h <= prev {
            if report.modifications == mods_before {
                return Err(AugmentError::Invariant("reference: stalled".into()));
            }
            report.h_non_increase += 1;
            if live == anchors_before {
                report.h_non_increase_clean += 1;
            }
        }
    }
    report.d_after = t.degree_sum_at_least(k);
    report.marked_growth = s.marked.iter().filter(|&&m| m).count() - marked_at_start;
    report.last_h = s.h;
    report.last_layer_sizes = s.layers.iter().map(Vec::len).collect();
    Ok(report)
}
