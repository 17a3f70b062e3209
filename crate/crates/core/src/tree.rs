//! Spanning-tree state over a [`Graph`] with a live degree histogram.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, Neighbors, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("path endpoints coincide at vertex {0}")]
    SameVertex(VertexId),
    #[error("edge {0} is already a tree edge")]
    AlreadyTreeEdge(EdgeId),
    #[error("edge {remove} is not on the tree cycle closed by edge {add}")]
    NotOnCycle { add: EdgeId, remove: EdgeId },
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("edge set is not a spanning tree: {0}")]
    NotSpanning(String),
}

/// Ordered vertices of the unique tree path between two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePath(pub Vec<VertexId>);

impl TreePath {
    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }
}

/// A spanning tree of a graph.
///
/// Tree adjacency rows are unordered; `slot` records where each tree edge sits
/// in both endpoint rows so removal is O(1), and is `u32::MAX` off the tree.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    /// Row `u` lives at `start[u]..start[u] + len[u]` in `nbr` and `eid`,
    /// with room for every graph edge at `u`.
    start: Vec<usize>,
    len: Vec<u32>,
    nbr: Vec<u32>,
    eid: Vec<u32>,
    slot: Vec<[u32; 2]>,
    hist: Vec<usize>,
    max_deg: usize,
    edge_count: usize,
}

impl SpanningTree {
    fn empty(g: &Graph) -> SpanningTree {
        let mut hist = vec![0; g.n().max(2)];
        hist[0] = g.n();
        SpanningTree {
            start: (0..g.n()).map(|u| g.row_start(u)).collect(),
            len: vec![0; g.n()],
            nbr: vec![0; 2 * g.m()],
            eid: vec![0; 2 * g.m()],
            slot: vec![[u32::MAX; 2]; g.m()],
            hist,
            max_deg: 0,
            edge_count: 0,
        }
    }

    /// Builds a tree from an explicit edge-id set, checking that it spans `g`.
    pub fn from_edges(g: &Graph, edges: &[EdgeId]) -> Result<SpanningTree, TreeError> {
        let mut t = SpanningTree::empty(g);
        if edges.len() + 1 != g.n() {
            return Err(TreeError::NotSpanning(format!(
                "{} edges for {} vertices",
                edges.len(),
                g.n()
            )));
        }
        for &e in edges {
            if e >= g.m() {
                return Err(TreeError::UnknownEdge(e));
            }
            if t.contains_edge(e) {
                return Err(TreeError::NotSpanning(format!("edge {e} listed twice")));
            }
            t.attach(g, e);
        }
        if let Some(v) = t.first_unreachable() {
            return Err(TreeError::NotSpanning(format!(
                "vertex {v} not reached from vertex 0"
            )));
        }
        Ok(t)
    }

    fn first_unreachable(&self) -> Option<VertexId> {
        let n = self.len.len();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    fn bump(&mut self, old: usize, new: usize) {
        self.hist[old] -= 1;
        if new >= self.hist.len() {
            self.hist.resize(new + 1, 0);
        }
        self.hist[new] += 1;
        // degrees move by one, so an emptied top class hands over to `new`
        if new > self.max_deg || (old == self.max_deg && self.hist[old] == 0) {
            self.max_deg = new;
        }
    }

    fn attach(&mut self, g: &Graph, e: EdgeId) {
        let (u, v) = g.endpoints(e);
        self.attach_between(u, v, e);
    }

    /// `attach` with the endpoints of `e` already known, in graph order.
    fn attach_between(&mut self, u: VertexId, v: VertexId, e: EdgeId) {
        self.slot[e] = [self.len[u], self.len[v]];
        self.push_cell(u, v, e);
        self.push_cell(v, u, e);
        self.bump(self.len[u] as usize - 1, self.len[u] as usize);
        self.bump(self.len[v] as usize - 1, self.len[v] as usize);
        self.edge_count += 1;
    }

    fn detach_from(&mut self, g: &Graph, x: VertexId, side: usize, e: EdgeId) {
        let pos = self.slot[e][side] as usize;
        let last = self.len[x] as usize - 1;
        let s = self.start[x];
        self.nbr.swap(s + pos, s + last);
        self.eid.swap(s + pos, s + last);
        self.len[x] -= 1;
        if pos < last {
            let moved = self.eid[s + pos] as usize;
            let at = if g.endpoints(moved).0 == x { 0 } else { 1 };
            self.slot[moved][at] = pos as u32;
        }
    }

    #[inline]
    fn push_cell(&mut self, u: VertexId, v: VertexId, e: EdgeId) {
        let j = self.start[u] + self.len[u] as usize;
        self.nbr[j] = v as u32;
        self.eid[j] = e as u32;
        self.len[u] += 1;
    }

    fn detach(&mut self, g: &Graph, e: EdgeId) {
        let (u, v) = g.endpoints(e);
        self.detach_from(g, u, 0, e);
        self.detach_from(g, v, 1, e);
        self.slot[e] = [u32::MAX; 2];
        self.bump(self.len[u] as usize + 1, self.len[u] as usize);
        self.bump(self.len[v] as usize + 1, self.len[v] as usize);
        self.edge_count -= 1;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.len.len()
    }

    #[inline]
    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.slot[e][0] != u32::MAX
    }

    #[inline]
    pub fn degree(&self, u: VertexId) -> usize {
        self.len[u] as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.len.iter().map(|&l| l as usize).collect()
    }

    /// Tree neighbours of `u`, in no particular order.
    #[inline]
    pub fn neighbors(&self, u: VertexId) -> Neighbors<'_> {
        let r = self.start[u]..self.start[u] + self.len[u] as usize;
        Neighbors::new(&self.nbr[r.clone()], &self.eid[r])
    }

    /// Current maximum tree degree Δ.
    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_deg
    }

    /// Number of vertices of each degree, indexed by degree.
    pub fn histogram(&self) -> &[usize] {
        &self.hist[..=self.max_deg.max(1).min(self.hist.len() - 1)]
    }

    /// |N_k|: vertices of degree exactly `k`.
    pub fn count_exactly(&self, k: usize) -> usize {
        self.hist.get(k).copied().unwrap_or(0)
    }

    /// |S_k|: vertices of degree at least `k`.
    pub fn count_at_least(&self, k: usize) -> usize {
        if k > self.max_deg {
            return 0;
        }
        self.hist[k..=self.max_deg].iter().sum()
    }

    /// d_k: total degree over vertices of degree at least `k`.
    pub fn degree_sum_at_least(&self, k: usize) -> usize {
        if k > self.max_deg {
            return 0;
        }
        (k..=self.max_deg).map(|i| i * self.hist[i]).sum()
    }

    /// Vertices of degree at least `k`, ascending.
    pub fn vertices_at_least(&self, k: usize) -> Vec<VertexId> {
        (0..self.n()).filter(|&u| self.degree(u) >= k).collect()
    }

    /// Tree edge ids, ascending.
    pub fn edge_ids(&self) -> Vec<EdgeId> {
        (0..self.slot.len()).filter(|&e| self.contains_edge(e)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Naive O(n) tree path, for tests and oracles.
    pub fn tree_path(&self, u: VertexId, v: VertexId) -> Result<TreePath, TreeError> {
        if u == v {
            return Err(TreeError::SameVertex(u));
        }
        let n = self.n();
        let mut parent = vec![usize::MAX; n];
        parent[u] = u;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for (y, _) in self.neighbors(x) {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![v];
        let mut x = v;
        while x != u {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        Ok(TreePath(path))
    }

    /// Swaps non-tree edge `add` in and tree edge `remove` out, checking that
    /// `remove` lies on the cycle `add` closes. The check costs O(n).
    pub fn swap_edge(&mut self, g: &Graph, add: EdgeId, remove: EdgeId) -> Result<(), TreeError> {
        if add >= g.m() {
            return Err(TreeError::UnknownEdge(add));
        }
        if remove >= g.m() {
            return Err(TreeError::UnknownEdge(remove));
        }
        if self.contains_edge(add) {
            return Err(TreeError::AlreadyTreeEdge(add));
        }
        if !self.contains_edge(remove) {
            return Err(TreeError::NotOnCycle { add, remove });
        }
        let (a, b) = g.endpoints(add);
        let (x, y) = g.endpoints(remove);
        let path = self.tree_path(a, b)?;
        let on_cycle = path
            .0
            .windows(2)
            .any(|w| (w[0] == x && w[1] == y) || (w[0] == y && w[1] == x));
        if !on_cycle {
            return Err(TreeError::NotOnCycle { add, remove });
        }
        self.swap_unchecked(g, add, remove);
        Ok(())
    }

    /// Edge swap without the cycle check; the caller guarantees validity.
    pub(crate) fn swap_unchecked(&mut self, g: &Graph, add: EdgeId, remove: EdgeId) {
        debug_assert!(!self.contains_edge(add) && self.contains_edge(remove));
        self.detach(g, remove);
        self.attach(g, add);
    }

    /// Recounts the histogram from scratch. Test hook.
    pub fn recount_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.max_deg + 1];
        for &l in &self.len {
            let l = l as usize;
            if l >= hist.len() {
                hist.resize(l + 1, 0);
            }
            hist[l] += 1;
        }
        hist
    }

    /// Full structural check: n−1 edges, connected, adjacency and histogram coherent.
    pub fn check(&self, g: &Graph) -> Result<(), TreeError> {
        let ids = self.edge_ids();
        if ids.len() + 1 != g.n() || self.edge_count != ids.len() {
            return Err(TreeError::NotSpanning(format!("{} tree edges", ids.len())));
        }
        if let Some(v) = self.first_unreachable() {
            return Err(TreeError::NotSpanning(format!("vertex {v} unreachable")));
        }
        for u in 0..self.n() {
            for (pos, (v, e)) in self.neighbors(u).enumerate() {
                let side = if g.endpoints(e).0 == u { 0 } else { 1 };
                if !self.contains_edge(e) || g.opposite(e, u) != v || self.slot[e][side] as usize != pos {
                    return Err(TreeError::NotSpanning(format!("adjacency corrupt at {u}")));
                }
            }
        }
        let recount = self.recount_histogram();
        let max = recount.iter().rposition(|&c| c > 0).unwrap_or(0);
        if max != self.max_deg || recount[..=max] != self.hist[..=max] {
            return Err(TreeError::NotSpanning("histogram out of sync".into()));
        }
        Ok(())
    }
}

/// Breadth-first spanning tree from `root`, scanning neighbours in adjacency order.
pub fn bfs_tree(g: &Graph, root: VertexId) -> SpanningTree {
    assert!(root < g.n(), "root {root} out of range");
    // compact search first, then attach parent edges in vertex order
    let mut up = vec![(u32::MAX, u32::MAX); g.n()];
    up[root] = (root as u32, u32::MAX);
    let mut order = Vec::with_capacity(g.n());
    order.push(root as u32);
    let mut head = 0;
    while head < order.len() {
        let u = order[head] as usize;
        head += 1;
        for (v, e) in g.neighbors(u) {
            if up[v].0 == u32::MAX {
                up[v] = (u as u32, e as u32);
                order.push(v as u32);
            }
        }
    }
    let mut t = SpanningTree::empty(g);
    for (v, &(p, e)) in up.iter().enumerate() {
        if v != root {
            let p = p as usize;
            t.attach_between(p.min(v), p.max(v), e as usize);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::new(n, e).unwrap()
    }

    #[test]
    fn bfs_on_trees_and_k4() {
        let t = bfs_tree(&path(4), 0);
        assert_eq!(t.edge_ids(), vec![0, 1, 2]);
        assert_eq!(t.max_degree(), 2);

        let t = bfs_tree(&star(4), 2);
        assert_eq!(t.max_degree(), 4);
        assert_eq!(t.degree(0), 4);

        let t = bfs_tree(&complete(4), 0);
        assert_eq!(t.max_degree(), 3);
        assert_eq!(t.degree(0), 3);
    }

    #[test]
    fn degree_views() {
        let t = bfs_tree(&star(4), 0);
        assert_eq!(t.count_exactly(1), 4);
        assert_eq!(t.count_at_least(2), 1);
        assert_eq!(t.degree_sum_at_least(1), 8);
        assert_eq!(t.degree_sum_at_least(4), 4);
        assert_eq!(t.degree_sum_at_least(5), 0);
        assert_eq!(t.histogram(), &[0, 4, 0, 0, 1]);
    }

    #[test]
    fn tree_paths() {
        let t = bfs_tree(&path(4), 0);
        assert_eq!(t.tree_path(0, 3).unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!(t.tree_path(1, 1), Err(TreeError::SameVertex(1)));
        let t = bfs_tree(&star(4), 0);
        assert_eq!(t.tree_path(2, 3).unwrap().0, vec![2, 0, 3]);
    }

    /// Exhaustive DFS enumeration of simple paths in the tree; exactly one exists.
    fn all_paths(t: &SpanningTree, u: VertexId, v: VertexId) -> Vec<Vec<VertexId>> {
        fn go(
            t: &SpanningTree,
            x: VertexId,
            v: VertexId,
            cur: &mut Vec<VertexId>,
            out: &mut Vec<Vec<VertexId>>,
        ) {
            if x == v {
                out.push(cur.clone());
                return;
            }
            for (y, _) in t.neighbors(x) {
                if !cur.contains(&y) {
                    cur.push(y);
                    go(t, y, v, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(t, u, v, &mut vec![u], &mut out);
        out
    }

    #[test]
    fn random_tree_paths_match_exhaustive_dfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 50;
        let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        let g = Graph::new(n, edges).unwrap();
        let t = bfs_tree(&g, 0);
        for _ in 0..200 {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v {
                continue;
            }
            let paths = all_paths(&t, u, v);
            assert_eq!(paths.len(), 1);
            assert_eq!(t.tree_path(u, v).unwrap().0, paths[0]);
        }
    }

    #[test]
    fn swap_on_c4() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let mut t = SpanningTree::from_edges(&g, &[0, 1, 2]).unwrap();
        t.swap_edge(&g, 3, 1).unwrap();
        assert_eq!(t.edge_ids(), vec![0, 2, 3]);
        assert_eq!(t.degrees(), vec![2, 1, 1, 2]);
        t.check(&g).unwrap();

        assert_eq!(t.swap_edge(&g, 3, 0), Err(TreeError::AlreadyTreeEdge(3)));
        // edge 1 left the tree, so it cannot be removed
        assert_eq!(t.swap_edge(&g, 1, 1), Err(TreeError::NotOnCycle { add: 1, remove: 1 }));
    }

    #[test]
    fn swap_rejects_edge_off_cycle() {
        // path 0-1-2-3-4 plus chord (0,2); edge (3,4) is not on its cycle
        let g = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 2)]).unwrap();
        let mut t2 = SpanningTree::from_edges(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            t2.swap_edge(&g, 4, 3),
            Err(TreeError::NotOnCycle { add: 4, remove: 3 })
        );
        t2.swap_edge(&g, 4, 0).unwrap();
        t2.check(&g).unwrap();
    }

    #[test]
    fn random_swaps_keep_histogram_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100;
        let mut edges = std::collections::BTreeSet::new();
        for v in 1..n {
            edges.insert((rng.gen_range(0..v), v));
        }
        while edges.len() < 400 {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let g = Graph::new(n, edges.into_iter().collect()).unwrap();
        let mut t = bfs_tree(&g, 0);
        let mut done = 0;
        while done < 1000 {
            let add = rng.gen_range(0..g.m());
            if t.contains_edge(add) {
                continue;
            }
            let (a, b) = g.endpoints(add);
            let p = t.tree_path(a, b).unwrap().0;
            let i = rng.gen_range(0..p.len() - 1);
            let remove = g.edge_id(p[i], p[i + 1]).unwrap();
            t.swap_edge(&g, add, remove).unwrap();
            let recount = t.recount_histogram();
            let max = recount.iter().rposition(|&c| c > 0).unwrap();
            assert_eq!(max, t.max_degree());
            assert_eq!(&recount[..=max], &t.histogram()[..=max]);
            for k in 1..=max + 1 {
                let d: usize = (k..=max).map(|i| i * recount[i]).sum();
                assert_eq!(t.degree_sum_at_least(k), d);
                assert!(t.degree_sum_at_least(k) >= t.degree_sum_at_least(k + 1));
            }
            done += 1;
        }
        t.check(&g).unwrap();
        assert_eq!(t.degrees().iter().sum::<usize>(), 2 * (n - 1));
    }

    #[test]
    fn bfs_is_deterministic() {
        let g = complete(9);
        assert_eq!(bfs_tree(&g, 0).edge_ids(), bfs_tree(&g.clone(), 0).edge_ids());
    }

    #[test]
    fn from_edges_rejects_non_trees() {
        let g = complete(4);
        assert!(SpanningTree::from_edges(&g, &[0, 1]).is_err());
        // triangle 0-1-2 plus isolated 3
        let tri = [g.edge_id(0, 1).unwrap(), g.edge_id(1, 2).unwrap(), g.edge_id(0, 2).unwrap()];
        assert!(matches!(SpanningTree::from_edges(&g, &tri), Err(TreeError::NotSpanning(_))));
    }
}
