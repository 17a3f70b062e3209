use super::{DynamicForest, ForestError};
use crate::graph::VertexId;
use crate::tree::SpanningTree;

const NIL: u32 = u32::MAX;

/// Self-adjusting link-cut tree over vertex weights.
///
/// Each node keeps `key = weight << 32 | id`, so the minimum key in a splay
/// subtree is the lightest vertex with the smallest-id tie-break built in.
#[derive(Clone, Debug)]
pub struct LinkCutForest {
    ch: Vec<[u32; 2]>,
    par: Vec<u32>,
    rev: Vec<bool>,
    key: Vec<u64>,
    agg: Vec<u64>,
    stack: Vec<u32>,
}

#[inline]
fn pack(weight: u32, v: usize) -> u64 {
    ((weight as u64) << 32) | v as u64
}

#[inline]
fn unpack(key: u64) -> (VertexId, u32) {
    ((key & 0xffff_ffff) as usize, (key >> 32) as u32)
}

impl LinkCutForest {
    /// `n` isolated vertices of weight 0.
    pub fn new(n: usize) -> LinkCutForest {
        assert!(n < NIL as usize);
        let key: Vec<u64> = (0..n).map(|v| pack(0, v)).collect();
        LinkCutForest {
            ch: vec![[NIL; 2]; n],
            par: vec![NIL; n],
            rev: vec![false; n],
            agg: key.clone(),
            key,
            stack: Vec::new(),
        }
    }

    /// Mirrors `t` with the given weights in O(n): every tree edge starts as a
    /// path-parent pointer from a BFS orientation.
    pub fn from_tree(t: &SpanningTree, weights: &[u32]) -> LinkCutForest {
        let n = t.n();
        let mut f = LinkCutForest::new(n);
        for v in 0..n {
            f.key[v] = pack(weights[v], v);
            f.agg[v] = f.key[v];
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for (v, _) in t.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        f.par[v] = u as u32;
                        queue.push_back(v);
                    }
                }
            }
        }
        f
    }

    #[inline]
    fn is_root(&self, x: u32) -> bool {
        let p = self.par[x as usize];
        p == NIL || (self.ch[p as usize][0] != x && self.ch[p as usize][1] != x)
    }

    #[inline]
    fn push(&mut self, x: u32) {
        let xi = x as usize;
        if self.rev[xi] {
            self.ch[xi].swap(0, 1);
            for c in self.ch[xi] {
                if c != NIL {
                    self.rev[c as usize] ^= true;
                }
            }
            self.rev[xi] = false;
        }
    }

    #[inline]
    fn pull(&mut self, x: u32) {
        let xi = x as usize;
        let mut a = self.key[xi];
        for c in self.ch[xi] {
            if c != NIL {
                a = a.min(self.agg[c as usize]);
            }
        }
        self.agg[xi] = a;
    }

    fn rotate(&mut self, x: u32) {
        let p = self.par[x as usize];
        let g = self.par[p as usize];
        let dir = (self.ch[p as usize][1] == x) as usize;
        let b = self.ch[x as usize][dir ^ 1];
        if !self.is_root(p) {
            let pd = (self.ch[g as usize][1] == p) as usize;
            self.ch[g as usize][pd] = x;
        }
        self.par[x as usize] = g;
        self.ch[x as usize][dir ^ 1] = p;
        self.par[p as usize] = x;
        self.ch[p as usize][dir] = b;
        if b != NIL {
            self.par[b as usize] = p;
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: u32) {
        let mut stack = std::mem::take(&mut self.stack);
        stack.clear();
        let mut y = x;
        stack.push(y);
        while !self.is_root(y) {
            y = self.par[y as usize];
            stack.push(y);
        }
        while let Some(z) = stack.pop() {
            self.push(z);
        }
        self.stack = stack;
        while !self.is_root(x) {
            let p = self.par[x as usize];
            if !self.is_root(p) {
                let g = self.par[p as usize];
                let zigzig = (self.ch[g as usize][0] == p) == (self.ch[p as usize][0] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    fn access(&mut self, x: u32) {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            self.ch[y as usize][1] = last;
            self.pull(y);
            last = y;
            y = self.par[y as usize];
        }
        self.splay(x);
    }

    fn make_root(&mut self, x: u32) {
        self.access(x);
        self.rev[x as usize] ^= true;
        self.push(x);
    }

    fn find_root(&mut self, x: u32) -> u32 {
        self.access(x);
        let mut y = x;
        self.push(y);
        while self.ch[y as usize][0] != NIL {
            y = self.ch[y as usize][0];
            self.push(y);
        }
        self.splay(y);
        y
    }

    /// Path minimum without the connectivity check.
    pub(crate) fn path_min_unchecked(&mut self, u: VertexId, v: VertexId) -> (VertexId, u32) {
        if u == v {
            return unpack(self.key[u]);
        }
        self.make_root(u as u32);
        self.access(v as u32);
        unpack(self.agg[v])
    }

    /// The neighbour of `w` on the tree path from `w` to `z`. Requires `w != z`
    /// in the same tree.
    pub fn step_toward(&mut self, w: VertexId, z: VertexId) -> VertexId {
        debug_assert_ne!(w, z);
        self.make_root(z as u32);
        self.access(w as u32);
        self.push(w as u32);
        let mut y = self.ch[w][0];
        debug_assert_ne!(y, NIL, "{w} and {z} are not connected");
        self.push(y);
        while self.ch[y as usize][1] != NIL {
            y = self.ch[y as usize][1];
            self.push(y);
        }
        self.splay(y);
        y as usize
    }

    /// Whether `w` lies on the tree path between `a` and `b`.
    pub fn on_path(&mut self, a: VertexId, b: VertexId, w: VertexId) -> bool {
        if w == a || w == b {
            return true;
        }
        if !self.connected(a, w) || !self.connected(a, b) {
            return false;
        }
        self.make_root(a as u32);
        self.access(b as u32);
        // Only the aux tree holding the root path lacks a path-parent pointer.
        self.splay(w as u32);
        self.par[w] == NIL
    }
}

impl DynamicForest for LinkCutForest {
    fn len(&self) -> usize {
        self.par.len()
    }

    fn link(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError> {
        if u == v || self.connected(u, v) {
            return Err(ForestError::WouldCreateCycle(u, v));
        }
        self.make_root(u as u32);
        self.par[u] = v as u32;
        Ok(())
    }

    fn cut(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError> {
        if u == v || !self.connected(u, v) {
            return Err(ForestError::NotAForestEdge(u, v));
        }
        self.make_root(u as u32);
        self.access(v as u32);
        let (ui, vi) = (u as u32, v);
        if self.ch[vi][0] != ui {
            return Err(ForestError::NotAForestEdge(u, v));
        }
        self.push(ui);
        if self.ch[u][1] != NIL {
            return Err(ForestError::NotAForestEdge(u, v));
        }
        self.ch[vi][0] = NIL;
        self.par[u] = NIL;
        self.pull(v as u32);
        Ok(())
    }

    fn set_weight(&mut self, u: VertexId, weight: u32) {
        self.splay(u as u32);
        self.key[u] = pack(weight, u);
        self.pull(u as u32);
    }

    fn weight(&self, u: VertexId) -> u32 {
        unpack(self.key[u]).1
    }

    fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        u == v || self.find_root(u as u32) == self.find_root(v as u32)
    }

    fn path_min_vertex(&mut self, u: VertexId, v: VertexId) -> Result<(VertexId, u32), ForestError> {
        if !self.connected(u, v) {
            return Err(ForestError::NotConnected(u, v));
        }
        Ok(self.path_min_unchecked(u, v))
    }
}
