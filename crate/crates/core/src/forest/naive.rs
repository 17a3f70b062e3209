use std::collections::{BTreeSet, VecDeque};

use super::{DynamicForest, ForestError};
use crate::graph::VertexId;

/// Explicit adjacency sets; every query walks the path.
#[derive(Clone, Debug)]
pub struct NaiveForest {
    adj: Vec<BTreeSet<VertexId>>,
    weight: Vec<u32>,
}

impl NaiveForest {
    pub fn new(n: usize) -> NaiveForest {
        NaiveForest {
            adj: vec![BTreeSet::new(); n],
            weight: vec![0; n],
        }
    }

    /// Vertices on the path from `u` to `v`, or `None` if disconnected.
    pub fn path(&self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[u] = u;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                let mut path = vec![v];
                let mut y = v;
                while y != u {
                    y = parent[y];
                    path.push(y);
                }
                path.reverse();
                return Some(path);
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

impl DynamicForest for NaiveForest {
    fn len(&self) -> usize {
        self.adj.len()
    }

    fn link(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError> {
        if self.path(u, v).is_some() {
            return Err(ForestError::WouldCreateCycle(u, v));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    fn cut(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError> {
        if !self.adj[u].remove(&v) {
            return Err(ForestError::NotAForestEdge(u, v));
        }
        self.adj[v].remove(&u);
        Ok(())
    }

    fn set_weight(&mut self, u: VertexId, weight: u32) {
        self.weight[u] = weight;
    }

    fn weight(&self, u: VertexId) -> u32 {
        self.weight[u]
    }

    fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        self.path(u, v).is_some()
    }

    fn path_min_vertex(&mut self, u: VertexId, v: VertexId) -> Result<(VertexId, u32), ForestError> {
        let path = self.path(u, v).ok_or(ForestError::NotConnected(u, v))?;
        let best = path
            .into_iter()
            .min_by_key(|&x| (self.weight[x], x))
            .expect("path is never empty");
        Ok((best, self.weight[best]))
    }
}
