//! Union-find with union by rank and path compression.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("element {index} out of range for {len} sets")]
pub struct IndexOutOfRange {
    pub index: usize,
    pub len: usize,
}

#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
    classes: usize,
}

impl DisjointSets {
    /// `n` singleton classes.
    pub fn new(n: usize) -> DisjointSets {
        assert!(n <= u32::MAX as usize);
        DisjointSets {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            classes: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of classes, counting every element of the universe.
    pub fn class_count(&self) -> usize {
        self.classes
    }

    /// Representative of `x`'s class. Panics when `x` is out of range.
    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while cur != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    fn check(&self, x: usize) -> Result<(), IndexOutOfRange> {
        if x < self.len() {
            Ok(())
        } else {
            Err(IndexOutOfRange {
                index: x,
                len: self.len(),
            })
        }
    }

    /// Merges the classes of `a` and `b`; returns whether they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> Result<bool, IndexOutOfRange> {
        self.check(a)?;
        self.check(b)?;
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(false);
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[lo] = hi as u32;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        self.classes -= 1;
        Ok(true)
    }

    pub fn same_set(&mut self, a: usize, b: usize) -> Result<bool, IndexOutOfRange> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.find(a) == self.find(b))
    }
}
