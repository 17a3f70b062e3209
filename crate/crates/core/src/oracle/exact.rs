use super::OracleError;
use crate::graph::{EdgeId, Graph};
use crate::tree::SpanningTree;

pub const EXACT_MAX_N: usize = 9;

struct Search<'a> {
    g: &'a Graph,
    cap: usize,
    deg: Vec<usize>,
    comp: Vec<usize>,
    chosen: Vec<EdgeId>,
}

impl Search<'_> {
    fn root(&self, mut v: usize) -> usize {
        while self.comp[v] != v {
            v = self.comp[v];
        }
        v
    }

    /// Whether the chosen edges plus edges `from..` still connect everything.
    fn can_connect(&self, from: usize) -> bool {
        let n = self.g.n();
        let mut c: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], mut v: usize) -> usize {
            while c[v] != v {
                c[v] = c[c[v]];
                v = c[v];
            }
            v
        }
        let mut parts = n;
        let edges = self.chosen.iter().copied().chain(from..self.g.m());
        for e in edges {
            let (u, v) = self.g.endpoints(e);
            let (a, b) = (find(&mut c, u), find(&mut c, v));
            if a != b {
                c[a] = b;
                parts -= 1;
            }
        }
        parts == 1
    }

    fn run(&mut self, e: usize) -> bool {
        let n = self.g.n();
        if self.chosen.len() == n - 1 {
            return true;
        }
        if e == self.g.m() || self.g.m() - e < n - 1 - self.chosen.len() {
            return false;
        }
        let (u, v) = self.g.endpoints(e);
        let (ru, rv) = (self.root(u), self.root(v));
        if ru != rv && self.deg[u] < self.cap && self.deg[v] < self.cap {
            self.deg[u] += 1;
            self.deg[v] += 1;
            self.comp[ru] = rv;
            self.chosen.push(e);
            if self.run(e + 1) {
                return true;
            }
            self.chosen.pop();
            self.comp[ru] = ru;
            self.deg[u] -= 1;
            self.deg[v] -= 1;
        }
        self.can_connect(e + 1) && self.run(e + 1)
    }
}

/// Minimum tree degree by exhaustive search, with a witness tree.
///
/// For each cap `D` from 1 upward, includes or excludes each edge in order,
/// pruning on degree, cycles and lost connectivity.
pub fn exact_mdst(g: &Graph) -> Result<(usize, SpanningTree), OracleError> {
    let n = g.n();
    if n > EXACT_MAX_N {
        return Err(OracleError::TooLarge { n, max: EXACT_MAX_N });
    }
    if n == 1 {
        return Ok((0, SpanningTree::from_edges(g, &[]).expect("single vertex")));
    }
    for cap in 1..n {
        let mut s = Search { g, cap, deg: vec![0; n], comp: (0..n).collect(), chosen: Vec::new() };
        if s.run(0) {
            let t = SpanningTree::from_edges(g, &s.chosen).expect("search builds a spanning tree");
            return Ok((cap, t));
        }
    }
    unreachable!("a connected graph has a spanning tree of degree at most n - 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimum over all `(n-1)`-edge subsets that form a tree.
    fn brute(g: &Graph) -> usize {
        let n = g.n();
        if n == 1 {
            return 0;
        }
        let m = g.m();
        let mut best = usize::MAX;
        let mut pick = Vec::new();
        fn rec(g: &Graph, start: usize, pick: &mut Vec<usize>, best: &mut usize) {
            let n = g.n();
            if pick.len() == n - 1 {
                let mut c: Vec<usize> = (0..n).collect();
                fn find(c: &mut [usize], v: usize) -> usize {
                    if c[v] == v { v } else { let r = find(c, c[v]); c[v] = r; r }
                }
                let mut deg = vec![0; n];
                for &e in pick.iter() {
                    let (u, v) = g.endpoints(e);
                    let (a, b) = (find(&mut c, u), find(&mut c, v));
                    if a == b {
                        return;
                    }
                    c[a] = b;
                    deg[u] += 1;
                    deg[v] += 1;
                }
                *best = (*best).min(*deg.iter().max().unwrap());
                return;
            }
            for e in start..g.m() {
                pick.push(e);
                rec(g, e + 1, pick, best);
                pick.pop();
            }
        }
        let _ = m;
        rec(g, 0, &mut pick, &mut best);
        best
    }

    #[test]
    fn small_families() {
        let star = Graph::new(5, (1..5).map(|v| (0, v)).collect()).unwrap();
        assert_eq!(exact_mdst(&star).unwrap().0, 4);
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5)).collect()).unwrap();
        assert_eq!(exact_mdst(&c5).unwrap().0, 2);
        // hub 0 over the 4-cycle 1-2-3-4
        let w5 = Graph::new(5, vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert_eq!(exact_mdst(&w5).unwrap().0, 2);
        let big = Graph::new(10, (0..9).map(|i| (i, i + 1)).collect()).unwrap();
        assert_eq!(exact_mdst(&big).unwrap_err(), OracleError::TooLarge { n: 10, max: 9 });
    }

    #[test]
    fn witness_is_consistent() {
        let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (d, t) = exact_mdst(&k4).unwrap();
        assert_eq!(d, 2);
        t.check(&k4).unwrap();
        assert_eq!(t.max_degree(), 2);
    }

    #[test]
    fn agrees_with_subset_enumeration() {
        for n in 1..=6 {
            for g in crate::oracle::connected_graphs(n) {
                let (d, t) = exact_mdst(&g).unwrap();
                assert_eq!(t.max_degree(), d);
                assert_eq!(d, brute(&g), "n = {n}, edges {:?}", g.edges());
            }
        }
    }
}
