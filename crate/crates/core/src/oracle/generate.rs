use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::dsu::DisjointSets;
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Path,
    Cycle,
    Star,
    Complete,
    Gnp,
    Hypercube,
    Wheel,
    HamPathPlusEdges,
    Broom,
}

impl GenKind {
    pub const ALL: [GenKind; 9] = [
        GenKind::Path,
        GenKind::Cycle,
        GenKind::Star,
        GenKind::Complete,
        GenKind::Gnp,
        GenKind::Hypercube,
        GenKind::Wheel,
        GenKind::HamPathPlusEdges,
        GenKind::Broom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Path => "path",
            GenKind::Cycle => "cycle",
            GenKind::Star => "star",
            GenKind::Complete => "complete",
            GenKind::Gnp => "gnp",
            GenKind::Hypercube => "hypercube",
            GenKind::Wheel => "wheel",
            GenKind::HamPathPlusEdges => "ham-path-plus-edges",
            GenKind::Broom => "broom",
        }
    }

    pub fn from_name(s: &str) -> Option<GenKind> {
        GenKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// `n` is the vertex count except for hypercubes, where it is the dimension.
/// `extra` is the extra-edge count for `ham-path-plus-edges` and the number
/// of bristles for `broom`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub p: f64,
    pub extra: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize) -> GenSpec {
        GenSpec { kind, n, p: 0.0, extra: 0, seed: 0 }
    }

    pub fn gnp(n: usize, p: f64, seed: u64) -> GenSpec {
        GenSpec { kind: GenKind::Gnp, n, p, extra: 0, seed }
    }

    pub fn ham_path_plus_edges(n: usize, extra: usize, seed: u64) -> GenSpec {
        GenSpec { kind: GenKind::HamPathPlusEdges, n, p: 0.0, extra, seed }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    /// Minimum tree degree, when the family fixes it.
    pub known_delta_star: Option<usize>,
    pub provenance: String,
}

fn bad(msg: impl Into<String>) -> OracleError {
    OracleError::BadParams(msg.into())
}

fn build(n: usize, edges: Vec<(VertexId, VertexId)>) -> Graph {
    Graph::new(n, edges).expect("generators produce simple connected graphs")
}

/// Deterministic in `spec`: the same spec yields the same edge list.
pub fn generate(spec: &GenSpec) -> Result<Generated, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let path_like = |n: usize| if n <= 2 { n - 1 } else { 2 };
    let (graph, known, provenance) = match spec.kind {
        GenKind::Path => {
            if n == 0 {
                return Err(bad("path needs n >= 1"));
            }
            (build(n, (1..n).map(|i| (i - 1, i)).collect()), Some(path_like(n)), format!("path n={n}"))
        }
        GenKind::Cycle => {
            if n < 3 {
                return Err(bad("cycle needs n >= 3"));
            }
            (build(n, (0..n).map(|i| (i, (i + 1) % n)).collect()), Some(2), format!("cycle n={n}"))
        }
        GenKind::Star => {
            if n == 0 {
                return Err(bad("star needs n >= 1"));
            }
            (build(n, (1..n).map(|v| (0, v)).collect()), Some(n - 1), format!("star n={n}"))
        }
        GenKind::Complete => {
            if n == 0 || n > 5000 {
                return Err(bad("complete needs 1 <= n <= 5000"));
            }
            let mut e = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..n {
                for v in u + 1..n {
                    e.push((u, v));
                }
            }
            (build(n, e), Some(path_like(n)), format!("complete n={n}"))
        }
        GenKind::Hypercube => {
            let d = n;
            if d > 24 {
                return Err(bad("hypercube dimension must be at most 24"));
            }
            let size = 1usize << d;
            let mut e = Vec::new();
            for u in 0..size {
                for b in 0..d {
                    let v = u ^ (1 << b);
                    if u < v {
                        e.push((u, v));
                    }
                }
            }
            (build(size, e), Some(path_like(size)), format!("hypercube d={d}"))
        }
        GenKind::Wheel => {
            if n < 4 {
                return Err(bad("wheel needs n >= 4"));
            }
            let rim = n - 1;
            let mut e: Vec<_> = (1..n).map(|v| (0, v)).collect();
            e.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
            (build(n, e), Some(2), format!("wheel n={n}"))
        }
        GenKind::Broom => {
            let b = spec.extra;
            if b == 0 || n < b + 2 {
                return Err(bad("broom needs 1 <= bristles <= n - 2"));
            }
            let handle = n - b;
            let mut e: Vec<_> = (1..handle).map(|i| (i - 1, i)).collect();
            e.extend((handle..n).map(|v| (handle - 1, v)));
            (build(n, e), Some(b + 1), format!("broom n={n} bristles={b}"))
        }
        GenKind::HamPathPlusEdges => {
            if n < 2 {
                return Err(bad("ham-path-plus-edges needs n >= 2"));
            }
            let max_extra = n * (n - 1) / 2 - (n - 1);
            if spec.extra > max_extra {
                return Err(bad(format!("at most {max_extra} extra edges fit on {n} vertices")));
            }
            let mut order: Vec<VertexId> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut e: Vec<_> = order.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();
            let mut seen: HashSet<(VertexId, VertexId)> = e.iter().copied().collect();
            while e.len() < n - 1 + spec.extra {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && seen.insert((u.min(v), u.max(v))) {
                    e.push((u.min(v), u.max(v)));
                }
            }
            (
                build(n, e),
                Some(path_like(n)),
                format!("ham-path-plus-edges n={n} extra={} seed={}", spec.extra, spec.seed),
            )
        }
        GenKind::Gnp => {
            if n == 0 || !(0.0..=1.0).contains(&spec.p) {
                return Err(bad("gnp needs n >= 1 and p in [0, 1]"));
            }
            let mut e = gnp_edges(n, spec.p, &mut rng);
            let mut d = DisjointSets::new(n);
            for &(u, v) in &e {
                d.union(u, v).expect("in range");
            }
            let mut added = 0;
            if d.class_count() > 1 {
                // join each component to a random vertex of the ones before it
                let mut groups: Vec<Vec<VertexId>> = vec![Vec::new(); n];
                for v in 0..n {
                    groups[d.find(v)].push(v);
                }
                let mut reps: Vec<VertexId> = Vec::new();
                for members in groups.into_iter().filter(|g| !g.is_empty()) {
                    let here = members[rng.gen_range(0..members.len())];
                    if !reps.is_empty() {
                        let there = reps[rng.gen_range(0..reps.len())];
                        e.push((there.min(here), there.max(here)));
                        added += 1;
                    }
                    reps.extend(members);
                }
            }
            let note = if added == 0 {
                "connected as sampled".to_string()
            } else {
                format!("augmented with {added} edges to connect")
            };
            (build(n, e), None, format!("gnp n={n} p={} seed={}: {note}", spec.p, spec.seed))
        }
    };
    Ok(Generated { graph, known_delta_star: known, provenance })
}

/// `G(n, p)` edges in lexicographic order, sampled by geometric skips.
fn gnp_edges(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    let mut e = Vec::new();
    if p <= 0.0 || n < 2 {
        return e;
    }
    if p >= 1.0 {
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        return e;
    }
    let lq = (1.0 - p).ln();
    let (mut u, mut v) = (1usize, usize::MAX);
    // v walks the row of u over 0..u; pairs are (v, u)
    while u < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / lq).floor().min(1e15) as usize;
        v = v.wrapping_add(1).wrapping_add(skip);
        while v >= u && u < n {
            v -= u;
            u += 1;
        }
        if u < n {
            e.push((v, u));
        }
    }
    e.sort_unstable();
    e
}
