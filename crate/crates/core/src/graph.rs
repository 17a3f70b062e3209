//! Immutable simple undirected graphs and the two text formats they are read from.

use std::collections::VecDeque;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Input grammar accepted by [`parse_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// Bare `u v` lines with 0-based ids; `n` is one past the largest id.
    EdgeList,
    /// `p edge <n> <m>` header followed by `e <u> <v>` lines with 1-based ids.
    Dimacs,
}

impl GraphFormat {
    /// Picks `Dimacs` when the first meaningful line is a `p` header.
    pub fn detect(text: &str) -> GraphFormat {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
                continue;
            }
            return if line.starts_with('p') {
                GraphFormat::Dimacs
            } else {
                GraphFormat::EdgeList
            };
        }
        GraphFormat::EdgeList
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: VertexId, v: VertexId },
    #[error("line {line}: graph is disconnected (vertex {unreachable} unreachable from vertex 0)")]
    Disconnected { line: usize, unreachable: VertexId },
    #[error("line {line}: bad header: {reason}")]
    BadHeader { line: usize, reason: String },
    #[error("line {line}: vertex id {id} out of range")]
    IdOutOfRange { line: usize, id: i64 },
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {unreachable} unreachable from vertex 0")]
    Disconnected { unreachable: VertexId },
    #[error("vertex id {0} out of range")]
    IdOutOfRange(VertexId),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph too large: ids must fit in 32 bits")]
    TooLarge,
}

/// Iterator over an adjacency row.
#[derive(Clone, Debug)]
pub struct Neighbors<'a> {
    nbr: &'a [u32],
    eid: &'a [u32],
    i: usize,
}

impl<'a> Neighbors<'a> {
    pub(crate) fn new(nbr: &'a [u32], eid: &'a [u32]) -> Neighbors<'a> {
        Neighbors { nbr, eid, i: 0 }
    }
}

impl Iterator for Neighbors<'_> {
    type Item = (VertexId, EdgeId);

    #[inline]
    fn next(&mut self) -> Option<(VertexId, EdgeId)> {
        let v = *self.nbr.get(self.i)?;
        let e = self.eid[self.i];
        self.i += 1;
        Some((v as usize, e as usize))
    }

    #[inline]
    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.nbr.len() - self.i;
        (r, Some(r))
    }
}

impl ExactSizeIterator for Neighbors<'_> {}

/// A connected simple undirected graph.
///
/// Edge ids are the positions in the construction order, and each edge is
/// stored as `(min, max)`. Each adjacency row is sorted by neighbour id, which
/// fixes every traversal order downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    /// Row `u` of the adjacency is `offsets[u]..offsets[u + 1]` in both
    /// `nbr` and `eid`.
    offsets: Vec<usize>,
    nbr: Vec<u32>,
    eid: Vec<u32>,
}

impl Graph {
    pub fn new(n: usize, mut edges: Vec<(VertexId, VertexId)>) -> Result<Graph, GraphError> {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > u32::MAX as usize || edges.len() > u32::MAX as usize {
            return Err(GraphError::TooLarge);
        }
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            if u >= n {
                return Err(GraphError::IdOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::IdOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut cells = vec![(0u32, 0u32); offsets[n]];
        for (id, &(u, v)) in edges.iter().enumerate() {
            cells[fill[u]] = (v as u32, id as u32);
            fill[u] += 1;
            cells[fill[v]] = (u as u32, id as u32);
            fill[v] += 1;
        }
        for u in 0..n {
            let row = &mut cells[offsets[u]..offsets[u + 1]];
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                let x = w[0].0 as usize;
                return Err(GraphError::DuplicateEdge(u.min(x), u.max(x)));
            }
        }
        let (nbr, eid) = cells.into_iter().unzip();
        let g = Graph { n, edges, offsets, nbr, eid };
        if let Some(unreachable) = g.first_unreachable() {
            return Err(GraphError::Disconnected { unreachable });
        }
        Ok(g)
    }

    fn first_unreachable(&self) -> Option<VertexId> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Neighbours of `u` as `(neighbour, edge id)`, sorted by neighbour.
    #[inline]
    pub fn neighbors(&self, u: VertexId) -> Neighbors<'_> {
        let r = self.offsets[u]..self.offsets[u + 1];
        Neighbors::new(&self.nbr[r.clone()], &self.eid[r])
    }

    /// The `i`-th entry of [`Graph::neighbors`].
    #[inline]
    pub fn neighbor(&self, u: VertexId, i: usize) -> (VertexId, EdgeId) {
        let j = self.offsets[u] + i;
        (self.nbr[j] as usize, self.eid[j] as usize)
    }

    #[inline]
    pub fn degree(&self, u: VertexId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Start of row `u` in the flat adjacency.
    #[inline]
    pub(crate) fn row_start(&self, u: VertexId) -> usize {
        self.offsets[u]
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let lo = self.offsets[u];
        let v = u32::try_from(v).ok()?;
        let i = self.nbr[lo..self.offsets[u + 1]].binary_search(&v).ok()?;
        Some(self.eid[lo + i] as usize)
    }

    /// The other endpoint of `e`, seen from `u`.
    #[inline]
    pub fn opposite(&self, e: EdgeId, u: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == u {
            b
        } else {
            a
        }
    }

    /// Serializes in the `p edge` / `e u v` grammar with 1-based ids.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::with_capacity(16 + self.m() * 14);
        out.push_str(&format!("p edge {} {}\n", self.n, self.m()));
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }
}

fn parse_id(tok: &str, line: usize, text: &str) -> Result<i64, ParseError> {
    tok.parse::<i64>().map_err(|_| ParseError::Malformed {
        line,
        text: text.to_string(),
    })
}

fn check_structure(
    n: usize,
    edges: &[(VertexId, VertexId)],
    lines: &[usize],
    header_line: usize,
) -> Result<(), ParseError> {
    match Graph::new(n, edges.to_vec()) {
        Ok(_) => Ok(()),
        Err(GraphError::DuplicateEdge(u, v)) => {
            // report the second occurrence
            let mut first = None;
            for (i, &(a, b)) in edges.iter().enumerate() {
                if (a.min(b), a.max(b)) == (u, v) {
                    if first.is_some() {
                        return Err(ParseError::DuplicateEdge { line: lines[i], u, v });
                    }
                    first = Some(i);
                }
            }
            unreachable!("duplicate reported but not found")
        }
        Err(GraphError::Disconnected { unreachable }) => Err(ParseError::Disconnected {
            line: header_line,
            unreachable,
        }),
        Err(GraphError::Empty) => Err(ParseError::BadHeader {
            line: header_line,
            reason: "graph has no vertices".into(),
        }),
        Err(GraphError::TooLarge) => Err(ParseError::BadHeader {
            line: header_line,
            reason: "more than 2^32 vertices or edges".into(),
        }),
        Err(e) => unreachable!("validated earlier: {e}"),
    }
}

/// Parses a graph. Line numbers in errors are 1-based.
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    match format {
        GraphFormat::Dimacs => parse_dimacs(text),
        GraphFormat::EdgeList => parse_edge_list(text),
    }
}

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(ParseError::BadHeader {
                        line: line_no,
                        reason: "second header".into(),
                    });
                }
                if toks.len() != 4 || toks[1] != "edge" {
                    return Err(ParseError::BadHeader {
                        line: line_no,
                        reason: format!("expected `p edge <n> <m>`, got {line:?}"),
                    });
                }
                let n = toks[2].parse::<usize>();
                let m = toks[3].parse::<usize>();
                match (n, m) {
                    (Ok(n), Ok(m)) => header = Some((n, m, line_no)),
                    _ => {
                        return Err(ParseError::BadHeader {
                            line: line_no,
                            reason: format!("non-numeric counts in {line:?}"),
                        })
                    }
                }
            }
            "e" => {
                let Some((n, _, _)) = header else {
                    return Err(ParseError::BadHeader {
                        line: line_no,
                        reason: "edge before header".into(),
                    });
                };
                if toks.len() != 3 {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        text: raw.to_string(),
                    });
                }
                let u = parse_id(toks[1], line_no, raw)?;
                let v = parse_id(toks[2], line_no, raw)?;
                for id in [u, v] {
                    if id < 1 || id as u64 > n as u64 {
                        return Err(ParseError::IdOutOfRange { line: line_no, id });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop {
                        line: line_no,
                        vertex: (u - 1) as usize,
                    });
                }
                edges.push(((u - 1) as usize, (v - 1) as usize));
                lines.push(line_no);
            }
            _ => {
                return Err(ParseError::Malformed {
                    line: line_no,
                    text: raw.to_string(),
                })
            }
        }
    }
    let Some((n, m, header_line)) = header else {
        return Err(ParseError::BadHeader {
            line: 0,
            reason: "missing `p edge` header".into(),
        });
    };
    if m != edges.len() {
        return Err(ParseError::BadHeader {
            line: header_line,
            reason: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    check_structure(n, &edges, &lines, header_line)?;
    Ok(Graph::new(n, edges).expect("validated"))
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    let mut max_id = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ParseError::Malformed {
                line: line_no,
                text: raw.to_string(),
            });
        }
        let u = parse_id(toks[0], line_no, raw)?;
        let v = parse_id(toks[1], line_no, raw)?;
        for id in [u, v] {
            if id < 0 {
                return Err(ParseError::IdOutOfRange { line: line_no, id });
            }
        }
        if u == v {
            return Err(ParseError::SelfLoop {
                line: line_no,
                vertex: u as usize,
            });
        }
        let (u, v) = (u as usize, v as usize);
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        edges.push((u, v));
        lines.push(line_no);
    }
    let n = max_id.map_or(1, |m| m + 1);
    check_structure(n, &edges, &lines, 0)?;
    Ok(Graph::new(n, edges).expect("validated"))
}
