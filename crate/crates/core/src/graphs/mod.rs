//! Graph representation, parsers, walk-matrix builders, and tree generation.
//!
//! Graphs are simple and undirected, vertices 0-indexed. Adjacency is kept as
//! sorted neighbor lists; everything downstream (spectra, census) reads
//! through this type.

mod trees;

pub use trees::{generate_trees, FreeTree};

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::exactq::{rat, Rational};
use crate::linalg::RatMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {v} out of range for order {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("vertex {0} is isolated; walk matrices need every degree positive")]
    IsolatedVertex(usize),
    #[error("graph6 error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("edge list error at line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

/// Two-coloring when one exists, or a closed odd walk refuting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// Class label (0 or 1) per vertex; no edge joins equal labels.
    Classes(Vec<u8>),
    /// Odd cycle: consecutive vertices adjacent, last adjacent to first.
    OddCycle(Vec<usize>),
}

impl Graph {
    /// Duplicate edges are idempotent; self-loops and out-of-range endpoints
    /// are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() == self.n - 1 && self.is_connected()
    }

    /// BFS two-coloring over every component; a conflicting edge closes an
    /// odd cycle through the BFS tree.
    pub fn bipartition(&self) -> Bipartition {
        let mut color = vec![u8::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut depth = vec![0usize; self.n];
        for root in 0..self.n {
            if color[root] != u8::MAX {
                continue;
            }
            color[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return Bipartition::OddCycle(odd_cycle(&parent, u, v));
                    }
                }
            }
        }
        Bipartition::Classes(color)
    }

    /// `D^{-1} L = I - D^{-1} A`; rows sum to zero.
    pub fn rw_laplacian(&self) -> Result<RatMatrix, GraphError> {
        self.walk_matrix(true)
    }

    /// `D^{-1} A`; rows sum to one.
    pub fn rw_transition(&self) -> Result<RatMatrix, GraphError> {
        self.walk_matrix(false)
    }

    fn walk_matrix(&self, laplacian: bool) -> Result<RatMatrix, GraphError> {
        if let Some(v) = (0..self.n).find(|&v| self.degree(v) == 0) {
            return Err(GraphError::IsolatedVertex(v));
        }
        let mut entries = vec![Rational::zero(); self.n * self.n];
        for u in 0..self.n {
            let d = self.degree(u) as i64;
            let off = rat(if laplacian { -1 } else { 1 }, d);
            for &v in &self.adj[u] {
                entries[u * self.n + v] = off.clone();
            }
            if laplacian {
                entries[u * self.n + u] = rat(1, 1);
            }
        }
        Ok(RatMatrix::new(self.n, entries))
    }
}

/// BFS-tree conflict edge `(u, v)` with equal colors implies equal depths;
/// walking both chains to the lowest common ancestor closes an odd cycle.
fn odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let mut up = vec![u];
    let mut vp = vec![v];
    let (mut a, mut b) = (u, v);
    while a != b {
        a = parent[a];
        b = parent[b];
        up.push(a);
        vp.push(b);
    }
    // up ends at the ancestor; append v's chain (excluding it) reversed
    vp.pop();
    up.extend(vp.into_iter().rev());
    up
}

const G6_HEADER: &str = ">>graph6<<";

/// Decodes graph6 text (short and long order forms, optional header).
///
/// Byte offsets in errors index the original input, header included.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let (body, base) = match trimmed.strip_prefix(G6_HEADER) {
        Some(rest) => (rest, G6_HEADER.len()),
        None => (trimmed, 0),
    };
    let bytes = body.as_bytes();
    let err = |offset: usize, reason: &str| GraphError::Graph6 {
        offset: base + offset,
        reason: reason.to_string(),
    };
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, "byte outside the printable range 63..=126"));
        }
    }
    if bytes.is_empty() {
        return Err(err(0, "empty input"));
    }
    let (n, pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(err(0, "orders of 2^18 and above are not supported"));
        }
        if bytes.len() < 4 {
            return Err(err(bytes.len(), "truncated order field"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        if n < 63 {
            return Err(err(0, "long order form used for an order below 63"));
        }
        (n, 4)
    } else {
        ((bytes[0] - 63) as usize, 1)
    };
    if n == 0 {
        return Err(err(0, "graph has no vertices"));
    }

    let bit_count = n * (n - 1) / 2;
    let byte_count = bit_count.div_ceil(6);
    if bytes.len() < pos + byte_count {
        return Err(err(bytes.len(), "truncated adjacency bits"));
    }
    if bytes.len() > pos + byte_count {
        return Err(err(pos + byte_count, "trailing data after adjacency bits"));
    }

    let mut edges = Vec::new();
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6] - 63;
            if byte & (1 << (5 - bit % 6)) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    if bit_count % 6 != 0 {
        let last = bytes[pos + byte_count - 1] - 63;
        let pad = 6 - bit_count % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(err(pos + byte_count - 1, "nonzero padding bits"));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Inverse of [`parse_graph6`], no header. Orders below 2^18 only.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    assert!(n < 1 << 18, "graph6 long form covers orders below 2^18");
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(63 + ((n >> shift) & 0x3f) as u8);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    String::from_utf8(out).unwrap()
}

/// Parses "first line n, then one `u v` edge per line". Duplicate edges are
/// idempotent; blank lines are skipped. Line numbers in errors are 1-based.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let err = |line: usize, reason: String| GraphError::EdgeList { line, reason };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| err(1, "missing order line".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| err(first_no, format!("invalid order {first:?}")))?;
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    let mut edges = Vec::new();
    for (no, line) in lines {
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => return Err(err(no, "expected two endpoints".into())),
        };
        let parse = |tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| err(no, format!("invalid vertex {tok:?}")))
        };
        let (u, v) = (parse(u)?, parse(v)?);
        if u == v {
            return Err(err(no, format!("self-loop at vertex {u}")));
        }
        if let Some(w) = [u, v].into_iter().find(|&w| w >= n) {
            return Err(err(no, format!("vertex {w} out of range for order {n}")));
        }
        edges.push((u, v));
    }
    Graph::from_edges(n, &edges)
}
