//! Free (unlabeled) tree generation via canonical level sequences.
//!
//! Rooted trees are streamed by the constant-amortized successor rule on
//! lexicographically maximal level sequences, in decreasing order starting
//! from the path. A rooted sequence survives into the free stream iff its
//! root is a center and the sequence is the canonical form among the (at
//! most two) center rootings, so every free tree appears exactly once and
//! the order is deterministic.

use super::Graph;

/// One free tree: its canonical level sequence and the reconstructed graph.
///
/// `levelseq[0] = 0`; vertex `i > 0` hangs off the most recent earlier vertex
/// one level up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeTree {
    pub levelseq: Vec<usize>,
    pub graph: Graph,
}

/// Streams every free tree on `n >= 1` vertices exactly once,
/// deterministically.
pub fn generate_trees(n: usize) -> TreeStream {
    assert!(n >= 1, "trees need at least one vertex");
    TreeStream {
        pending: Some((0..n).collect()),
    }
}

pub struct TreeStream {
    pending: Option<Vec<usize>>,
}

impl Iterator for TreeStream {
    type Item = FreeTree;

    fn next(&mut self) -> Option<FreeTree> {
        loop {
            let seq = self.pending.take()?;
            self.pending = successor(&seq);
            if is_free_canonical(&seq) {
                let graph = tree_from_levelseq(&seq);
                return Some(FreeTree {
                    levelseq: seq,
                    graph,
                });
            }
        }
    }
}

/// Next canonical rooted level sequence in decreasing lexicographic order.
///
/// `p` is the last entry below which the sequence can still shrink; the tail
/// from `p` is refilled by cycling the window that ends at `p`'s new parent.
fn successor(seq: &[usize]) -> Option<Vec<usize>> {
    let p = seq.iter().rposition(|&l| l > 1)?;
    let q = (0..p).rev().find(|&i| seq[i] == seq[p] - 1).unwrap();
    let mut next = seq.to_vec();
    for i in p..seq.len() {
        next[i] = next[i - (p - q)];
    }
    Some(next)
}

fn parents(seq: &[usize]) -> Vec<usize> {
    // last[l] = most recent vertex seen at level l
    let mut last = vec![usize::MAX; seq.len()];
    let mut parent = vec![usize::MAX; seq.len()];
    for (v, &l) in seq.iter().enumerate() {
        if l > 0 {
            parent[v] = last[l - 1];
        }
        last[l] = v;
    }
    parent
}

fn tree_from_levelseq(seq: &[usize]) -> Graph {
    let parent = parents(seq);
    let edges: Vec<(usize, usize)> = (1..seq.len()).map(|v| (parent[v], v)).collect();
    Graph::from_edges(seq.len(), &edges).unwrap()
}

/// Centers by repeated leaf peeling; one or two vertices remain.
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut peeled = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            peeled[leaf] = true;
            for &u in &adj[leaf] {
                if !peeled[u] {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    (0..n).filter(|&v| !peeled[v]).collect()
}

/// Lexicographically maximal level sequence of the tree rooted at `root`.
///
/// Subtree sequences all start at the child level and descend only into
/// larger levels, so sorting children by plain descending order maximizes
/// the concatenation.
fn canonical_rooted(adj: &[Vec<usize>], root: usize) -> Vec<usize> {
    fn canon(adj: &[Vec<usize>], v: usize, parent: usize, level: usize) -> Vec<usize> {
        let mut kids: Vec<Vec<usize>> = adj[v]
            .iter()
            .filter(|&&u| u != parent)
            .map(|&u| canon(adj, u, v, level + 1))
            .collect();
        kids.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = vec![level];
        for kid in kids {
            out.extend(kid);
        }
        out
    }
    canon(adj, root, usize::MAX, 0)
}

fn is_free_canonical(seq: &[usize]) -> bool {
    let n = seq.len();
    let parent = parents(seq);
    let mut adj = vec![Vec::new(); n];
    for v in 1..n {
        adj[parent[v]].push(v);
        adj[v].push(parent[v]);
    }
    let centers = centers(&adj);
    if !centers.contains(&0) {
        return false;
    }
    centers
        .iter()
        .map(|&c| canonical_rooted(&adj, c))
        .max()
        .unwrap()
        == seq
}
