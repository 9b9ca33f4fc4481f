//! Shared helpers for the integration suites: fixture loading, an
//! isomorph-free connected-graph enumerator, and an independent free-tree
//! counting oracle. The enumerator and oracle deliberately avoid the
//! library's own generators so fixtures and counts are cross-checked, not
//! self-certified.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use specwalk::graphs::{encode_graph6, parse_graph6};
use specwalk::Graph;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// All connected graphs on `n` vertices from the checked-in fixtures, one
/// canonical representative per isomorphism class.
pub fn load_corpus(n: usize) -> Vec<Graph> {
    let path = fixture_path(&format!("connected_n{n}.g6"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!(
            "{}: {e}; regenerate with the ignored fixture test",
            path.display()
        )
    });
    text.lines()
        .map(|line| parse_graph6(line).expect("fixture lines are valid graph6"))
        .collect()
}

pub const CORPUS_RANGE: std::ops::RangeInclusive<usize> = 2..=7;

/// Connected graph counts per isomorphism class, n = 2..=7.
pub const CONNECTED_COUNTS: [usize; 6] = [1, 2, 6, 21, 112, 853];

pub fn full_corpus() -> Vec<(usize, Vec<Graph>)> {
    CORPUS_RANGE.map(|n| (n, load_corpus(n))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

fn pair_bit(i: usize, j: usize) -> u32 {
    debug_assert!(i < j);
    (j * (j - 1) / 2 + i) as u32
}

fn mask_is_connected(mask: u32, n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut adj = [0u8; 8];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
    }
    let full = ((1u16 << n) - 1) as u8;
    let mut visited: u8 = 1;
    loop {
        let mut next = visited;
        let mut rest = visited;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            next |= adj[v];
        }
        if next == visited {
            return visited == full;
        }
        visited = next;
    }
}

/// Every connected graph on `n <= 7` vertices, one per isomorphism class:
/// a labeled graph is kept iff its edge mask is the minimum over all
/// relabelings, so the output is deterministic and duplicate-free by
/// construction.
pub fn enumerate_connected_canonical(n: usize) -> Vec<Graph> {
    assert!(
        (2..=7).contains(&n),
        "enumerator is sized for the small corpus"
    );
    let bits = n * (n - 1) / 2;
    let pairs: Vec<(usize, usize)> = {
        let mut v = Vec::with_capacity(bits);
        for j in 1..n {
            for i in 0..j {
                v.push((i, j));
            }
        }
        v
    };
    // Bit-relocation table per permutation: edge bit k moves to table[k].
    let tables: Vec<Vec<u32>> = permutations(n)
        .iter()
        .map(|p| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    let (a, b) = (p[i].min(p[j]), p[i].max(p[j]));
                    pair_bit(a, b)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    'mask: for mask in 1u32..1 << bits {
        if !mask_is_connected(mask, n, &pairs) {
            continue;
        }
        for table in &tables {
            let mut image = 0u32;
            let mut rest = mask;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                image |= 1 << table[k];
            }
            if image < mask {
                continue 'mask;
            }
        }
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        out.push(Graph::from_edges(n, &edges).unwrap());
    }
    out
}

pub fn write_fixture(n: usize, graphs: &[Graph]) {
    let mut text = String::new();
    for g in graphs {
        text.push_str(&encode_graph6(g));
        text.push('\n');
    }
    std::fs::write(fixture_path(&format!("connected_n{n}.g6")), text).unwrap();
}

fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let mut last = (0..n).filter(|&v| degree[v] == 1);
    let (u, v) = (last.next().unwrap(), last.next().unwrap());
    edges.push((u.min(v), u.max(v)));
    edges
}

fn tree_centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut peeled = vec![false; n];
    let mut remaining = n;
    while remaining > 2 {
        let layer: Vec<usize> = (0..n).filter(|&v| !peeled[v] && degree[v] <= 1).collect();
        for &v in &layer {
            peeled[v] = true;
            remaining -= 1;
            for &w in &adj[v] {
                if !peeled[w] {
                    degree[w] -= 1;
                }
            }
        }
    }
    (0..n).filter(|&v| !peeled[v]).collect()
}

fn ahu_encode(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut children: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| ahu_encode(adj, w, Some(v)))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

/// Free trees on `n` vertices counted independently: decode every Prüfer
/// sequence and bucket by the AHU certificate rooted at the tree center
/// (minimum over both centers when bicentral).
pub fn count_free_trees_via_prufer(n: usize) -> usize {
    assert!(n >= 1);
    if n <= 2 {
        return 1;
    }
    let mut seen: HashSet<String> = HashSet::new();
    let total = n.pow((n - 2) as u32);
    let mut seq = vec![0usize; n - 2];
    for code in 0..total {
        let mut c = code;
        for slot in seq.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in prufer_decode(&seq, n) {
            adj[u].push(v);
            adj[v].push(u);
        }
        let cert = tree_centers(&adj)
            .into_iter()
            .map(|c| ahu_encode(&adj, c, None))
            .min()
            .unwrap();
        seen.insert(cert);
    }
    seen.len()
}
