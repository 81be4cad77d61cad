//! Shared generators and brute-force references for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cyclesieve::{Graph, GraphBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph on `n` vertices: each ordered (directed) or unordered pair is an edge with
/// probability `p`; each vertex carries a self-loop with probability `loops`.
pub fn random_graph(n: usize, p: f64, loops: f64, directed: bool, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n, directed);
    for u in 0..n {
        if rng.gen_bool(loops) {
            b.add_edge(u, u, 1.0);
        }
        let lo = if directed { 0 } else { u + 1 };
        for v in lo..n {
            if u != v && rng.gen_bool(p) {
                b.add_edge(u, v, 1.0);
            }
        }
    }
    b.build()
}

/// Same structure as [`random_graph`] with integer weights drawn from `weights`.
pub fn random_weighted_graph(
    n: usize,
    p: f64,
    directed: bool,
    weights: &[i64],
    seed: u64,
) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n, directed);
    for u in 0..n {
        let lo = if directed { 0 } else { u };
        for v in lo..n {
            if (u != v && rng.gen_bool(p)) || (u == v && rng.gen_bool(p / 3.0)) {
                let w = weights[rng.gen_range(0..weights.len())];
                b.add_edge(u, v, w as f64);
            }
        }
    }
    b.build()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, false, &edges)
}

/// Every vertex subset of size `1..=bound` whose induced undirected subgraph is connected.
pub fn connected_subsets(g: &Graph, bound: usize) -> BTreeSet<Vec<usize>> {
    let n = g.n_vertices();
    assert!(n <= 20);
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > bound {
            continue;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in g.undirected_neighbors(v) {
                let bit = 1u32 << w;
                if mask & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(w);
                }
            }
        }
        if seen == mask {
            out.insert((0..n).filter(|&v| mask & (1 << v) != 0).collect());
        }
    }
    out
}

/// Structural equality: vertex count, direction and the stored edge list.
pub fn same_graph(a: &Graph, b: &Graph) -> bool {
    a.n_vertices() == b.n_vertices() && a.is_directed() == b.is_directed() && a.edges() == b.edges()
}

/// `g` with `extra` isolated vertices appended.
pub fn with_isolated(g: &Graph, extra: usize) -> Graph {
    let mut b = GraphBuilder::new(g.n_vertices() + extra, g.is_directed());
    for e in g.edges() {
        b.add_edge(e.source, e.target, e.weight);
    }
    b.build()
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}
