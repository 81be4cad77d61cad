//! Independent counting methods: exhaustive backtracking oracles and a length-capped
//! Johnson enumerator.
//!
//! All of them follow the same conventions as the sieve: a self-loop is a cycle of length
//! 1, an undirected edge (or a pair of opposite arcs) is a cycle of length 2, and on
//! undirected graphs the two orientations of a longer cycle are distinct cycles.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::CompensatedSum;
use crate::error::{contract, Result};
use crate::graph::Graph;
use crate::sieve::{CountVector, CycleCounts, PathCounts};

/// A simple cycle as the vertex sequence starting at its smallest vertex. Undirected cycles
/// of length at least 3 appear once per orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleRecord {
    pub vertices: Vec<usize>,
}

impl CycleRecord {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Checks distinctness, the minimal-start form and that every closing arc exists.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let v = &self.vertices;
        if v.is_empty() || v.iter().any(|&x| x >= g.n_vertices()) {
            return false;
        }
        let mut sorted = v.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != v.len() || sorted[0] != v[0] {
            return false;
        }
        (0..v.len()).all(|i| g.has_edge(v[i], v[(i + 1) % v.len()]))
    }
}

/// Weighted accumulation used by the oracles.
enum WeightMode {
    Unit,
    Integer,
    Real,
}

fn weight_mode(g: &Graph) -> WeightMode {
    if g.edges().iter().all(|e| e.weight == 1.0) {
        WeightMode::Unit
    } else if g.is_integral() {
        WeightMode::Integer
    } else {
        WeightMode::Real
    }
}

/// Sums of weight products per length.
struct Tally {
    unit: Vec<u64>,
    int: Vec<BigInt>,
    real: Vec<CompensatedSum>,
}

impl Tally {
    fn new(ell: usize) -> Self {
        Tally {
            unit: vec![0; ell],
            int: vec![BigInt::zero(); ell],
            real: vec![CompensatedSum::default(); ell],
        }
    }

    fn into_counts(self, mode: &WeightMode) -> CountVector {
        match mode {
            WeightMode::Unit => {
                CountVector::Exact(self.unit.into_iter().map(BigInt::from).collect())
            }
            WeightMode::Integer => CountVector::Exact(self.int),
            WeightMode::Real => CountVector::Approximate {
                values: self.real.iter().map(CompensatedSum::value).collect(),
                condition: self.real.iter().map(CompensatedSum::condition).collect(),
            },
        }
    }
}

/// Exhaustive cycle counts per length, weighted by the product of edge weights. Intended for
/// graphs with at most ~15 vertices.
pub fn brute_force_cycle_counts(g: &Graph, ell: usize) -> Result<CycleCounts> {
    if ell == 0 {
        return contract("ℓ must be at least 1");
    }
    let mode = weight_mode(g);
    let mut tally = Tally::new(ell);
    let mut on_path = vec![false; g.n_vertices()];
    let mut path = Vec::with_capacity(ell);
    for s in 0..g.n_vertices() {
        if let Some(w) = g.weight(s, s) {
            record(&mut tally, &mode, 1, &[w]);
        }
        on_path[s] = true;
        path.push(s);
        let mut weights = Vec::with_capacity(ell);
        cycles_from(
            g,
            s,
            ell,
            &mode,
            &mut tally,
            &mut on_path,
            &mut path,
            &mut weights,
        );
        path.pop();
        on_path[s] = false;
    }
    Ok(CycleCounts {
        ell,
        counts: tally.into_counts(&mode),
    })
}

#[allow(clippy::too_many_arguments)]
fn cycles_from(
    g: &Graph,
    start: usize,
    ell: usize,
    mode: &WeightMode,
    tally: &mut Tally,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    weights: &mut Vec<f64>,
) {
    let v = *path.last().expect("path starts at the anchor");
    for &(w, weight) in g.out_neighbors(v) {
        if w == start && path.len() >= 2 {
            weights.push(weight);
            record(tally, mode, path.len(), weights);
            weights.pop();
        } else if w > start && !on_path[w] && path.len() < ell {
            on_path[w] = true;
            path.push(w);
            weights.push(weight);
            cycles_from(g, start, ell, mode, tally, on_path, path, weights);
            weights.pop();
            path.pop();
            on_path[w] = false;
        }
    }
}

fn record(tally: &mut Tally, mode: &WeightMode, len: usize, weights: &[f64]) {
    match mode {
        WeightMode::Unit => tally.unit[len - 1] += 1,
        WeightMode::Integer => {
            let p = weights
                .iter()
                .fold(BigInt::one(), |acc, &w| acc * BigInt::from(w as i64));
            tally.int[len - 1] += p;
        }
        WeightMode::Real => tally.real[len - 1].add(weights.iter().product()),
    }
}

/// Exhaustive simple-path counts from `from` to `to` per length.
pub fn brute_force_path_counts(
    g: &Graph,
    from: usize,
    to: usize,
    ell: usize,
) -> Result<PathCounts> {
    if ell == 0 {
        return contract("ℓ must be at least 1");
    }
    if from >= g.n_vertices() || to >= g.n_vertices() {
        return contract("path endpoint out of range");
    }
    if from == to {
        return contract("path endpoints must differ");
    }
    let mode = weight_mode(g);
    let mut tally = Tally::new(ell);
    let mut on_path = vec![false; g.n_vertices()];
    on_path[from] = true;
    let mut weights = Vec::with_capacity(ell);
    paths_from(
        g,
        from,
        to,
        ell,
        &mode,
        &mut tally,
        &mut on_path,
        &mut weights,
    );
    Ok(PathCounts {
        from,
        to,
        ell,
        counts: tally.into_counts(&mode),
    })
}

#[allow(clippy::too_many_arguments)]
fn paths_from(
    g: &Graph,
    v: usize,
    to: usize,
    ell: usize,
    mode: &WeightMode,
    tally: &mut Tally,
    on_path: &mut [bool],
    weights: &mut Vec<f64>,
) {
    for &(w, weight) in g.out_neighbors(v) {
        if on_path[w] {
            continue;
        }
        weights.push(weight);
        if w == to {
            record(tally, mode, weights.len(), weights);
        } else if weights.len() < ell {
            on_path[w] = true;
            paths_from(g, w, to, ell, mode, tally, on_path, weights);
            on_path[w] = false;
        }
        weights.pop();
    }
}

/// Johnson-style enumeration of every simple cycle of length at most `ℓ`, each exactly
/// once. Returns unweighted counts per length; `emit` receives each cycle's vertex sequence
/// (starting at its smallest vertex) as it is found.
pub fn johnson_capped(
    g: &Graph,
    ell: usize,
    emit: Option<&mut dyn FnMut(&[usize])>,
) -> Result<CycleCounts> {
    if ell == 0 {
        return contract("ℓ must be at least 1");
    }
    let mut search = Johnson::new(g, ell, emit);
    search.run();
    Ok(CycleCounts {
        ell,
        counts: CountVector::Exact(search.counts.into_iter().map(BigInt::from).collect()),
    })
}

/// Collects every simple cycle of length at most `ℓ`.
pub fn collect_cycles(g: &Graph, ell: usize) -> Result<Vec<CycleRecord>> {
    let mut out = Vec::new();
    let mut emit = |c: &[usize]| {
        out.push(CycleRecord {
            vertices: c.to_vec(),
        })
    };
    johnson_capped(g, ell, Some(&mut emit))?;
    Ok(out)
}

/// `|Cycle_ℓ|` and per-length tallies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCensus {
    pub total: u64,
    pub per_length: Vec<u64>,
}

pub fn total_cycle_census(g: &Graph, ell: usize) -> Result<CycleCensus> {
    let counts = johnson_capped(g, ell, None)?;
    let per_length: Vec<u64> = counts
        .counts
        .exact()
        .expect("johnson counts are exact")
        .iter()
        .map(|x| x.to_u64().expect("cycle counts fit in u64"))
        .collect();
    Ok(CycleCensus {
        total: per_length.iter().sum(),
        per_length,
    })
}

struct Johnson<'g, 'e> {
    g: &'g Graph,
    ell: usize,
    emit: Option<&'e mut dyn FnMut(&[usize])>,
    counts: Vec<u64>,
    start: usize,
    in_component: Vec<bool>,
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    stack: Vec<usize>,
}

impl<'g, 'e> Johnson<'g, 'e> {
    fn new(g: &'g Graph, ell: usize, emit: Option<&'e mut dyn FnMut(&[usize])>) -> Self {
        let n = g.n_vertices();
        Johnson {
            g,
            ell,
            emit,
            counts: vec![0; ell],
            start: 0,
            in_component: vec![false; n],
            blocked: vec![false; n],
            block_map: vec![Vec::new(); n],
            stack: Vec::with_capacity(ell),
        }
    }

    fn run(&mut self) {
        let n = self.g.n_vertices();
        for s in 0..n {
            if self.g.has_edge(s, s) {
                self.counts[0] += 1;
                if let Some(emit) = self.emit.as_mut() {
                    emit(&[s]);
                }
            }
        }
        if self.ell < 2 {
            return;
        }
        for s in 0..n {
            let component = strong_component_from(self.g, s);
            if component.len() < 2 {
                continue;
            }
            for &v in &component {
                self.in_component[v] = true;
                self.blocked[v] = false;
                self.block_map[v].clear();
            }
            self.start = s;
            self.circuit(s);
            for &v in &component {
                self.in_component[v] = false;
            }
        }
    }

    fn circuit(&mut self, v: usize) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        let g = self.g;
        for &(w, _) in g.out_neighbors(v) {
            if w == v || !self.in_component[w] {
                continue;
            }
            if w == self.start {
                let len = self.stack.len();
                self.counts[len - 1] += 1;
                if let Some(emit) = self.emit.as_mut() {
                    emit(&self.stack);
                }
                found = true;
            } else if !self.blocked[w] {
                if self.stack.len() < self.ell {
                    if self.circuit(w) {
                        found = true;
                    }
                } else {
                    // cut by the length cap: v must not stay blocked on account of it
                    found = true;
                }
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &(w, _) in g.out_neighbors(v) {
                if w != v && self.in_component[w] && !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, v: usize) {
        let mut pending = vec![v];
        while let Some(u) = pending.pop() {
            if !self.blocked[u] {
                continue;
            }
            self.blocked[u] = false;
            pending.append(&mut self.block_map[u]);
        }
    }
}

/// Strongly connected component of `s` in the subgraph induced by vertices `>= s`,
/// self-loops ignored.
fn strong_component_from(g: &Graph, s: usize) -> Vec<usize> {
    // forward and backward reachability from s within {v >= s}
    let reach = |forward: bool| -> Vec<bool> {
        let mut seen = vec![false; g.n_vertices()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let nbrs = if forward {
                g.out_neighbors(v)
            } else {
                g.in_neighbors(v)
            };
            for &(w, _) in nbrs {
                if w > s && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    (s..g.n_vertices()).filter(|&v| fwd[v] && bwd[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_edges(n, false, &e)
    }

    fn ints(c: &CountVector) -> Vec<i64> {
        c.to_i64().unwrap()
    }

    #[test]
    fn triangle_oracles() {
        assert_eq!(
            ints(&brute_force_cycle_counts(&k(3), 3).unwrap().counts),
            vec![0, 3, 2]
        );
        assert_eq!(
            ints(&johnson_capped(&k(3), 3, None).unwrap().counts),
            vec![0, 3, 2]
        );
        assert_eq!(total_cycle_census(&k(3), 3).unwrap().total, 5);
    }

    #[test]
    fn k4_oracles() {
        // C(4,3)·2 triangles and C(4,4)·3! four-cycles
        assert_eq!(
            ints(&brute_force_cycle_counts(&k(4), 4).unwrap().counts),
            vec![0, 6, 8, 6]
        );
        assert_eq!(
            ints(&johnson_capped(&k(4), 4, None).unwrap().counts),
            vec![0, 6, 8, 6]
        );
    }

    #[test]
    fn edgeless_and_trees() {
        let e = Graph::from_edges(4, false, &[]);
        assert_eq!(
            ints(&brute_force_cycle_counts(&e, 4).unwrap().counts),
            vec![0; 4]
        );
        let tree = Graph::from_edges(6, false, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]);
        assert_eq!(total_cycle_census(&tree, 6).unwrap().total, 5);
    }

    #[test]
    fn directed_cycle() {
        let g = Graph::from_edges(3, true, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(
            ints(&johnson_capped(&g, 3, None).unwrap().counts),
            vec![0, 0, 1]
        );
    }

    #[test]
    fn paths() {
        let p3 = Graph::from_edges(3, false, &[(0, 1), (1, 2)]);
        assert_eq!(
            ints(&brute_force_path_counts(&p3, 0, 2, 2).unwrap().counts),
            vec![0, 1]
        );
        assert_eq!(
            ints(&brute_force_path_counts(&k(3), 0, 1, 2).unwrap().counts),
            vec![1, 1]
        );
    }

    #[test]
    fn weighted_oracle() {
        let g = Graph::from_weighted_edges(3, false, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, -1.0)]);
        assert_eq!(
            ints(&brute_force_cycle_counts(&g, 3).unwrap().counts),
            vec![0, 3, -2]
        );
        let w = Graph::from_weighted_edges(2, true, &[(0, 1, 3.0), (1, 0, 5.0), (1, 1, 2.0)]);
        assert_eq!(
            ints(&brute_force_cycle_counts(&w, 2).unwrap().counts),
            vec![2, 15]
        );
    }

    #[test]
    fn emitted_records_are_valid_and_distinct() {
        let g = Graph::from_edges(
            6,
            true,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 1),
                (3, 4),
                (4, 5),
                (5, 3),
                (4, 4),
                (1, 0),
            ],
        );
        let cycles = collect_cycles(&g, 6).unwrap();
        let set: HashSet<_> = cycles.iter().cloned().collect();
        assert_eq!(set.len(), cycles.len());
        assert!(cycles.iter().all(|c| c.is_valid_in(&g)));
        assert_eq!(
            ints(&brute_force_cycle_counts(&g, 6).unwrap().counts),
            ints(&johnson_capped(&g, 6, None).unwrap().counts)
        );
    }

    #[test]
    fn cap_does_not_lose_short_cycles() {
        // a long cycle through 0 explored first must not block the short one
        let g = Graph::from_edges(
            6,
            true,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (1, 5),
                (5, 0),
                (2, 5),
            ],
        );
        for ell in 1..=6 {
            assert_eq!(
                ints(&brute_force_cycle_counts(&g, ell).unwrap().counts),
                ints(&johnson_capped(&g, ell, None).unwrap().counts),
                "ℓ = {ell}"
            );
        }
    }
}
