//! Graph representation, preprocessing and restriction to induced subgraphs.
//!
//! Vertices are dense ids `0..n`. Directed graphs keep both out- and in-adjacency;
//! undirected graphs expose every edge from both endpoints through the out-adjacency.
//! Parallel edges collapse on construction: the first occurrence's weight is kept and the
//! number of occurrences is recorded as the edge multiplicity.

use std::collections::HashMap;

use crate::error::{contract, Result};

/// One stored edge. For undirected graphs `source`/`target` keep the orientation of the
/// first occurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
    pub multiplicity: u64,
}

/// Immutable (di)graph with optional real weights and vertex labels.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
    // structure of the undirected version, self-loops excluded
    und_adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    names: Option<Vec<String>>,
}

/// Collects edges, collapses parallel ones and builds a [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    index: HashMap<(usize, usize), usize>,
}

impl GraphBuilder {
    pub fn new(n: usize, directed: bool) -> Self {
        GraphBuilder {
            n,
            directed,
            edges: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Grows the vertex count so that `v` is a valid id.
    pub fn ensure_vertex(&mut self, v: usize) {
        if v >= self.n {
            self.n = v + 1;
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> &mut Self {
        self.add_edge_with_multiplicity(u, v, weight, 1)
    }

    pub fn add_edge_with_multiplicity(
        &mut self,
        u: usize,
        v: usize,
        weight: f64,
        multiplicity: u64,
    ) -> &mut Self {
        self.ensure_vertex(u.max(v));
        let key = if self.directed {
            (u, v)
        } else {
            (u.min(v), u.max(v))
        };
        match self.index.get(&key) {
            Some(&i) => self.edges[i].multiplicity += multiplicity,
            None => {
                self.index.insert(key, self.edges.len());
                self.edges.push(Edge {
                    source: u,
                    target: v,
                    weight,
                    multiplicity,
                });
            }
        }
        self
    }

    pub fn build(&self) -> Graph {
        Graph::from_edge_structs(self.n, self.directed, self.edges.clone())
    }
}

impl Graph {
    fn from_edge_structs(n: usize, directed: bool, edges: Vec<Edge>) -> Graph {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = if directed {
            vec![Vec::new(); n]
        } else {
            Vec::new()
        };
        let mut und: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &edges {
            let (u, v, w) = (e.source, e.target, e.weight);
            out_adj[u].push((v, w));
            if directed {
                in_adj[v].push((u, w));
            } else if u != v {
                out_adj[v].push((u, w));
            }
            if u != v {
                und[u].push(v);
                und[v].push(u);
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_by_key(|&(t, _)| t);
        }
        for list in &mut und {
            list.sort_unstable();
            list.dedup();
        }
        Graph {
            n,
            directed,
            edges,
            out_adj,
            in_adj,
            und_adj: und,
            labels: None,
            names: None,
        }
    }

    /// Unweighted graph from an edge list.
    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Graph {
        let mut b = GraphBuilder::new(n, directed);
        for &(u, v) in edges {
            b.add_edge(u, v, 1.0);
        }
        b.build()
    }

    pub fn from_weighted_edges(n: usize, directed: bool, edges: &[(usize, usize, f64)]) -> Graph {
        let mut b = GraphBuilder::new(n, directed);
        for &(u, v, w) in edges {
            b.add_edge(u, v, w);
        }
        b.build()
    }

    /// Attaches one label per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n {
            return contract(format!(
                "{} labels supplied for {} vertices",
                labels.len(),
                self.n
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Graph> {
        if names.len() != self.n {
            return contract(format!(
                "{} names supplied for {} vertices",
                names.len(),
                self.n
            ));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Number of stored edges (undirected edges counted once, self-loops included).
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of a vertex: its original token if known, else its id.
    pub fn vertex_name(&self, v: usize) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    /// Looks up a vertex by original name, falling back to parsing a numeric id.
    pub fn find_vertex(&self, name: &str) -> Option<usize> {
        if let Some(names) = &self.names {
            return names.iter().position(|n| n == name);
        }
        name.parse::<usize>().ok().filter(|&v| v < self.n)
    }

    /// Out-neighbours with weights, sorted by target. For undirected graphs this is the full
    /// neighbourhood.
    pub fn out_neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.out_adj[v]
    }

    /// In-neighbours with weights. Equal to [`Graph::out_neighbors`] on undirected graphs.
    pub fn in_neighbors(&self, v: usize) -> &[(usize, f64)] {
        if self.directed {
            &self.in_adj[v]
        } else {
            &self.out_adj[v]
        }
    }

    /// Neighbours in the undirected version, self-loops excluded.
    pub fn undirected_neighbors(&self, v: usize) -> &[usize] {
        &self.und_adj[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let list = &self.out_adj[u];
        list.binary_search_by_key(&v, |&(t, _)| t)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> Option<u64> {
        self.edges
            .iter()
            .find(|e| {
                (e.source == u && e.target == v)
                    || (!self.directed && e.source == v && e.target == u)
            })
            .map(|e| e.multiplicity)
    }

    pub fn self_loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.source == e.target).count()
    }

    /// Maximum degree of the undirected version.
    pub fn max_degree(&self) -> usize {
        self.und_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when every weight is an integer small enough to be represented exactly.
    pub fn is_integral(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.weight.is_finite() && e.weight.fract() == 0.0 && e.weight.abs() < 9.0e15)
    }

    /// True when every weight is `+1` or `-1`.
    pub fn is_signed(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.weight == 1.0 || e.weight == -1.0)
    }

    /// Copy of this graph with every weight replaced by its absolute value.
    pub fn unsigned_version(&self) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                weight: e.weight.abs(),
                ..*e
            })
            .collect();
        self.with_edges(edges)
    }

    /// Copy of this graph with every weight set to 1.
    pub fn with_unit_weights(&self) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { weight: 1.0, ..*e })
            .collect();
        self.with_edges(edges)
    }

    fn with_edges(&self, edges: Vec<Edge>) -> Graph {
        let mut g = Graph::from_edge_structs(self.n, self.directed, edges);
        g.labels = self.labels.clone();
        g.names = self.names.clone();
        g
    }

    /// Undirected graph with an edge `{u, v}` iff `u -> v` or `v -> u` exists. Weights are
    /// dropped; multiplicities of merged arcs add up.
    pub fn undirected_version(&self) -> Graph {
        let mut b = GraphBuilder::new(self.n, false);
        for e in &self.edges {
            b.add_edge_with_multiplicity(e.source, e.target, 1.0, e.multiplicity);
        }
        let mut g = b.build();
        g.labels = self.labels.clone();
        g.names = self.names.clone();
        g
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.source] != usize::MAX && new_id[e.target] != usize::MAX)
            .map(|e| Edge {
                source: new_id[e.source],
                target: new_id[e.target],
                ..*e
            })
            .collect();
        let mut g = Graph::from_edge_structs(vertices.len(), self.directed, edges);
        g.labels = self
            .labels
            .as_ref()
            .map(|l| vertices.iter().map(|&v| l[v].clone()).collect());
        g.names = self
            .names
            .as_ref()
            .map(|l| vertices.iter().map(|&v| l[v].clone()).collect());
        g
    }

    /// Dense adjacency of the subgraph induced by a sorted vertex set. Row/column `i`
    /// corresponds to `vertices[i]`; the diagonal carries self-loop weights.
    pub fn induced_dense(&self, vertices: &[usize]) -> Result<DenseMatrix<f64>> {
        if vertices.is_empty() {
            return contract("induced_dense needs at least one vertex");
        }
        if let Some(&bad) = vertices.iter().find(|&&v| v >= self.n) {
            return contract(format!("vertex {bad} out of range (n = {})", self.n));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return contract("vertex set must be sorted and duplicate-free");
        }
        let m = vertices.len();
        let mut a = DenseMatrix::zeros(m);
        for (i, &u) in vertices.iter().enumerate() {
            for &(t, w) in &self.out_adj[u] {
                if let Ok(j) = vertices.binary_search(&t) {
                    a.set(i, j, w);
                }
            }
        }
        Ok(a)
    }

    /// Removes sources, sinks (directed) or isolated vertices (undirected) until none are
    /// left. Self-loops count towards both in- and out-degree.
    pub fn preprocess(&self) -> Preprocessed {
        let mut alive = vec![true; self.n];
        let mut out_deg: Vec<usize> = (0..self.n).map(|v| self.out_adj[v].len()).collect();
        let mut in_deg: Vec<usize> = (0..self.n).map(|v| self.in_neighbors(v).len()).collect();
        let dead = |v: usize, o: &[usize], i: &[usize]| o[v] == 0 || i[v] == 0;
        let mut stack: Vec<usize> = (0..self.n)
            .filter(|&v| dead(v, &out_deg, &in_deg))
            .collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            // self-loops disappear with v itself
            for &(t, _) in &self.out_adj[v] {
                if t != v && alive[t] {
                    in_deg[t] -= 1;
                    if !self.directed {
                        out_deg[t] -= 1;
                    }
                    if dead(t, &out_deg, &in_deg) {
                        stack.push(t);
                    }
                }
            }
            if self.directed {
                for &(s, _) in &self.in_adj[v] {
                    if s != v && alive[s] {
                        out_deg[s] -= 1;
                        if dead(s, &out_deg, &in_deg) {
                            stack.push(s);
                        }
                    }
                }
            }
        }
        let kept: Vec<usize> = (0..self.n).filter(|&v| alive[v]).collect();
        Preprocessed {
            graph: self.induced_subgraph(&kept),
            original_ids: kept,
        }
    }
}

/// Result of [`Graph::preprocess`]: the reduced graph and, for each of its vertices, the id
/// it had in the input graph.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub graph: Graph,
    pub original_ids: Vec<usize>,
}

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Clone + Default> DenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![T::default(); dim * dim],
        }
    }
}

impl<T> DenseMatrix<T> {
    pub fn from_rows(dim: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data must be dim x dim");
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> DenseMatrix<T> {
    /// Copy of `self` with a new row and column inserted at `at`, filled by `entry(i, j)` in
    /// the enlarged index space.
    pub fn with_inserted(&self, at: usize, entry: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = DenseMatrix {
            dim: 0,
            data: Vec::new(),
        };
        self.inserted_into(at, entry, &mut out);
        out
    }

    /// As [`DenseMatrix::with_inserted`], writing into `out` and reusing its storage.
    pub fn inserted_into(
        &self,
        at: usize,
        mut entry: impl FnMut(usize, usize) -> T,
        out: &mut DenseMatrix<T>,
    ) {
        let m = self.dim + 1;
        out.dim = m;
        out.data.clear();
        out.data.reserve(m * m);
        for i in 0..m {
            if i == at {
                out.data.extend((0..m).map(|j| entry(i, j)));
                continue;
            }
            let si = if i > at { i - 1 } else { i };
            let src = &self.data[si * self.dim..(si + 1) * self.dim];
            out.data.extend_from_slice(&src[..at]);
            out.data.push(entry(i, at));
            out.data.extend_from_slice(&src[at..]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, false, &[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn undirected_edges_visible_from_both_ends() {
        let g = triangle();
        assert_eq!(g.n_edges(), 3);
        assert!(g.has_edge(0, 2) && g.has_edge(2, 0));
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn parallel_edges_collapse_with_multiplicity() {
        let mut b = GraphBuilder::new(2, false);
        b.add_edge(0, 1, 1.0)
            .add_edge(1, 0, 1.0)
            .add_edge(0, 1, 1.0);
        let g = b.build();
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.multiplicity(1, 0), Some(3));
        assert_eq!(g.out_neighbors(0), &[(1, 1.0)]);
    }

    #[test]
    fn directed_in_adjacency_is_transpose() {
        let g = Graph::from_weighted_edges(3, true, &[(0, 1, 2.0), (1, 2, 3.0), (2, 2, 1.0)]);
        for u in 0..3 {
            for &(v, w) in g.out_neighbors(u) {
                assert!(g.in_neighbors(v).contains(&(u, w)));
            }
        }
        let total_in: usize = (0..3).map(|v| g.in_neighbors(v).len()).sum();
        assert_eq!(total_in, g.n_edges());
    }

    #[test]
    fn induced_dense_examples() {
        let g = triangle();
        let full = g.induced_dense(&[0, 1, 2]).unwrap();
        assert_eq!(full.as_slice(), &[0., 1., 1., 1., 0., 1., 1., 1., 0.]);
        let edge = g.induced_dense(&[0, 1]).unwrap();
        assert_eq!(edge.as_slice(), &[0., 1., 1., 0.]);

        let signed =
            Graph::from_weighted_edges(3, false, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, -1.0)]);
        let s = signed.induced_dense(&[0, 1, 2]).unwrap();
        assert_eq!(s.as_slice(), &[0., 1., -1., 1., 0., 1., -1., 1., 0.]);
    }

    #[test]
    fn induced_dense_rejects_bad_sets() {
        let g = triangle();
        assert!(g.induced_dense(&[0, 5]).is_err());
        assert!(g.induced_dense(&[]).is_err());
        assert!(g.induced_dense(&[1, 0]).is_err());
    }

    #[test]
    fn self_loop_on_diagonal() {
        let g = Graph::from_edges(2, false, &[(0, 0), (0, 1)]);
        let a = g.induced_dense(&[0, 1]).unwrap();
        assert_eq!(a.as_slice(), &[1., 1., 1., 0.]);
        assert_eq!(g.self_loop_count(), 1);
        assert_eq!(g.max_degree(), 1);
    }

    #[test]
    fn undirected_version_examples() {
        let c3 = Graph::from_edges(3, true, &[(0, 1), (1, 2), (2, 0)]);
        let u = c3.undirected_version();
        assert!(!u.is_directed());
        assert_eq!(u.n_edges(), 3);

        let both = Graph::from_edges(2, true, &[(0, 1), (1, 0)]);
        assert_eq!(both.undirected_version().n_edges(), 1);

        let p3 = Graph::from_edges(3, false, &[(0, 1), (1, 2)]);
        let again = p3.undirected_version();
        assert_eq!(again.edges(), p3.edges());
    }

    #[test]
    fn preprocess_examples() {
        let dag = Graph::from_edges(5, true, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]);
        assert_eq!(dag.preprocess().graph.n_vertices(), 0);

        let pendant = Graph::from_edges(4, true, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let p = pendant.preprocess();
        assert_eq!(p.original_ids, vec![0, 1, 2]);
        assert_eq!(p.graph.n_edges(), 3);

        let t = triangle().preprocess();
        assert_eq!(t.graph.n_vertices(), 3);
        assert_eq!(t.graph.n_edges(), 3);
    }

    #[test]
    fn preprocess_keeps_self_loop_vertices() {
        let g = Graph::from_edges(3, true, &[(0, 0), (1, 2)]);
        let p = g.preprocess();
        assert_eq!(p.original_ids, vec![0]);
    }

    #[test]
    fn with_inserted_places_new_row_and_column() {
        let a = DenseMatrix::from_rows(2, vec![1, 2, 3, 4]);
        let b = a.with_inserted(1, |i, j| 10 * i + j + 100);
        assert_eq!(b.as_slice(), &[1, 101, 2, 110, 111, 112, 3, 121, 4]);
    }
}
