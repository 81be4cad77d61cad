//! Reverse-search enumeration of weakly connected induced subgraphs.
//!
//! The implicit search forest is defined by a parent rule: the parent of a connected set
//! `H` with `|H| > 1` is `H \ {v}` where `v` is the largest vertex whose removal leaves `H`
//! connected. Singletons are the roots. Children of `H` are obtained by adding one
//! neighbour `u` and keeping `H ∪ {u}` only if `H` is its parent. Each connected set is
//! therefore reached exactly once, and the only state is the current root-to-node path plus
//! a few `O(N)` arrays.
//!
//! Because the minimum vertex of a set is never removed by the parent rule, the tree rooted
//! at `{r}` holds exactly the connected sets whose smallest vertex is `r`. This gives a
//! natural partition for parallel work.

use crate::charpoly::{border, BorderScratch};
use crate::graph::{DenseMatrix, Graph};

/// One connected induced subgraph handed to a visitor.
#[derive(Debug)]
pub struct SubgraphVisit<'a> {
    /// Sorted vertex set `H`.
    pub vertices: &'a [usize],
    /// `|N(H)|`: vertices outside `H` with an edge to or from `H`.
    pub neighbor_count: usize,
    /// Weights of the original graph restricted to `H`, indexed like `vertices`. Empty
    /// (dimension 0) when the enumerator was built with [`Enumerator::without_dense`].
    pub dense: &'a DenseMatrix<f64>,
    /// Coefficients `χ_0 = 1, …, χ_m` of `det(xI - dense)`, when requested with
    /// [`Enumerator::with_charpoly`] and representable in `i128`.
    pub charpoly: Option<&'a [i128]>,
}

impl SubgraphVisit<'_> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Position of `v` in `vertices`, if present.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Sets delivered to the visitor.
    pub emitted: u64,
    /// Sets reached by the search, filtered or not.
    pub traversed: u64,
    /// Deepest search path (number of live frames).
    pub max_depth: usize,
}

impl EnumerationStats {
    pub fn merge(self, other: EnumerationStats) -> EnumerationStats {
        EnumerationStats {
            emitted: self.emitted + other.emitted,
            traversed: self.traversed + other.traversed,
            max_depth: self.max_depth.max(other.max_depth),
        }
    }
}

/// Configurable enumeration over one graph.
#[derive(Debug, Clone)]
pub struct Enumerator<'g> {
    graph: &'g Graph,
    bound: usize,
    filter: Vec<usize>,
    build_dense: bool,
    track_charpoly: bool,
}

impl<'g> Enumerator<'g> {
    /// Enumerates sets of size `1..=bound`. A bound above `N` enumerates every connected set.
    pub fn new(graph: &'g Graph, bound: usize) -> Self {
        Enumerator {
            graph,
            bound: bound.min(graph.n_vertices()),
            filter: Vec::new(),
            build_dense: true,
            track_charpoly: false,
        }
    }

    /// Only emit sets containing every vertex of `required`.
    pub fn with_filter(mut self, required: &[usize]) -> Self {
        let mut f = required.to_vec();
        f.sort_unstable();
        f.dedup();
        self.filter = f;
        self
    }

    /// Skip building the induced dense matrices.
    pub fn without_dense(mut self) -> Self {
        self.build_dense = false;
        self.track_charpoly = false;
        self
    }

    /// Maintain the characteristic polynomial of each induced matrix, updated from the
    /// parent set in `O(m²)` per added vertex plus the walk counts it needs. Weights must
    /// be integers.
    pub fn with_charpoly(mut self) -> Self {
        self.build_dense = true;
        self.track_charpoly = true;
        self
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn run(&self, visitor: impl FnMut(&SubgraphVisit<'_>)) -> EnumerationStats {
        self.run_roots(0..self.graph.n_vertices(), visitor)
    }

    /// Runs the search trees rooted at the given singletons only.
    pub fn run_roots(
        &self,
        roots: impl IntoIterator<Item = usize>,
        mut visitor: impl FnMut(&SubgraphVisit<'_>),
    ) -> EnumerationStats {
        let mut stats = EnumerationStats::default();
        if self.bound == 0 {
            return stats;
        }
        let mut state = SearchState::new(self);
        for r in roots {
            // filter members below the root can never appear in this tree
            if self.filter.first().is_some_and(|&f| f < r) {
                continue;
            }
            state.descend_root(r, &mut visitor, &mut stats);
        }
        stats
    }
}

/// Streams every connected induced subgraph with `1 <= |H| <= bound` (and `H ⊇ filter`
/// when given) to `visitor`. Returns the number of emitted sets.
pub fn enumerate_connected_induced(
    graph: &Graph,
    bound: usize,
    filter: Option<&[usize]>,
    visitor: impl FnMut(&SubgraphVisit<'_>),
) -> u64 {
    let mut e = Enumerator::new(graph, bound);
    if let Some(f) = filter {
        e = e.with_filter(f);
    }
    e.run(visitor).emitted
}

/// `|S_{=k}|` for `k = 1..=bound`. Sizes above `N` report zero.
pub fn count_connected_induced(graph: &Graph, bound: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bound];
    Enumerator::new(graph, bound)
        .without_dense()
        .run(|v| counts[v.len() - 1] += 1);
    counts
}

/// `|N(H)|` under the either-direction definition, computed from scratch.
pub fn neighbor_count(graph: &Graph, h: &[usize]) -> usize {
    let mut in_h = vec![false; graph.n_vertices()];
    for &v in h {
        in_h[v] = true;
    }
    let mut seen = vec![false; graph.n_vertices()];
    let mut count = 0;
    for &v in h {
        for &w in graph.undirected_neighbors(v) {
            if !in_h[w] && !seen[w] {
                seen[w] = true;
                count += 1;
            }
        }
    }
    count
}

const ABSENT: usize = usize::MAX;

/// One frame of the search path.
struct Frame {
    sorted: Vec<usize>,
    dense: DenseMatrix<f64>,
    charpoly: Vec<i128>,
    charpoly_ok: bool,
    candidates: Vec<usize>,
}

struct SearchState<'e, 'g> {
    cfg: &'e Enumerator<'g>,
    words: usize,
    // insertion position of each vertex in the current set, or ABSENT
    pos: Vec<usize>,
    // insertion order of the current set
    order: Vec<usize>,
    // undirected adjacency between insertion positions, one bitset row per position
    bits: Vec<u64>,
    // number of current members adjacent to each vertex
    touch: Vec<u32>,
    neighbors: usize,
    filter_hits: usize,
    is_filter: Vec<bool>,
    stamp: Vec<u32>,
    epoch: u32,
    frames: Vec<Frame>,
    scratch_row: Vec<u64>,
    // bitset rows of the current set extended by a candidate
    ext_rows: Vec<u64>,
    tarjan: Tarjan,
    border_r: Vec<i64>,
    border_c: Vec<i64>,
    border_scratch: BorderScratch,
}

impl<'e, 'g> SearchState<'e, 'g> {
    fn new(cfg: &'e Enumerator<'g>) -> Self {
        let n = cfg.graph.n_vertices();
        let words = cfg.bound.div_ceil(64).max(1);
        let mut is_filter = vec![false; n];
        for &f in &cfg.filter {
            if f < n {
                is_filter[f] = true;
            }
        }
        SearchState {
            cfg,
            words,
            pos: vec![ABSENT; n],
            order: Vec::with_capacity(cfg.bound),
            bits: vec![0; cfg.bound * words],
            touch: vec![0; n],
            neighbors: 0,
            filter_hits: 0,
            is_filter,
            stamp: vec![0; n],
            epoch: 0,
            frames: Vec::new(),
            scratch_row: vec![0; words],
            ext_rows: Vec::with_capacity(cfg.bound * words),
            tarjan: Tarjan::new(cfg.bound),
            border_r: Vec::new(),
            border_c: Vec::new(),
            border_scratch: BorderScratch::default(),
        }
    }

    fn descend_root(
        &mut self,
        root: usize,
        visitor: &mut impl FnMut(&SubgraphVisit<'_>),
        stats: &mut EnumerationStats,
    ) {
        self.scratch_row.iter_mut().for_each(|w| *w = 0);
        self.push(root);
        self.visit(root, visitor, stats);
        self.pop();
    }

    fn push(&mut self, u: usize) {
        let g = self.cfg.graph;
        let p = self.order.len();
        // bitset row of u was prepared in scratch_row by the caller
        let w = self.words;
        self.bits[p * w..(p + 1) * w].copy_from_slice(&self.scratch_row);
        for q in BitIter::new(&self.scratch_row) {
            self.bits[q * w + p / 64] |= 1 << (p % 64);
        }
        if self.touch[u] > 0 {
            self.neighbors -= 1;
        }
        for &x in g.undirected_neighbors(u) {
            self.touch[x] += 1;
            if self.touch[x] == 1 && self.pos[x] == ABSENT {
                self.neighbors += 1;
            }
        }
        self.pos[u] = p;
        self.order.push(u);
        if self.is_filter[u] {
            self.filter_hits += 1;
        }

        let depth = p;
        if self.frames.len() <= depth {
            self.frames.push(Frame {
                sorted: Vec::new(),
                dense: DenseMatrix::zeros(0),
                charpoly: Vec::new(),
                charpoly_ok: false,
                candidates: Vec::new(),
            });
        }
        let (before, after) = self.frames.split_at_mut(depth);
        let frame = &mut after[0];
        frame.sorted.clear();
        if let Some(parent) = before.last() {
            frame.sorted.extend_from_slice(&parent.sorted);
        }
        let at = frame.sorted.partition_point(|&v| v < u);
        frame.sorted.insert(at, u);
        if self.cfg.build_dense {
            let sorted = &frame.sorted;
            let entry =
                |i: usize, j: usize| -> f64 { g.weight(sorted[i], sorted[j]).unwrap_or(0.0) };
            match before.last() {
                Some(parent) => parent.dense.inserted_into(at, entry, &mut frame.dense),
                None => frame.dense = DenseMatrix::from_rows(1, vec![entry(0, 0)]),
            }
            if self.cfg.track_charpoly {
                let d = &frame.dense;
                let a = *d.get(at, at) as i64;
                frame.charpoly_ok = match before.last() {
                    None => {
                        frame.charpoly.clear();
                        frame.charpoly.extend([1, -i128::from(a)]);
                        true
                    }
                    Some(parent) if parent.charpoly_ok => {
                        self.border_r.clear();
                        self.border_c.clear();
                        for i in (0..d.dim()).filter(|&i| i != at) {
                            self.border_r.push(*d.get(i, at) as i64);
                            self.border_c.push(*d.get(at, i) as i64);
                        }
                        border(
                            &parent.charpoly,
                            &parent.dense,
                            &self.border_r,
                            &self.border_c,
                            a,
                            !g.is_directed(),
                            &mut self.border_scratch,
                            &mut frame.charpoly,
                        )
                        .is_some()
                    }
                    Some(_) => false,
                };
            }
        }
    }

    fn pop(&mut self) {
        let g = self.cfg.graph;
        let u = self.order.pop().expect("pop on empty search path");
        let p = self.order.len();
        let w = self.words;
        for q in 0..p {
            self.bits[q * w + p / 64] &= !(1 << (p % 64));
        }
        self.pos[u] = ABSENT;
        for &x in g.undirected_neighbors(u) {
            self.touch[x] -= 1;
            if self.touch[x] == 0 && self.pos[x] == ABSENT {
                self.neighbors -= 1;
            }
        }
        if self.touch[u] > 0 {
            self.neighbors += 1;
        }
        if self.is_filter[u] {
            self.filter_hits -= 1;
        }
    }

    fn visit(
        &mut self,
        root: usize,
        visitor: &mut impl FnMut(&SubgraphVisit<'_>),
        stats: &mut EnumerationStats,
    ) {
        let depth = self.order.len();
        stats.traversed += 1;
        stats.max_depth = stats.max_depth.max(depth);
        if self.filter_hits == self.cfg.filter.len() {
            let frame = &self.frames[depth - 1];
            let charpoly =
                (self.cfg.track_charpoly && frame.charpoly_ok).then_some(frame.charpoly.as_slice());
            visitor(&SubgraphVisit {
                vertices: &frame.sorted,
                neighbor_count: self.neighbors,
                dense: &frame.dense,
                charpoly,
            });
            stats.emitted += 1;
        }
        if depth == self.cfg.bound {
            return;
        }

        // candidate extensions: neighbours of the current set above the root
        let g = self.cfg.graph;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut candidates = std::mem::take(&mut self.frames[depth - 1].candidates);
        candidates.clear();
        for &h in &self.order {
            for &x in g.undirected_neighbors(h) {
                if x > root && self.pos[x] == ABSENT && self.stamp[x] != self.epoch {
                    self.stamp[x] = self.epoch;
                    candidates.push(x);
                }
            }
        }

        for &u in &candidates {
            self.prepare_row(u);
            if self.is_canonical_child(u) {
                self.push(u);
                self.visit(root, visitor, stats);
                self.pop();
            }
        }
        self.frames[depth - 1].candidates = candidates;
    }

    /// Fills `scratch_row` with the positions of current members adjacent to `u`.
    fn prepare_row(&mut self, u: usize) {
        self.scratch_row.iter_mut().for_each(|w| *w = 0);
        let g = self.cfg.graph;
        let adj = g.undirected_neighbors(u);
        if adj.len() <= self.order.len() * 4 {
            for &x in adj {
                let q = self.pos[x];
                if q != ABSENT {
                    self.scratch_row[q / 64] |= 1 << (q % 64);
                }
            }
        } else {
            for (q, &x) in self.order.iter().enumerate() {
                if adj.binary_search(&x).is_ok() {
                    self.scratch_row[q / 64] |= 1 << (q % 64);
                }
            }
        }
    }

    /// True when the current set is the parent of `current ∪ {u}`, i.e. no member larger
    /// than `u` can be removed from the extended set without disconnecting it.
    fn is_canonical_child(&mut self, u: usize) -> bool {
        if self.order.iter().all(|&v| v < u) {
            return true;
        }
        let m = self.order.len() + 1;
        let w = self.words;
        self.ext_rows.clear();
        self.ext_rows.extend_from_slice(&self.bits[..(m - 1) * w]);
        for q in BitIter::new(&self.scratch_row) {
            self.ext_rows[q * w + (m - 1) / 64] |= 1 << ((m - 1) % 64);
        }
        self.ext_rows.extend_from_slice(&self.scratch_row);
        let leaf = |q: usize| {
            self.ext_rows[q * w..(q + 1) * w]
                .iter()
                .map(|x| x.count_ones())
                .sum::<u32>()
                <= 1
        };
        if self
            .order
            .iter()
            .enumerate()
            .any(|(q, &v)| v > u && leaf(q))
        {
            return false;
        }
        if w == 1 {
            let full = if m == 64 { !0 } else { (1u64 << m) - 1 };
            let rows = &self.ext_rows;
            return self.order.iter().enumerate().all(|(q, &v)| {
                if v < u {
                    return true;
                }
                let keep = full & !(1 << q);
                let mut reach = 1u64 << keep.trailing_zeros();
                let mut frontier = reach;
                while frontier != 0 {
                    let mut grown = reach;
                    for x in BitIter::new(std::slice::from_ref(&frontier)) {
                        grown |= rows[x];
                    }
                    grown &= keep;
                    frontier = grown & !reach;
                    reach = grown;
                }
                reach != keep
            });
        }
        let cut = self.tarjan.articulation_points(&self.ext_rows, w, m);
        self.order.iter().enumerate().all(|(q, &v)| v < u || cut[q])
    }
}

/// Iterative articulation-point search on a small graph given as bitset rows.
struct Tarjan {
    disc: Vec<usize>,
    low: Vec<usize>,
    cut: Vec<bool>,
    // (vertex, parent, next neighbour index to scan)
    stack: Vec<(usize, usize, usize)>,
}

impl Tarjan {
    fn new(capacity: usize) -> Self {
        Tarjan {
            disc: Vec::with_capacity(capacity),
            low: Vec::with_capacity(capacity),
            cut: Vec::with_capacity(capacity),
            stack: Vec::with_capacity(capacity),
        }
    }

    /// `rows` holds `m` bitset rows of `words` words each.
    fn articulation_points(&mut self, rows: &[u64], words: usize, m: usize) -> &[bool] {
        self.disc.clear();
        self.disc.resize(m, usize::MAX);
        self.low.clear();
        self.low.resize(m, 0);
        self.cut.clear();
        self.cut.resize(m, false);
        if m == 0 {
            return &self.cut;
        }
        let stack = &mut self.stack;
        stack.clear();
        stack.push((0, usize::MAX, 0));
        self.disc[0] = 0;
        self.low[0] = 0;
        let mut time = 1;
        let mut root_children = 0;
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            let row = &rows[v * words..(v + 1) * words];
            let nb = next_set_bit(row, *next, m);
            match nb {
                Some(x) => {
                    *next = x + 1;
                    if x == parent {
                        continue;
                    }
                    if self.disc[x] == usize::MAX {
                        self.disc[x] = time;
                        self.low[x] = time;
                        time += 1;
                        if v == 0 {
                            root_children += 1;
                        }
                        stack.push((x, v, 0));
                    } else {
                        self.low[v] = self.low[v].min(self.disc[x]);
                    }
                }
                None => {
                    stack.pop();
                    if parent != usize::MAX {
                        self.low[parent] = self.low[parent].min(self.low[v]);
                        if parent != 0 && self.low[v] >= self.disc[parent] {
                            self.cut[parent] = true;
                        }
                    }
                }
            }
        }
        self.cut[0] = root_children > 1;
        &self.cut
    }
}

/// Smallest set bit at index `>= from` and `< limit`.
fn next_set_bit(row: &[u64], from: usize, limit: usize) -> Option<usize> {
    let mut i = from / 64;
    if i >= row.len() {
        return None;
    }
    let mut word = row[i] & (!0u64 << (from % 64));
    loop {
        if word != 0 {
            let x = i * 64 + word.trailing_zeros() as usize;
            return (x < limit).then_some(x);
        }
        i += 1;
        if i >= row.len() || i * 64 >= limit {
            return None;
        }
        word = row[i];
    }
}

struct BitIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    fn new(words: &'a [u64]) -> Self {
        BitIter {
            words,
            index: 0,
            current: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}
