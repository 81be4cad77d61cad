//! Cycle and path counts as signed sums over connected induced subgraphs.
//!
//! For every connected induced subgraph `H` with `|H| = m` vertices and `|N(H)| = d`
//! neighbours, the number of simple cycles of length `k` receives the term
//!
//! ```text
//!     C(d, k - m) * (-1)^m * Tr(A_H^k)
//! ```
//!
//! and the final count is `(-1)^k / k` times the accumulated sum. The binomial vanishes
//! unless `m <= k <= m + d`, so only subgraphs with at most `ℓ` vertices matter and each of
//! them contributes to a short range of lengths. Cycles through a fixed vertex read a
//! diagonal entry instead of the trace and skip the division; paths between `i` and `j`
//! read the `(i, j)` entry with the binomial shifted by one (a path of length `k` spans
//! `k + 1` vertices) and carry the sign `(-1)^(k+1)`.
//!
//! Integer-weighted graphs (including ±1 signed graphs) are counted exactly. Cycle traces
//! come from characteristic polynomials maintained along the enumeration (each set is its
//! parent plus one vertex) and Newton's identities. Other probes, and any polynomial that
//! leaves `i128`, use matrix powers in `i64`, then `i128`, then `BigInt`, whichever is the
//! first not to overflow. Sums are arbitrary precision throughout. Any non-integer weight switches to `f64` with
//! compensated summation and a per-length condition estimate.

use std::collections::HashMap;

use log::warn;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, binomial_i128, divide_exact, sign, CompensatedSum, ExactSum, Scalar};
use crate::charpoly::{max_row_sum, power_traces};
use crate::enumerate::{Enumerator, SubgraphVisit};
use crate::error::{contract, Error, Result};
use crate::graph::{DenseMatrix, Graph};
use crate::powers::{PowerKernel, Read};

/// Per-length counts, exact or floating point.
#[derive(Debug, Clone, PartialEq)]
pub enum CountVector {
    Exact(Vec<BigInt>),
    /// Real-weighted graphs. `condition[k]` is the largest partial sum magnitude divided by
    /// the magnitude of the result; large values flag cancellation.
    Approximate {
        values: Vec<f64>,
        condition: Vec<f64>,
    },
}

impl CountVector {
    pub fn len(&self) -> usize {
        match self {
            CountVector::Exact(v) => v.len(),
            CountVector::Approximate { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CountVector::Exact(_))
    }

    pub fn exact(&self) -> Option<&[BigInt]> {
        match self {
            CountVector::Exact(v) => Some(v),
            CountVector::Approximate { .. } => None,
        }
    }

    /// Exact counts as `i64`, when they are exact and fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.exact()?.iter().map(|x| x.to_i64()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            CountVector::Exact(v) => v.iter().map(crate::arith::big_to_f64).collect(),
            CountVector::Approximate { values, .. } => values.clone(),
        }
    }

    /// Decimal strings, the serialized form of counts.
    pub fn to_strings(&self) -> Vec<String> {
        match self {
            CountVector::Exact(v) => v.iter().map(BigInt::to_string).collect(),
            CountVector::Approximate { values, .. } => {
                values.iter().map(|x| format!("{x:e}")).collect()
            }
        }
    }
}

/// `γ(1..=ℓ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCounts {
    pub ell: usize,
    pub counts: CountVector,
}

/// `γ_i(1..=ℓ)`: cycles through one vertex, counted once per cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedCycleCounts {
    pub root: usize,
    pub ell: usize,
    pub counts: CountVector,
}

/// `π_{i→j}(1..=ℓ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCounts {
    pub from: usize,
    pub to: usize,
    pub ell: usize,
    pub counts: CountVector,
}

/// Execution knobs shared by the sieve entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveOptions {
    /// Worker threads; `1` runs on the calling thread.
    pub threads: usize,
    /// Evaluate every length `1..=ℓ` for every subgraph instead of only the lengths where
    /// the binomial can be non-zero. Results must not change; exists for testing.
    pub full_range: bool,
    #[serde(default)]
    pub trace_method: TraceMethod,
}

/// How exact cycle counts obtain `Tr(A_H^k)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceMethod {
    /// Characteristic polynomials updated along the enumeration, traces by Newton's
    /// identities; falls back to powers on `i128` overflow.
    #[default]
    CharPoly,
    /// Repeated matrix products for every subgraph.
    Powers,
}

impl Default for SieveOptions {
    fn default() -> Self {
        SieveOptions {
            threads: 1,
            full_range: false,
            trace_method: TraceMethod::CharPoly,
        }
    }
}

/// `Tr(A^k)` for `k = 1..=k_max`, exactly.
pub fn trace_powers(a: &DenseMatrix<i64>, k_max: usize) -> Vec<BigInt> {
    match exact_probe(a, 1, k_max, &Probe::Trace) {
        ProbeValues::Small(v) => v.into_iter().map(|x| BigInt::from(x[0])).collect(),
        ProbeValues::Big(v) => v.into_iter().map(|mut x| x.swap_remove(0)).collect(),
    }
}

/// `Tr(A^k)` for `k = 1..=k_max` in floating point.
pub fn trace_powers_f64(a: &DenseMatrix<f64>, k_max: usize) -> Vec<f64> {
    probe_powers(a, 1, k_max, &Probe::Trace)
        .expect("float products never fail")
        .into_iter()
        .map(|x| x[0])
        .collect()
}

pub fn count_cycles(g: &Graph, ell: usize) -> Result<CycleCounts> {
    count_cycles_with(g, ell, SieveOptions::default())
}

pub fn count_cycles_with(g: &Graph, ell: usize, opts: SieveOptions) -> Result<CycleCounts> {
    check_ell(ell)?;
    if ell > g.n_vertices() {
        warn!(
            "ℓ = {ell} exceeds N = {}; lengths above N are zero",
            g.n_vertices()
        );
    }
    let counts = run_sieve(g, Target::Cycles, ell, opts)?;
    Ok(CycleCounts { ell, counts })
}

pub fn count_cycles_through(g: &Graph, root: usize, ell: usize) -> Result<RootedCycleCounts> {
    count_cycles_through_with(g, root, ell, SieveOptions::default())
}

pub fn count_cycles_through_with(
    g: &Graph,
    root: usize,
    ell: usize,
    opts: SieveOptions,
) -> Result<RootedCycleCounts> {
    check_ell(ell)?;
    check_vertex(g, root)?;
    let counts = run_sieve(g, Target::Rooted(root), ell, opts)?;
    Ok(RootedCycleCounts { root, ell, counts })
}

pub fn count_paths(g: &Graph, from: usize, to: usize, ell: usize) -> Result<PathCounts> {
    count_paths_with(g, from, to, ell, SieveOptions::default())
}

pub fn count_paths_with(
    g: &Graph,
    from: usize,
    to: usize,
    ell: usize,
    opts: SieveOptions,
) -> Result<PathCounts> {
    check_ell(ell)?;
    check_vertex(g, from)?;
    check_vertex(g, to)?;
    if from == to {
        return contract("path endpoints must differ; use count_cycles_through for closed walks");
    }
    let counts = run_sieve(g, Target::Path(from, to), ell, opts)?;
    Ok(PathCounts {
        from,
        to,
        ell,
        counts,
    })
}

/// Path counts for every ordered pair of distinct vertices from a single unfiltered
/// enumeration.
#[derive(Debug, Clone)]
pub struct AllPairsPathCounts {
    pub ell: usize,
    counts: HashMap<(usize, usize), CountVector>,
}

impl AllPairsPathCounts {
    /// Counts for `from -> to`; pairs with no path of length `<= ℓ` are all zeros.
    pub fn get(&self, from: usize, to: usize) -> CountVector {
        self.counts
            .get(&(from, to))
            .cloned()
            .unwrap_or_else(|| CountVector::Exact(vec![BigInt::zero(); self.ell]))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(usize, usize), &CountVector)> {
        self.counts.iter()
    }
}

/// All ordered pairs at once. Only integer-weighted graphs are supported.
pub fn count_paths_all_pairs(g: &Graph, ell: usize) -> Result<AllPairsPathCounts> {
    check_ell(ell)?;
    if !g.is_integral() {
        return contract("all-pairs path counting needs integer weights");
    }
    let mut sums: HashMap<(usize, usize), Vec<ExactSum>> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    Enumerator::new(g, ell + 1).run(|visit| {
        let m = visit.len();
        if m < 2 {
            return;
        }
        let d = visit.neighbor_count;
        let k_lo = m - 1;
        let k_hi = ell.min(m - 1 + d);
        if k_lo > k_hi {
            return;
        }
        pairs.clear();
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    pairs.push((a, b));
                }
            }
        }
        let a = to_integer_matrix(visit.dense);
        let values = exact_probe(&a, k_lo, k_hi, &Probe::Entries(&pairs));
        for (t, k) in (k_lo..=k_hi).enumerate() {
            let coeff = Coefficient::new(d, k as i64 + 1 - m as i64, m);
            for (p, &(x, y)) in pairs.iter().enumerate() {
                let key = (visit.vertices[x], visit.vertices[y]);
                let acc = sums
                    .entry(key)
                    .or_insert_with(|| vec![ExactSum::default(); ell]);
                coeff.accumulate(&mut acc[k - 1], &values, t, p);
            }
        }
    });
    let counts = sums
        .into_iter()
        .map(|(key, acc)| {
            let v = acc
                .iter()
                .enumerate()
                .map(|(i, s)| s.value() * sign(i + 2))
                .collect();
            (key, CountVector::Exact(v))
        })
        .collect();
    Ok(AllPairsPathCounts { ell, counts })
}

/// Outcome of checking `ℓ·γ(ℓ) = Σ_i γ_i(ℓ)` for every length up to `ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eq6Report {
    pub ell: usize,
    /// `Σ_i γ_i(k) - k·γ(k)` per length, as decimal strings (exact) or floats.
    pub residuals: Vec<String>,
    pub passed: bool,
}

/// Computes the whole-graph counts and the `N` rooted counts independently and compares
/// them per length. Exact graphs must match exactly; real-weighted graphs within `1e-9`
/// relative to the largest term.
pub fn verify_eq6(g: &Graph, ell: usize) -> Result<Eq6Report> {
    let total = count_cycles(g, ell)?;
    let rooted: Vec<RootedCycleCounts> = (0..g.n_vertices())
        .map(|i| count_cycles_through(g, i, ell))
        .collect::<Result<_>>()?;
    match &total.counts {
        CountVector::Exact(gamma) => {
            let mut residuals = Vec::with_capacity(ell);
            let mut passed = true;
            for k in 1..=ell {
                let mut sum = BigInt::zero();
                for r in &rooted {
                    sum += &r.counts.exact().expect("same pipeline")[k - 1];
                }
                let res = sum - &gamma[k - 1] * BigInt::from(k);
                passed &= res.is_zero();
                residuals.push(res.to_string());
            }
            Ok(Eq6Report {
                ell,
                residuals,
                passed,
            })
        }
        CountVector::Approximate { values, .. } => {
            let mut residuals = Vec::with_capacity(ell);
            let mut passed = true;
            for k in 1..=ell {
                let parts: Vec<f64> = rooted.iter().map(|r| r.counts.to_f64()[k - 1]).collect();
                let sum: f64 = parts.iter().sum();
                let rhs = values[k - 1] * k as f64;
                let scale = parts.iter().fold(rhs.abs(), |s, x| s.max(x.abs())).max(1.0);
                let res = sum - rhs;
                passed &= res.abs() <= 1e-9 * scale;
                residuals.push(format!("{res:e}"));
            }
            Ok(Eq6Report {
                ell,
                residuals,
                passed,
            })
        }
    }
}

fn check_ell(ell: usize) -> Result<()> {
    if ell == 0 {
        contract("ℓ must be at least 1")
    } else {
        Ok(())
    }
}

fn check_vertex(g: &Graph, v: usize) -> Result<()> {
    if v >= g.n_vertices() {
        contract(format!("vertex {v} out of range (N = {})", g.n_vertices()))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Cycles,
    Rooted(usize),
    Path(usize, usize),
}

impl Target {
    /// Binomial shift: paths of length `k` span `k + 1` vertices.
    fn shift(self) -> usize {
        match self {
            Target::Path(..) => 1,
            _ => 0,
        }
    }

    fn filter(self) -> Vec<usize> {
        match self {
            Target::Cycles => Vec::new(),
            Target::Rooted(i) => vec![i],
            Target::Path(i, j) => vec![i, j],
        }
    }
}

fn run_sieve(g: &Graph, target: Target, ell: usize, opts: SieveOptions) -> Result<CountVector> {
    let exact = g.is_integral();
    let bound = ell + target.shift();
    let mut enumerator = Enumerator::new(g, bound).with_filter(&target.filter());
    if exact && target == Target::Cycles && opts.trace_method == TraceMethod::CharPoly {
        enumerator = enumerator.with_charpoly();
    }
    let fresh = || Accumulator::new(target, ell, exact, opts.full_range);

    let acc = if opts.threads <= 1 || g.n_vertices() < 2 {
        let mut acc = fresh();
        enumerator.run(|v| acc.absorb(v));
        acc
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Contract(format!("cannot start thread pool: {e}")))?;
        let n = g.n_vertices();
        let chunk = (n / (opts.threads * 8)).max(1);
        let roots: Vec<usize> = (0..n).collect();
        pool.install(|| {
            roots
                .par_chunks(chunk)
                .map(|chunk| {
                    let mut acc = fresh();
                    enumerator.run_roots(chunk.iter().copied(), |v| acc.absorb(v));
                    acc
                })
                .reduce(fresh, |mut a, b| {
                    a.merge(&b);
                    a
                })
        })
    };
    acc.finish()
}

/// Mergeable per-length sums for one target.
#[derive(Debug, Clone)]
struct Accumulator {
    target: Target,
    ell: usize,
    full_range: bool,
    exact: Vec<ExactSum>,
    approx: Vec<CompensatedSum>,
    is_exact: bool,
    kernel: PowerKernel,
    traces: Vec<i128>,
    binomials: BinomialCache,
}

impl Accumulator {
    fn new(target: Target, ell: usize, is_exact: bool, full_range: bool) -> Self {
        Accumulator {
            target,
            ell,
            full_range,
            exact: if is_exact {
                vec![ExactSum::default(); ell]
            } else {
                Vec::new()
            },
            approx: if is_exact {
                Vec::new()
            } else {
                vec![CompensatedSum::default(); ell]
            },
            is_exact,
            kernel: PowerKernel::default(),
            traces: Vec::new(),
            binomials: BinomialCache {
                ell,
                rows: Vec::new(),
            },
        }
    }

    fn absorb(&mut self, visit: &SubgraphVisit<'_>) {
        let m = visit.len();
        let d = visit.neighbor_count;
        let shift = self.target.shift();
        let (k_lo, k_hi) = if self.full_range {
            (1, self.ell)
        } else {
            ((m - shift).max(1), self.ell.min(m + d - shift))
        };
        if k_lo > k_hi {
            return;
        }
        let read = match self.target {
            Target::Cycles => Read::Trace,
            Target::Rooted(i) => {
                let p = visit.position(i).expect("filter guarantees the root");
                Read::Entry(p, p)
            }
            Target::Path(i, j) => {
                let p = visit.position(i).expect("filter guarantees both endpoints");
                let q = visit.position(j).expect("filter guarantees both endpoints");
                Read::Entry(p, q)
            }
        };
        let entries;
        let probe = match read {
            Read::Trace => Probe::Trace,
            Read::Entry(p, q) => {
                entries = [(p, q)];
                Probe::Entries(&entries)
            }
        };

        if self.is_exact {
            if let (Read::Trace, Some(chi)) = (read, visit.charpoly) {
                if power_traces(chi, k_hi, max_row_sum(visit.dense), &mut self.traces).is_some() {
                    for k in k_lo..=k_hi {
                        let v = self.traces[k - 1];
                        match self.binomials.coefficient(d, k as i64 - m as i64, m) {
                            Coefficient::Small(c) => self.exact[k - 1].add_product(c, v),
                            Coefficient::Big(c) => self.exact[k - 1].add_big(&(c * v)),
                        }
                    }
                    return;
                }
            }
            if let Some(values) = self.kernel.run(visit.dense, k_lo, k_hi, read) {
                for (t, k) in (k_lo..=k_hi).enumerate() {
                    match self
                        .binomials
                        .coefficient(d, (k + shift) as i64 - m as i64, m)
                    {
                        Coefficient::Small(c) => self.exact[k - 1].add_product(c, values[t]),
                        Coefficient::Big(c) => self.exact[k - 1].add_big(&(c * values[t])),
                    }
                }
                return;
            }
        }
        if self.is_exact {
            let a = to_integer_matrix(visit.dense);
            let values = exact_probe(&a, k_lo, k_hi, &probe);
            for (t, k) in (k_lo..=k_hi).enumerate() {
                let coeff = self
                    .binomials
                    .coefficient(d, (k + shift) as i64 - m as i64, m);
                coeff.accumulate(&mut self.exact[k - 1], &values, t, 0);
            }
        } else {
            let values =
                probe_powers(visit.dense, k_lo, k_hi, &probe).expect("float products never fail");
            for (t, k) in (k_lo..=k_hi).enumerate() {
                let b = binomial_f64(d as u64, (k + shift) as i64 - m as i64);
                if b != 0.0 {
                    self.approx[k - 1].add(b * sign(m) as f64 * values[t][0]);
                }
            }
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        for (a, b) in self.exact.iter_mut().zip(&other.exact) {
            a.merge(b);
        }
        for (a, b) in self.approx.iter_mut().zip(&other.approx) {
            a.merge(b);
        }
    }

    fn finish(self) -> Result<CountVector> {
        if self.is_exact {
            let mut out = Vec::with_capacity(self.ell);
            for (i, s) in self.exact.iter().enumerate() {
                let k = i + 1;
                let signed = match self.target {
                    Target::Path(..) => s.value() * sign(k + 1),
                    _ => s.value() * sign(k),
                };
                let value = match self.target {
                    Target::Cycles => divide_exact(&signed, k).ok_or_else(|| {
                        Error::Consistency(format!(
                            "cycle accumulator {signed} for length {k} is not divisible by {k}"
                        ))
                    })?,
                    _ => signed,
                };
                out.push(value);
            }
            Ok(CountVector::Exact(out))
        } else {
            let mut values = Vec::with_capacity(self.ell);
            let mut condition = Vec::with_capacity(self.ell);
            for (i, s) in self.approx.iter().enumerate() {
                let k = i + 1;
                let v = match self.target {
                    Target::Cycles => s.value() * sign(k) as f64 / k as f64,
                    Target::Rooted(_) => s.value() * sign(k) as f64,
                    Target::Path(..) => s.value() * sign(k + 1) as f64,
                };
                values.push(v);
                condition.push(s.condition());
            }
            Ok(CountVector::Approximate { values, condition })
        }
    }
}

/// `C(d, r)` for `r <= ell + 1`, each row filled on first use of `d`.
#[derive(Debug, Clone)]
struct BinomialCache {
    ell: usize,
    rows: Vec<Vec<Option<i128>>>,
}

impl BinomialCache {
    fn coefficient(&mut self, d: usize, r: i64, m: usize) -> Coefficient {
        if r < 0 || r as usize > d {
            return Coefficient::Small(0);
        }
        if self.rows.len() <= d {
            self.rows.resize(d + 1, Vec::new());
        }
        let row = &mut self.rows[d];
        if row.is_empty() {
            row.extend((0..=self.ell as i64 + 1).map(|r| binomial_i128(d as u64, r)));
        }
        match row.get(r as usize).copied().flatten() {
            Some(b) => Coefficient::Small(b * sign(m)),
            None => Coefficient::new(d, r, m),
        }
    }
}

/// `C(d, r) * (-1)^m`, small when it fits.
enum Coefficient {
    Small(i128),
    Big(BigInt),
}

impl Coefficient {
    fn new(d: usize, r: i64, m: usize) -> Self {
        match binomial_i128(d as u64, r) {
            Some(b) => Coefficient::Small(b * sign(m)),
            None => Coefficient::Big(binomial(d as u64, r) * sign(m)),
        }
    }

    fn accumulate(&self, acc: &mut ExactSum, values: &ProbeValues, t: usize, p: usize) {
        match (self, values) {
            (Coefficient::Small(0), _) => {}
            (Coefficient::Small(c), ProbeValues::Small(v)) => acc.add_product(*c, v[t][p]),
            (Coefficient::Small(c), ProbeValues::Big(v)) => acc.add_big(&(&v[t][p] * *c)),
            (Coefficient::Big(c), ProbeValues::Small(v)) => acc.add_big(&(c * v[t][p])),
            (Coefficient::Big(c), ProbeValues::Big(v)) => acc.add_big(&(c * &v[t][p])),
        }
    }
}

fn binomial_f64(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return 0.0;
    }
    let k = (k as u64).min(n - k as u64);
    (0..k).fold(1.0, |acc, r| acc * (n - r) as f64 / (r + 1) as f64)
}

pub(crate) fn to_integer_matrix(a: &DenseMatrix<f64>) -> DenseMatrix<i64> {
    a.map(|&w| w as i64)
}

/// Which matrix entries to read at each power.
pub(crate) enum Probe<'a> {
    Trace,
    Entries(&'a [(usize, usize)]),
}

impl Probe<'_> {
    fn width(&self) -> usize {
        match self {
            Probe::Trace => 1,
            Probe::Entries(e) => e.len(),
        }
    }
}

/// Probe results per power `k_lo..=k_hi`, outer index `k - k_lo`.
pub(crate) enum ProbeValues {
    Small(Vec<Vec<i128>>),
    Big(Vec<Vec<BigInt>>),
}

/// Exact probes, escalating the scalar type on overflow.
pub(crate) fn exact_probe(
    a: &DenseMatrix<i64>,
    k_lo: usize,
    k_hi: usize,
    probe: &Probe<'_>,
) -> ProbeValues {
    if let Some(v) = probe_powers(a, k_lo, k_hi, probe) {
        return ProbeValues::Small(
            v.into_iter()
                .map(|row| row.into_iter().map(i128::from).collect())
                .collect(),
        );
    }
    if let Some(v) = probe_powers(&a.map(|&x| x as i128), k_lo, k_hi, probe) {
        return ProbeValues::Small(v);
    }
    let big = a.map(|&x| BigInt::from(x));
    ProbeValues::Big(probe_powers(&big, k_lo, k_hi, probe).expect("BigInt never overflows"))
}

/// Iterated products `B_{k+1} = B_k · A`, reading the probe for `k_lo <= k <= k_hi`.
/// Returns `None` if any intermediate overflows the scalar type.
pub(crate) fn probe_powers<T: Scalar>(
    a: &DenseMatrix<T>,
    k_lo: usize,
    k_hi: usize,
    probe: &Probe<'_>,
) -> Option<Vec<Vec<T>>> {
    let m = a.dim();
    let width = probe.width();
    let mut out = Vec::with_capacity(k_hi + 1 - k_lo.min(k_hi + 1));
    if k_lo > k_hi {
        return Some(out);
    }
    // nonzero pattern of A by row
    let sparse: Vec<Vec<(usize, T)>> = (0..m)
        .map(|l| {
            a.row(l)
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect()
        })
        .collect();

    let read = |b: &DenseMatrix<T>| -> Option<Vec<T>> {
        match probe {
            Probe::Trace => {
                let mut t = T::zero();
                let one = T::one();
                for i in 0..m {
                    t = T::checked_fma(&t, b.get(i, i), &one)?;
                }
                Some(vec![t])
            }
            Probe::Entries(e) => Some(e.iter().map(|&(i, j)| b.get(i, j).clone()).collect()),
        }
    };
    // entries of B·A for the last power without forming the product
    let read_product = |b: &DenseMatrix<T>| -> Option<Vec<T>> {
        let entry = |i: usize, j: usize| -> Option<T> {
            let mut s = T::zero();
            for l in 0..m {
                let x = b.get(i, l);
                let y = a.get(l, j);
                if !x.is_zero() && !y.is_zero() {
                    s = T::checked_fma(&s, x, y)?;
                }
            }
            Some(s)
        };
        match probe {
            Probe::Trace => {
                let mut t = T::zero();
                let one = T::one();
                for i in 0..m {
                    t = T::checked_fma(&t, &entry(i, i)?, &one)?;
                }
                Some(vec![t])
            }
            Probe::Entries(e) => e.iter().map(|&(i, j)| entry(i, j)).collect(),
        }
    };

    let mut b = a.clone();
    let mut next = DenseMatrix::from_rows(m, vec![T::zero(); m * m]);
    let mut nilpotent = false;
    for k in 1..=k_hi {
        if nilpotent {
            if k >= k_lo {
                out.push(vec![T::zero(); width]);
            }
            continue;
        }
        if k > 1 {
            if k == k_hi && (matches!(probe, Probe::Trace) || 2 * width <= m * m) {
                out.push(read_product(&b)?);
                break;
            }
            for x in 0..m * m {
                next.set(x / m, x % m, T::zero());
            }
            let mut any = false;
            for i in 0..m {
                for l in 0..m {
                    let bil = b.get(i, l);
                    if bil.is_zero() {
                        continue;
                    }
                    for (j, alj) in &sparse[l] {
                        let v = T::checked_fma(next.get(i, *j), bil, alj)?;
                        next.set(i, *j, v);
                        any = true;
                    }
                }
            }
            std::mem::swap(&mut b, &mut next);
            if !any || b.as_slice().iter().all(Zero::is_zero) {
                nilpotent = true;
                if k >= k_lo {
                    out.push(vec![T::zero(); width]);
                }
                continue;
            }
        }
        if k >= k_lo {
            out.push(read(&b)?);
        }
    }
    Some(out)
}
