//! Random graphs, timing drivers and the fits used to summarise them.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{divide_exact, is_nonnegative};
use crate::baselines::{johnson_capped, total_cycle_census};
use crate::enumerate::count_connected_induced;
use crate::error::{contract, Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::sieve::{count_cycles, CycleCounts};

/// Erdős–Rényi graph: every pair of distinct vertices (ordered when `directed`) is an edge
/// with probability `p`, independently. Deterministic in `seed`.
pub fn gen_er(n: usize, p: f64, seed: u64, directed: bool) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return contract(format!("edge probability {p} outside [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n, directed);
    for u in 0..n {
        let lo = if directed { 0 } else { u + 1 };
        for v in lo..n {
            if u != v && rng.gen_bool(p) {
                b.add_edge(u, v, 1.0);
            }
        }
    }
    Ok(b.build())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sieve,
    Johnson,
}

impl Algorithm {
    /// Counts cycles up to `ℓ`, returning the counts and the wall time of the call alone.
    pub fn timed_count(self, g: &Graph, ell: usize) -> Result<(CycleCounts, f64)> {
        let start = Instant::now();
        let counts = match self {
            Algorithm::Sieve => count_cycles(g, ell)?,
            Algorithm::Johnson => johnson_capped(g, ell, None)?,
        };
        Ok((counts, start.elapsed().as_secs_f64()))
    }
}

/// One timed measurement cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub ell: usize,
    /// `|S_ℓ|` split by subgraph size.
    pub subgraphs_per_size: Vec<u64>,
    /// Simple cycles of length at most `ℓ`, as a decimal string.
    pub cycles: String,
    pub repetitions: usize,
    pub mean_seconds: f64,
    pub median_seconds: f64,
    /// Time of a single run with the length bound set to each `k = 1..=ℓ`. Empty unless
    /// requested.
    pub seconds_per_k: Vec<f64>,
    pub counts_digest: String,
}

/// Times `algorithm` on `g` over `reps` runs and collects the graph statistics.
pub fn measure(
    g: &Graph,
    ell: usize,
    algorithm: Algorithm,
    reps: usize,
    per_k: bool,
) -> Result<BenchRecord> {
    if reps == 0 {
        return contract("at least one repetition is required");
    }
    let mut times = Vec::with_capacity(reps);
    let mut counts = None;
    for _ in 0..reps {
        let (c, t) = algorithm.timed_count(g, ell)?;
        times.push(t);
        counts = Some(c);
    }
    let counts = counts.expect("reps > 0");
    let seconds_per_k = if per_k {
        (1..=ell)
            .map(|k| algorithm.timed_count(g, k).map(|(_, t)| t))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let total: BigInt = counts
        .counts
        .exact()
        .map(|v| v.iter().sum())
        .unwrap_or_default();
    Ok(BenchRecord {
        algorithm,
        n: g.n_vertices(),
        m: g.n_edges(),
        max_degree: g.max_degree(),
        ell,
        subgraphs_per_size: count_connected_induced(g, ell),
        cycles: total.to_string(),
        repetitions: reps,
        mean_seconds: mean(&times),
        median_seconds: median(&times),
        seconds_per_k,
        counts_digest: digest(&counts.counts.to_strings()),
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// FNV-1a over the decimal counts, stable across platforms and releases.
pub fn digest(counts: &[String]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for s in counts {
        for b in s.bytes().chain(std::iter::once(b',')) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

/// Fitted model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: String,
    pub parameters: Vec<(String, f64)>,
    /// Euclidean norm of the residual vector.
    pub residual: f64,
    /// Set when the residual exceeds a tenth of the data norm.
    pub large_residual: bool,
}

impl FitResult {
    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }
}

/// Least-squares `y ≈ a·f(x) + b` for fixed basis values `f`. Returns `(a, b, rss)`. A
/// constant basis is rank deficient and gets `a = 0`.
fn linear_fit(f: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = f.len() as f64;
    let mf = f.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sff: f64 = f.iter().map(|x| (x - mf) * (x - mf)).sum();
    let sfy: f64 = f.iter().zip(y).map(|(x, y)| (x - mf) * (y - my)).sum();
    let scale = f.iter().map(|x| x * x).sum::<f64>();
    let a = if sff <= scale * 1e-24 { 0.0 } else { sfy / sff };
    let b = my - a * mf;
    let rss = f.iter().zip(y).map(|(x, y)| (y - a * x - b).powi(2)).sum();
    (a, b, rss)
}

fn data_norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Fits `p_critical(N) = a + b/N` to crossover points. Needs two distinct `N`.
pub fn fit_p_critical(points: &[(usize, f64)]) -> Option<FitResult> {
    let mut ns: Vec<usize> = points.iter().map(|p| p.0).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 2 {
        return None;
    }
    let x: Vec<f64> = points.iter().map(|&(n, _)| 1.0 / n as f64).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (b, a, rss) = linear_fit(&x, &y);
    let residual = rss.sqrt();
    Some(FitResult {
        model: "a + b/N".into(),
        parameters: vec![("a".into(), a), ("b".into(), b)],
        residual,
        large_residual: residual > 0.1 * data_norm(&y),
    })
}

/// Fits `τ_k ≈ a·Δ_eff^k + b`. Δ_eff is searched on a logarithmic grid over `[1, 10⁴]` and
/// refined by golden-section search; `a` and `b` are solved in closed form for each
/// candidate. Among equally good candidates the smallest Δ_eff wins.
pub fn fit_delta_eff(timings: &[(usize, f64)]) -> Result<FitResult> {
    if timings.len() < 4 {
        return contract("fitting Δ_eff needs at least 4 timing points");
    }
    let y: Vec<f64> = timings.iter().map(|t| t.1).collect();
    let rss = |d: f64| -> f64 {
        let f: Vec<f64> = timings.iter().map(|&(k, _)| d.powi(k as i32)).collect();
        linear_fit(&f, &y).2
    };

    const STEPS: usize = 4000;
    let grid: Vec<f64> = (0..=STEPS)
        .map(|i| 10f64.powf(4.0 * i as f64 / STEPS as f64))
        .collect();
    let values: Vec<f64> = grid.iter().map(|&d| rss(d)).collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tolerance = best * 1e-9 + 1e-30 * data_norm(&y).powi(2);
    let i = values
        .iter()
        .position(|&v| v <= best + tolerance)
        .unwrap_or(0);

    let (mut lo, mut hi) = (grid[i.saturating_sub(1)], grid[(i + 1).min(STEPS)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut fc, mut fd) = (rss(c), rss(d));
    for _ in 0..200 {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = rss(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = rss(d);
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let mut delta = (lo + hi) / 2.0;
    if rss(grid[i]) <= rss(delta) {
        delta = grid[i];
    }
    let f: Vec<f64> = timings.iter().map(|&(k, _)| delta.powi(k as i32)).collect();
    let (a, b, r) = linear_fit(&f, &y);
    let residual = r.sqrt();
    Ok(FitResult {
        model: "a * delta_eff^k + b".into(),
        parameters: vec![
            ("a".into(), a),
            ("delta_eff".into(), delta),
            ("b".into(), b),
        ],
        residual,
        large_residual: residual > 0.1 * data_norm(&y),
    })
}

/// Length bound used by the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EllPolicy {
    /// `ℓ = N`: every simple cycle.
    All,
    Fixed(usize),
}

impl EllPolicy {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            EllPolicy::All => n.max(1),
            EllPolicy::Fixed(k) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub p_step: f64,
    pub reps: usize,
    pub ell: EllPolicy,
    pub seed: u64,
    /// The crossover is the first `p` that starts a run of this many consecutive sieve wins.
    pub consecutive_wins: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_list: vec![10, 14, 18],
            p_step: 0.01,
            reps: 20,
            ell: EllPolicy::All,
            seed: 0,
            consecutive_wins: 3,
        }
    }
}

/// Mean and median times of both algorithms at one `(N, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub n: usize,
    pub p: f64,
    pub sieve_mean: f64,
    pub sieve_median: f64,
    pub johnson_mean: f64,
    pub johnson_median: f64,
}

impl SweepCell {
    pub fn sieve_wins(&self) -> bool {
        self.sieve_mean < self.johnson_mean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub n: usize,
    /// `None` when the sieve never won long enough.
    pub p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub crossovers: Vec<Crossover>,
    /// Absent with fewer than two conclusive sizes.
    pub fit: Option<FitResult>,
    pub cells: Vec<SweepCell>,
}

/// Seed of the graph for one sweep cell, so cells are independent of scan order.
fn cell_seed(base: u64, n: usize, step: usize, rep: usize) -> u64 {
    let mut h = base ^ 0x9e37_79b9_7f4a_7c15;
    for x in [n as u64, step as u64, rep as u64] {
        h = (h ^ x).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    h
}

/// Scans `p` upward at each `N` until the sieve beats the Johnson enumerator on mean time
/// (each repetition on a fresh random graph, both algorithms on the same graph), then fits
/// `a + b/N` to the crossovers.
pub fn sweep_p_critical(config: &SweepConfig) -> Result<SweepReport> {
    sweep_p_critical_with(config, |_| {})
}

/// As [`sweep_p_critical`], reporting each finished cell to `progress`.
pub fn sweep_p_critical_with(
    config: &SweepConfig,
    mut progress: impl FnMut(&SweepCell),
) -> Result<SweepReport> {
    if !(config.p_step > 0.0 && config.p_step <= 1.0) {
        return contract("p step must lie in (0, 1]");
    }
    if config.reps == 0 || config.consecutive_wins == 0 {
        return contract("reps and consecutive wins must be positive");
    }
    let steps = (1.0 / config.p_step).round() as usize;
    let mut cells = Vec::new();
    let mut crossovers = Vec::new();
    for &n in &config.n_list {
        let ell = config.ell.resolve(n);
        let mut streak_start = None;
        let mut streak = 0;
        let mut found = None;
        for step in 1..=steps {
            let p = (step as f64 * config.p_step).min(1.0);
            let mut sieve = Vec::with_capacity(config.reps);
            let mut johnson = Vec::with_capacity(config.reps);
            for rep in 0..config.reps {
                let g = gen_er(n, p, cell_seed(config.seed, n, step, rep), false)?;
                let (a, ts) = Algorithm::Sieve.timed_count(&g, ell)?;
                let (b, tj) = Algorithm::Johnson.timed_count(&g, ell)?;
                if a.counts != b.counts {
                    return Err(Error::Consistency(format!(
                        "sieve and enumerator disagree on ER({n}, {p}) rep {rep}"
                    )));
                }
                sieve.push(ts);
                johnson.push(tj);
            }
            let cell = SweepCell {
                n,
                p,
                sieve_mean: mean(&sieve),
                sieve_median: median(&sieve),
                johnson_mean: mean(&johnson),
                johnson_median: median(&johnson),
            };
            progress(&cell);
            if cell.sieve_wins() {
                if streak == 0 {
                    streak_start = Some(p);
                }
                streak += 1;
            } else {
                streak = 0;
            }
            cells.push(cell);
            if streak >= config.consecutive_wins {
                found = streak_start;
                break;
            }
        }
        crossovers.push(Crossover { n, p: found });
    }
    let points: Vec<(usize, f64)> = crossovers
        .iter()
        .filter_map(|c| c.p.map(|p| (c.n, p)))
        .collect();
    Ok(SweepReport {
        fit: fit_p_critical(&points),
        crossovers,
        cells,
    })
}

/// Positive and negative cycle counts of a ±1-weighted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSplit {
    pub ell: usize,
    pub positive: Vec<BigInt>,
    pub negative: Vec<BigInt>,
    pub total: Vec<BigInt>,
}

/// Splits cycle counts by sign from one run on the signed graph (`p - n`) and one on its
/// unsigned version (`p + n`).
pub fn signed_split(g: &Graph, ell: usize) -> Result<SignedSplit> {
    if g.edges()
        .iter()
        .any(|e| e.weight != 1.0 && e.weight != -1.0)
    {
        return contract("signed split needs all weights in {+1, -1}");
    }
    let diff = count_cycles(g, ell)?;
    let sum = count_cycles(&g.unsigned_version(), ell)?;
    let diff = diff.counts.exact().expect("±1 weights are exact").to_vec();
    let total = sum.counts.exact().expect("±1 weights are exact").to_vec();
    let mut positive = Vec::with_capacity(ell);
    let mut negative = Vec::with_capacity(ell);
    for (k, (s, d)) in total.iter().zip(&diff).enumerate() {
        let (Some(p), Some(n)) = (divide_exact(&(s + d), 2), divide_exact(&(s - d), 2)) else {
            return Err(Error::Consistency(format!(
                "length {}: total {s} and difference {d} differ in parity",
                k + 1
            )));
        };
        if !is_nonnegative(&p) || !is_nonnegative(&n) {
            return Err(Error::Consistency(format!(
                "length {}: negative split p = {p}, n = {n}",
                k + 1
            )));
        }
        positive.push(p);
        negative.push(n);
    }
    Ok(SignedSplit {
        ell,
        positive,
        negative,
        total,
    })
}

/// One graph of a pruning sequence.
#[derive(Debug, Clone)]
pub struct PrunedInstance {
    /// Edges of multiplicity up to this value have been removed.
    pub threshold: u64,
    pub removed_since_previous: usize,
    pub graph: Graph,
}

/// Removes edges of multiplicity 1, 2, … in turn, emitting a new instance whenever at least
/// `min_removed` edges went since the previous one. The unpruned graph is the first
/// instance; an edgeless graph is never emitted.
pub fn prune_by_multiplicity(g: &Graph, min_removed: usize) -> Vec<PrunedInstance> {
    let mut out = vec![PrunedInstance {
        threshold: 0,
        removed_since_previous: 0,
        graph: g.clone(),
    }];
    let mut thresholds: Vec<u64> = g.edges().iter().map(|e| e.multiplicity).collect();
    thresholds.sort_unstable();
    thresholds.dedup();
    let mut last_edges = g.n_edges();
    for t in thresholds {
        let kept: Vec<_> = g.edges().iter().filter(|e| e.multiplicity > t).collect();
        if kept.is_empty() {
            break;
        }
        if last_edges - kept.len() < min_removed.max(1) {
            continue;
        }
        let mut b = GraphBuilder::new(g.n_vertices(), g.is_directed());
        for e in &kept {
            b.add_edge_with_multiplicity(e.source, e.target, e.weight, e.multiplicity);
        }
        let mut graph = b.build();
        if let Some(names) = g.names() {
            graph = graph.with_names(names.to_vec()).expect("same vertex count");
        }
        out.push(PrunedInstance {
            threshold: t,
            removed_since_previous: last_edges - kept.len(),
            graph,
        });
        last_edges = kept.len();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recommendation {
    Sieve,
    Enumeration,
}

/// Both sides of `(ℓ²/Δ + 1)·|S_ℓ| ≤ |Cycle_ℓ|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Advice {
    pub sieve_side: f64,
    pub enumeration_side: f64,
    pub recommendation: Recommendation,
}

/// Compares the sieve's cost proxy with the number of cycles an enumerator must emit.
/// `subgraphs` is `|S_ℓ|`, `cycles` is `|Cycle_ℓ|`, `max_degree` is Δ.
pub fn advise_algorithm(subgraphs: u64, cycles: &BigInt, max_degree: usize, ell: usize) -> Advice {
    let ell = ell as f64;
    let sieve_side = if max_degree == 0 {
        f64::INFINITY
    } else {
        (ell * ell / max_degree as f64 + 1.0) * subgraphs as f64
    };
    let enumeration_side = cycles.to_f64().unwrap_or(f64::INFINITY);
    let recommendation = if !cycles.is_zero() && sieve_side <= enumeration_side {
        Recommendation::Sieve
    } else {
        Recommendation::Enumeration
    };
    Advice {
        sieve_side,
        enumeration_side,
        recommendation,
    }
}

/// Measures `|S_ℓ|`, `|Cycle_ℓ|` and Δ on `g` and evaluates [`advise_algorithm`].
pub fn advise_for_graph(g: &Graph, ell: usize) -> Result<Advice> {
    let subgraphs: u64 = count_connected_induced(g, ell).iter().sum();
    let cycles = total_cycle_census(g, ell)?.total;
    Ok(advise_algorithm(
        subgraphs,
        &BigInt::from(cycles),
        g.max_degree(),
        ell,
    ))
}
