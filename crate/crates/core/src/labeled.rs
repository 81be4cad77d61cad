//! Label sequences of simple cycles and paths on vertex-labelled graphs.
//!
//! The sieve is evaluated with matrix entries that are polynomials over words: a walk
//! contributes the sequence of vertex labels it reads, and products concatenate words.
//! After the signed accumulation over all connected induced subgraphs only the words of
//! simple cycles (or paths) survive. A simple cycle of length `k` is read once from each of
//! its `k` vertices, so cyclic words are folded onto their lexicographically smallest
//! rotation before the division by `k`. The two orientations of an undirected cycle are
//! kept apart, as in the unlabelled counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{binomial_i128, divide_exact, sign, ExactSum};
use crate::enumerate::{Enumerator, SubgraphVisit};
use crate::error::{contract, Error, Result};
use crate::graph::Graph;

/// Sequence of symbol ids.
pub type Word = Vec<u8>;

/// Formal sum of words with integer coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordPolynomial {
    terms: HashMap<Word, i128>,
}

impl WordPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(word: Word, coefficient: i128) -> Self {
        let mut p = Self::default();
        if coefficient != 0 {
            p.terms.insert(word, coefficient);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[u8]) -> i128 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &i128)> {
        self.terms.iter()
    }

    /// `self += factor * other`, each word extended by `suffix`.
    pub fn add_scaled_extended(
        &mut self,
        other: &WordPolynomial,
        factor: i128,
        suffix: &[u8],
    ) -> Result<()> {
        for (w, &c) in &other.terms {
            let mut word = Vec::with_capacity(w.len() + suffix.len());
            word.extend_from_slice(w);
            word.extend_from_slice(suffix);
            let add = c.checked_mul(factor).ok_or_else(overflow)?;
            self.add_term(word, add)?;
        }
        Ok(())
    }

    fn add_term(&mut self, word: Word, c: i128) -> Result<()> {
        use std::collections::hash_map::Entry;
        match self.terms.entry(word) {
            Entry::Occupied(mut e) => {
                let v = e.get().checked_add(c).ok_or_else(overflow)?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                if c != 0 {
                    e.insert(c);
                }
            }
        }
        Ok(())
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &WordPolynomial) -> Result<WordPolynomial> {
        let mut out = self.clone();
        out.add_scaled_extended(other, 1, &[])?;
        Ok(out)
    }

    /// Product: words concatenate, coefficients multiply.
    pub fn mul(&self, other: &WordPolynomial) -> Result<WordPolynomial> {
        let mut out = WordPolynomial::zero();
        for (w, &c) in &other.terms {
            let mut partial = WordPolynomial::zero();
            partial.add_scaled_extended(self, c, w)?;
            for (word, v) in partial.terms {
                out.add_term(word, v)?;
            }
        }
        Ok(out)
    }
}

fn overflow() -> Error {
    Error::Contract("word coefficient exceeds i128".into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// Up to rotation, stored as the smallest rotation.
    Cyclic,
    /// Read from the first endpoint to the second.
    Linear,
}

/// Label sequence counts per length.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSequenceCounts {
    pub kind: SequenceKind,
    pub ell: usize,
    /// `per_length[k - 1]` maps each sequence of length `k` (cycles) or `k + 1` (paths) to
    /// its count. Sequences with zero count are absent.
    pub per_length: Vec<BTreeMap<LabelSequence, BigInt>>,
}

impl LabelSequenceCounts {
    /// Total over all sequences of each length.
    pub fn marginals(&self) -> Vec<BigInt> {
        self.per_length
            .iter()
            .map(|m| m.values().fold(BigInt::zero(), |a, b| a + b))
            .collect()
    }

    pub fn get(&self, k: usize, sequence: &[&str]) -> BigInt {
        let key = LabelSequence(sequence.iter().map(|s| s.to_string()).collect());
        self.per_length
            .get(k - 1)
            .and_then(|m| m.get(&key))
            .cloned()
            .unwrap_or_default()
    }
}

/// A sequence of vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSequence(pub Vec<String>);

impl fmt::Display for LabelSequence {
    /// Single-character labels are concatenated (`CCO`), longer ones joined with `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|l| l.chars().count() == 1) {
            write!(f, "{}", self.0.concat())
        } else {
            write!(f, "{}", self.0.join("-"))
        }
    }
}

/// Dense symbol ids ordered like the label strings.
#[derive(Debug, Clone)]
pub struct Alphabet {
    symbols: Vec<String>,
    of_vertex: Vec<u8>,
}

impl Alphabet {
    pub fn of(g: &Graph) -> Result<Alphabet> {
        let Some(labels) = g.labels() else {
            return contract("graph has no vertex labels");
        };
        let mut symbols: Vec<String> = labels.to_vec();
        symbols.sort();
        symbols.dedup();
        if symbols.len() > 256 {
            return contract(format!(
                "alphabet of {} labels exceeds the supported 256",
                symbols.len()
            ));
        }
        let of_vertex = labels
            .iter()
            .map(|l| symbols.binary_search(l).expect("label is in alphabet") as u8)
            .collect();
        Ok(Alphabet { symbols, of_vertex })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, v: usize) -> u8 {
        self.of_vertex[v]
    }

    pub fn spell(&self, word: &[u8]) -> LabelSequence {
        LabelSequence(
            word.iter()
                .map(|&s| self.symbols[s as usize].clone())
                .collect(),
        )
    }
}

/// Lexicographically smallest rotation.
pub fn min_rotation(word: &[u8]) -> Word {
    let n = word.len();
    (0..n)
        .map(|r| {
            let mut w = Vec::with_capacity(n);
            w.extend_from_slice(&word[r..]);
            w.extend_from_slice(&word[..r]);
            w
        })
        .min()
        .unwrap_or_default()
}

/// Counts of simple cycles of length `1..=ℓ` per cyclic label sequence.
pub fn labeled_cycle_sequences(g: &Graph, ell: usize) -> Result<LabelSequenceCounts> {
    let (alphabet, mut sieve) = LabeledSieve::new(g, ell, None)?;
    let mut failure = None;
    Enumerator::new(g, ell).run(|visit| {
        if failure.is_none() {
            if let Err(e) = sieve.absorb(visit) {
                failure = Some(e);
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    sieve.finish(&alphabet)
}

/// Counts of simple paths from `from` to `to` of length `1..=ℓ` per label sequence (the
/// `k + 1` vertex labels of a length-`k` path).
pub fn labeled_path_sequences(
    g: &Graph,
    from: usize,
    to: usize,
    ell: usize,
) -> Result<LabelSequenceCounts> {
    if from >= g.n_vertices() || to >= g.n_vertices() {
        return contract("path endpoint out of range");
    }
    if from == to {
        return contract("path endpoints must differ");
    }
    let (alphabet, mut sieve) = LabeledSieve::new(g, ell, Some((from, to)))?;
    let mut failure = None;
    Enumerator::new(g, ell + 1)
        .with_filter(&[from, to])
        .run(|visit| {
            if failure.is_none() {
                if let Err(e) = sieve.absorb(visit) {
                    failure = Some(e);
                }
            }
        });
    if let Some(e) = failure {
        return Err(e);
    }
    sieve.finish(&alphabet)
}

struct LabeledSieve {
    ell: usize,
    endpoints: Option<(usize, usize)>,
    symbol: Vec<u8>,
    // per length: word -> signed accumulated coefficient
    sums: Vec<HashMap<Word, ExactSum>>,
}

impl LabeledSieve {
    fn new(g: &Graph, ell: usize, endpoints: Option<(usize, usize)>) -> Result<(Alphabet, Self)> {
        if ell == 0 {
            return contract("ℓ must be at least 1");
        }
        if !g.is_integral() {
            return contract("labelled counting needs integer weights");
        }
        let alphabet = Alphabet::of(g)?;
        let symbol = (0..g.n_vertices()).map(|v| alphabet.symbol(v)).collect();
        Ok((
            alphabet,
            LabeledSieve {
                ell,
                endpoints,
                symbol,
                sums: vec![HashMap::new(); ell],
            },
        ))
    }

    fn absorb(&mut self, visit: &SubgraphVisit<'_>) -> Result<()> {
        let m = visit.len();
        let d = visit.neighbor_count;
        let shift = usize::from(self.endpoints.is_some());
        let k_lo = (m - shift).max(1);
        let k_hi = self.ell.min(m + d - shift);
        if k_lo > k_hi {
            return Ok(());
        }
        let a = visit.dense;
        let labels: Vec<u8> = visit.vertices.iter().map(|&v| self.symbol[v]).collect();
        let nonzero: Vec<Vec<(usize, i128)>> = (0..m)
            .map(|l| {
                (0..m)
                    .filter(|&j| *a.get(l, j) != 0.0)
                    .map(|j| (j, *a.get(l, j) as i128))
                    .collect()
            })
            .collect();

        // (start row, column read at each power)
        let reads: Vec<(usize, usize)> = match self.endpoints {
            None => (0..m).map(|i| (i, i)).collect(),
            Some((i, j)) => vec![(
                visit.position(i).expect("filter guarantees endpoints"),
                visit.position(j).expect("filter guarantees endpoints"),
            )],
        };

        for (row, col) in reads {
            // row vector of W^k: walks from `row`, words are the labels before the last step
            let mut current: Vec<WordPolynomial> = vec![WordPolynomial::zero(); m];
            for &(j, w) in &nonzero[row] {
                current[j] = WordPolynomial::monomial(vec![labels[row]], w);
            }
            for k in 1..=k_hi {
                if k > 1 {
                    let mut next = vec![WordPolynomial::zero(); m];
                    for (l, poly) in current.iter().enumerate() {
                        if poly.is_zero() {
                            continue;
                        }
                        for &(j, w) in &nonzero[l] {
                            next[j].add_scaled_extended(poly, w, &[labels[l]])?;
                        }
                    }
                    current = next;
                }
                if k < k_lo {
                    continue;
                }
                let r = (k + shift) as i64 - m as i64;
                let coeff = binomial_i128(d as u64, r).ok_or_else(overflow)? * sign(m);
                if coeff == 0 {
                    continue;
                }
                let bucket = &mut self.sums[k - 1];
                for (word, &c) in current[col].terms() {
                    debug_assert_eq!(word.len(), k);
                    let key = match self.endpoints {
                        None => min_rotation(word),
                        Some(_) => {
                            let mut w = word.clone();
                            w.push(labels[col]);
                            w
                        }
                    };
                    bucket.entry(key).or_default().add_product(coeff, c);
                }
            }
        }
        Ok(())
    }

    fn finish(self, alphabet: &Alphabet) -> Result<LabelSequenceCounts> {
        let kind = if self.endpoints.is_some() {
            SequenceKind::Linear
        } else {
            SequenceKind::Cyclic
        };
        let mut per_length = Vec::with_capacity(self.ell);
        for (i, bucket) in self.sums.into_iter().enumerate() {
            let k = i + 1;
            let mut out = BTreeMap::new();
            for (word, acc) in bucket {
                let value = match kind {
                    SequenceKind::Cyclic => {
                        let signed = acc.value() * sign(k);
                        divide_exact(&signed, k).ok_or_else(|| {
                            Error::Consistency(format!(
                                "rotation class {:?} of length {k} has accumulator {signed}, \
                                 not divisible by {k}",
                                alphabet.spell(&word).to_string()
                            ))
                        })?
                    }
                    SequenceKind::Linear => acc.value() * sign(k + 1),
                };
                if !value.is_zero() {
                    out.insert(alphabet.spell(&word), value);
                }
            }
            per_length.push(out);
        }
        Ok(LabelSequenceCounts {
            kind,
            ell: self.ell,
            per_length,
        })
    }
}

/// Exhaustive labelled cycle enumeration, weighted by edge-weight products. Oracle for small
/// graphs.
pub fn brute_force_labeled_cycles(g: &Graph, ell: usize) -> Result<LabelSequenceCounts> {
    let alphabet = Alphabet::of(g)?;
    if !g.is_integral() {
        return contract("labelled counting needs integer weights");
    }
    let mut sums: Vec<HashMap<Word, BigInt>> = vec![HashMap::new(); ell];
    let n = g.n_vertices();
    let mut on_path = vec![false; n];
    for s in 0..n {
        if let Some(w) = g.weight(s, s) {
            *sums[0].entry(vec![alphabet.symbol(s)]).or_default() += w as i64;
        }
        let mut path = vec![s];
        on_path[s] = true;
        walk_cycles(
            g,
            &alphabet,
            ell,
            &mut path,
            BigInt::from(1),
            &mut on_path,
            &mut sums,
        );
        on_path[s] = false;
    }
    Ok(collect_oracle(sums, &alphabet, SequenceKind::Cyclic, ell))
}

fn walk_cycles(
    g: &Graph,
    alphabet: &Alphabet,
    ell: usize,
    path: &mut Vec<usize>,
    product: BigInt,
    on_path: &mut [bool],
    sums: &mut [HashMap<Word, BigInt>],
) {
    let s = path[0];
    let v = *path.last().unwrap();
    for &(w, weight) in g.out_neighbors(v) {
        if w == s && path.len() >= 2 {
            let word: Word = path.iter().map(|&x| alphabet.symbol(x)).collect();
            *sums[path.len() - 1].entry(min_rotation(&word)).or_default() +=
                &product * BigInt::from(weight as i64);
        } else if w > s && !on_path[w] && path.len() < ell {
            on_path[w] = true;
            path.push(w);
            let p = &product * BigInt::from(weight as i64);
            walk_cycles(g, alphabet, ell, path, p, on_path, sums);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Exhaustive labelled path enumeration from `from` to `to`.
pub fn brute_force_labeled_paths(
    g: &Graph,
    from: usize,
    to: usize,
    ell: usize,
) -> Result<LabelSequenceCounts> {
    let alphabet = Alphabet::of(g)?;
    if !g.is_integral() {
        return contract("labelled counting needs integer weights");
    }
    let mut sums: Vec<HashMap<Word, BigInt>> = vec![HashMap::new(); ell];
    let mut on_path = vec![false; g.n_vertices()];
    on_path[from] = true;
    let mut path = vec![from];
    walk_paths(
        g,
        &alphabet,
        to,
        ell,
        &mut path,
        BigInt::from(1),
        &mut on_path,
        &mut sums,
    );
    Ok(collect_oracle(sums, &alphabet, SequenceKind::Linear, ell))
}

#[allow(clippy::too_many_arguments)]
fn walk_paths(
    g: &Graph,
    alphabet: &Alphabet,
    to: usize,
    ell: usize,
    path: &mut Vec<usize>,
    product: BigInt,
    on_path: &mut [bool],
    sums: &mut [HashMap<Word, BigInt>],
) {
    let v = *path.last().unwrap();
    for &(w, weight) in g.out_neighbors(v) {
        if on_path[w] {
            continue;
        }
        let p = &product * BigInt::from(weight as i64);
        path.push(w);
        if w == to {
            let word: Word = path.iter().map(|&x| alphabet.symbol(x)).collect();
            *sums[path.len() - 2].entry(word).or_default() += p;
        } else if path.len() <= ell {
            on_path[w] = true;
            walk_paths(g, alphabet, to, ell, path, p, on_path, sums);
            on_path[w] = false;
        }
        path.pop();
    }
}

fn collect_oracle(
    sums: Vec<HashMap<Word, BigInt>>,
    alphabet: &Alphabet,
    kind: SequenceKind,
    ell: usize,
) -> LabelSequenceCounts {
    let per_length = sums
        .into_iter()
        .map(|bucket| {
            bucket
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| (alphabet.spell(&w), c))
                .collect()
        })
        .collect();
    LabelSequenceCounts {
        kind,
        ell,
        per_length,
    }
}
