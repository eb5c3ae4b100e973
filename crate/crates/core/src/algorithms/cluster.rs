//! Hasse clustering.
//!
//! Each input sequence becomes a graph `G_i` through its path matrix. For a
//! threshold `t` and size bound `r`, candidates are sets of at most `r`
//! objects of the category whose generalization up-sets jointly cover at
//! least `t%` of the sequences. A candidate `C'` dominates `C''` when every
//! member of `C'` has a morphism into some member of `C''`; the output is the
//! set of candidates that no other candidate dominates.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::occurrence::seq_to_matrix;
use crate::category::{enumerate, CategoryRJ};
use crate::error::{Error, Result};
use crate::labels::LabelTable;
use crate::matrix::BoolMatrix;
use crate::sequence::TermSequence;

/// Coverage threshold in percent, held as an exact fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    pub fn percent(p: u32) -> Result<Self> {
        Self::ratio(p as u64, 1)
    }

    pub fn ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > 100 * den {
            return Err(Error::InvalidThreshold(format!("{num}/{den}")));
        }
        Ok(Threshold { num, den })
    }

    /// `covered / total >= t%`, compared in integers.
    pub fn is_met(&self, covered: u64, total: u64) -> bool {
        covered as u128 * 100 * self.den as u128 >= self.num as u128 * total as u128
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Threshold {
    type Err = Error;

    /// Parses a decimal such as `90`, `87.5` or `100.000`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidThreshold(s.to_string());
        let s = s.trim();
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || frac.len() > 9
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Threshold::ratio(num, den).map_err(|_| bad())
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_multiple_of(self.den) {
            write!(f, "{}", self.num / self.den)
        } else {
            write!(f, "{}", self.as_f64())
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterMode {
    /// Only coverage-minimal candidates (no proper subset meets the threshold).
    #[default]
    Minimal,
    /// Every subset meeting the threshold is a candidate.
    Literal,
}

impl FromStr for ClusterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(ClusterMode::Minimal),
            "literal" => Ok(ClusterMode::Literal),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for ClusterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClusterMode::Minimal => "minimal",
            ClusterMode::Literal => "literal",
        })
    }
}

#[derive(Debug, Clone)]
pub struct HasseParams {
    pub threshold: Threshold,
    pub max_size: usize,
    pub mode: ClusterMode,
    /// Upper bound on the number of candidates kept for the domination step.
    pub max_candidates: usize,
}

impl HasseParams {
    pub fn new(threshold: Threshold, max_size: usize) -> Self {
        HasseParams { threshold, max_size, mode: ClusterMode::Minimal, max_candidates: 5_000_000 }
    }

    pub fn with_mode(mut self, mode: ClusterMode) -> Self {
        self.mode = mode;
        self
    }
}

/// One output set `C_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    /// Positions in the category, canonical order.
    pub graph_indices: Vec<usize>,
    pub matrices: Vec<BoolMatrix>,
    /// Number of input sequences covered by the union of up-sets.
    pub covered: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterOutput {
    pub labels: Vec<String>,
    pub threshold: Threshold,
    pub max_size: usize,
    pub mode: ClusterMode,
    pub sequences: usize,
    pub distinct_graphs: usize,
    pub candidates: usize,
    pub clusters: Vec<Cluster>,
}

impl ClusterOutput {
    pub fn coverage(&self, cluster: &Cluster) -> f64 {
        cluster.covered as f64 / self.sequences as f64
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Enumerates the category for `j` and runs [`hasse_cluster_in`].
pub fn hasse_cluster<S: TermSequence + Sync>(
    seqs: &[S],
    j: &LabelTable,
    params: &HasseParams,
) -> Result<ClusterOutput> {
    let cat = enumerate(Arc::new(j.clone()))?;
    hasse_cluster_in(&cat, seqs, params)
}

pub fn hasse_cluster_in<S: TermSequence + Sync>(
    cat: &CategoryRJ,
    seqs: &[S],
    params: &HasseParams,
) -> Result<ClusterOutput> {
    if seqs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if params.max_size == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let j = cat.labels();
    let total = seqs.len() as u64;

    // Distinct G_i with multiplicities.
    let mut counts: BTreeMap<BoolMatrix, u64> = BTreeMap::new();
    for s in seqs {
        let m = seq_to_matrix(s, j)?;
        *counts.entry(m).or_default() += 1;
    }
    let distinct: Vec<(u64, u64)> = counts.iter().map(|(m, &c)| (m.pack(), c)).collect();
    let weights: Vec<u64> = distinct.iter().map(|&(_, c)| c).collect();

    let keys: Vec<u64> = cat.path_matrices().iter().map(BoolMatrix::pack).collect();
    let words = distinct.len().div_ceil(64);
    // a(H) as a bitset over distinct sequence graphs: G -> H iff R(H) ⊆ R(G).
    let cover: Vec<u64> = keys
        .par_iter()
        .flat_map_iter(|&h| {
            let mut row = vec![0u64; words];
            for (g, &(gk, _)) in distinct.iter().enumerate() {
                if h & !gk == 0 {
                    row[g / 64] |= 1 << (g % 64);
                }
            }
            row
        })
        .collect();

    let search = Search { cover: &cover, words, weights: &weights, total, params };
    let candidates = search.candidates(keys.len())?;
    let sources = sources(&candidates, &keys, params.max_size);

    let clusters = sources
        .into_iter()
        .map(|c| {
            let mut mask = vec![0u64; words];
            for &h in c {
                search.or_into(&mut mask, h as usize);
            }
            Cluster {
                graph_indices: c.iter().map(|&h| h as usize).collect(),
                matrices: c.iter().map(|&h| cat.path_matrix(h as usize).clone()).collect(),
                covered: search.weight(&mask) as usize,
            }
        })
        .collect();

    Ok(ClusterOutput {
        labels: j.as_slice().to_vec(),
        threshold: params.threshold,
        max_size: params.max_size,
        mode: params.mode,
        sequences: seqs.len(),
        distinct_graphs: distinct.len(),
        candidates: candidates.len(),
        clusters,
    })
}

struct Search<'a> {
    cover: &'a [u64],
    words: usize,
    weights: &'a [u64],
    total: u64,
    params: &'a HasseParams,
}

type Candidate = Vec<u32>;

impl Search<'_> {
    fn or_into(&self, mask: &mut [u64], h: usize) {
        let row = &self.cover[h * self.words..(h + 1) * self.words];
        for (m, r) in mask.iter_mut().zip(row) {
            *m |= r;
        }
    }

    fn weight(&self, mask: &[u64]) -> u64 {
        let mut sum = 0;
        for (w, &bits) in mask.iter().enumerate() {
            let mut rest = bits;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                sum += self.weights[w * 64 + b];
            }
        }
        sum
    }

    fn meets(&self, mask: &[u64]) -> bool {
        self.params.threshold.is_met(self.weight(mask), self.total)
    }

    /// Candidates ordered by size, then lexicographically.
    fn candidates(&self, n: usize) -> Result<Vec<Candidate>> {
        let mut all = Vec::new();
        for size in 1..=self.params.max_size.min(n) {
            let found: Vec<Candidate> = (0..n)
                .into_par_iter()
                .flat_map_iter(|first| {
                    let mut out = Vec::new();
                    let mut mask = vec![0u64; self.words];
                    self.or_into(&mut mask, first);
                    let mut chosen = vec![first as u32];
                    self.extend(&mut chosen, &mask, size, n, &mut out);
                    out
                })
                .collect();
            all.extend(found);
            if all.len() > self.params.max_candidates {
                return Err(Error::InvalidParameter(format!(
                    "more than {} candidate sets; raise the threshold or lower r",
                    self.params.max_candidates
                )));
            }
        }
        Ok(all)
    }

    fn extend(&self, chosen: &mut Vec<u32>, mask: &[u64], size: usize, n: usize, out: &mut Vec<Candidate>) {
        let minimal = self.params.mode == ClusterMode::Minimal;
        if chosen.len() == size {
            if self.meets(mask) && (!minimal || self.is_minimal(chosen)) {
                out.push(chosen.clone());
            }
            return;
        }
        // A prefix that already meets the threshold only has non-minimal extensions.
        if minimal && self.meets(mask) {
            return;
        }
        let last = *chosen.last().unwrap() as usize;
        let mut next = vec![0u64; self.words];
        for h in last + 1..n {
            next.copy_from_slice(mask);
            self.or_into(&mut next, h);
            chosen.push(h as u32);
            self.extend(chosen, &next, size, n, out);
            chosen.pop();
        }
    }

    fn is_minimal(&self, chosen: &[u32]) -> bool {
        if chosen.len() == 1 {
            return true;
        }
        (0..chosen.len()).all(|skip| {
            let mut mask = vec![0u64; self.words];
            for (i, &h) in chosen.iter().enumerate() {
                if i != skip {
                    self.or_into(&mut mask, h as usize);
                }
            }
            !self.meets(&mask)
        })
    }
}

/// Candidates with no incoming domination arrow from a different candidate.
fn sources<'a>(candidates: &'a [Candidate], keys: &[u64], max_size: usize) -> Vec<&'a Candidate> {
    let lookup: HashSet<&[u32]> = candidates.iter().map(Vec::as_slice).collect();
    // `g` lies below candidate `c` when some member `h` of `c` generalizes it.
    let below = |c: &[u32], g: u32| c.iter().any(|&h| keys[h as usize] & !keys[g as usize] == 0);

    let flags: Vec<bool> = candidates
        .par_iter()
        .map(|target| {
            let down: Vec<u32> = (0..keys.len() as u32).filter(|&g| below(target, g)).collect();
            let dominated = if subset_count(down.len(), max_size) < candidates.len() as u128 {
                let mut chosen = Vec::with_capacity(max_size);
                any_subset(&down, 0, max_size, &mut chosen, &mut |s| {
                    s != target.as_slice() && lookup.contains(s)
                })
            } else {
                candidates
                    .iter()
                    .any(|c| c != target && c.iter().all(|&g| below(target, g)))
            };
            !dominated
        })
        .collect();
    candidates.iter().zip(flags).filter_map(|(c, keep)| keep.then_some(c)).collect()
}

/// Number of nonempty subsets of size at most `k` of an `n`-set.
fn subset_count(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for i in 1..=k.min(n) {
        binom = binom * (n - i + 1) as u128 / i as u128;
        total = total.saturating_add(binom);
    }
    total
}

fn any_subset(
    pool: &[u32],
    start: usize,
    max_size: usize,
    chosen: &mut Vec<u32>,
    hit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    for i in start..pool.len() {
        chosen.push(pool[i]);
        let found = hit(chosen) || (chosen.len() < max_size && any_subset(pool, i + 1, max_size, chosen, hit));
        chosen.pop();
        if found {
            return true;
        }
    }
    false
}
