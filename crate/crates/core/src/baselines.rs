//! Comparison clusterers over Algorithm-1 matrices under the L¹ metric.

use num_rational::Ratio;
use serde::Serialize;

use crate::algorithms::{common_matrix, seq_to_matrix};
use crate::error::{Error, Result};
use crate::labels::LabelTable;
use crate::matrix::BoolMatrix;
use crate::sequence::TermSequence;

/// Number of cells where `a` and `b` differ.
pub fn l1_distance(a: &BoolMatrix, b: &BoolMatrix) -> Result<u32> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.rows().iter().zip(b.rows()).map(|(x, y)| (x ^ y).count_ones()).sum())
}

/// One matrix per input sequence; `source[k]` is the index of the sequence behind point `k`.
#[derive(Debug, Clone)]
pub struct MatrixPointSet {
    points: Vec<BoolMatrix>,
    source: Vec<usize>,
}

impl MatrixPointSet {
    pub fn new(points: Vec<BoolMatrix>) -> Result<Self> {
        if let Some(first) = points.first() {
            if let Some(bad) = points.iter().find(|p| p.dim() != first.dim()) {
                return Err(Error::DimensionMismatch(first.dim(), bad.dim()));
            }
        }
        let source = (0..points.len()).collect();
        Ok(MatrixPointSet { points, source })
    }

    pub fn from_sequences<S: TermSequence>(seqs: &[S], j: &LabelTable) -> Result<Self> {
        let points = seqs.iter().map(|s| seq_to_matrix(s, j)).collect::<Result<Vec<_>>>()?;
        MatrixPointSet::new(points)
    }

    /// Drops all-zero matrices, keeping back-references to the original sequences.
    pub fn without_zero(&self) -> MatrixPointSet {
        let (points, source) = self
            .points
            .iter()
            .zip(&self.source)
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, &s)| (p.clone(), s))
            .unzip();
        MatrixPointSet { points, source }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[BoolMatrix] {
        &self.points
    }

    pub fn source(&self, k: usize) -> usize {
        self.source[k]
    }

    fn distances(&self) -> Vec<u32> {
        let n = self.len();
        let mut d = vec![0; n * n];
        for a in 0..n {
            for b in a + 1..n {
                let v = l1_distance(&self.points[a], &self.points[b]).expect("dimensions checked");
                d[a * n + b] = v;
                d[b * n + a] = v;
            }
        }
        d
    }
}

/// A clustering: each inner list holds point indices in increasing order,
/// and clusters are ordered by their smallest member.
pub type Clusters = Vec<Vec<usize>>;

/// DBSCAN with a closed `eps`-ball. Points that are neither core nor
/// reachable from a core point are returned as singleton noise clusters.
pub fn dbscan(pts: &MatrixPointSet, eps: u32, min_samples: usize) -> Clusters {
    let n = pts.len();
    let d = pts.distances();
    let neighbours: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| d[a * n + b] <= eps).collect()).collect();
    let core: Vec<bool> = neighbours.iter().map(|nb| nb.len() >= min_samples.max(1)).collect();
    let mut assigned = vec![usize::MAX; n];
    let mut clusters: Clusters = Vec::new();
    for start in 0..n {
        if assigned[start] != usize::MAX || !core[start] {
            continue;
        }
        let id = clusters.len();
        let mut members = vec![start];
        assigned[start] = id;
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for &q in &neighbours[p] {
                if assigned[q] == usize::MAX {
                    assigned[q] = id;
                    members.push(q);
                    if core[q] {
                        stack.push(q);
                    }
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    for (p, _) in assigned.iter().enumerate().filter(|(_, &a)| a == usize::MAX) {
        clusters.push(vec![p]);
    }
    clusters.sort_by_key(|c| c[0]);
    clusters
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Merge {
    /// Cluster ids: leaves are `0..n`, the `k`-th merge creates id `n + k`.
    pub a: usize,
    pub b: usize,
    #[serde(serialize_with = "ratio_as_f64")]
    pub height: Ratio<u64>,
    pub size: usize,
}

fn ratio_as_f64<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(*r.numer() as f64 / *r.denom() as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dendrogram {
    pub leaves: usize,
    pub merges: Vec<Merge>,
}

/// Agglomerative clustering with average linkage. Ties go to the pair with
/// the smallest `(a, b)` ids.
pub fn hierarchical(pts: &MatrixPointSet) -> Dendrogram {
    let n = pts.len();
    let d = pts.distances();
    let total = 2 * n.max(1) - 1;
    // sums[a][b]: total cross distance between active clusters a and b.
    let mut sums = vec![vec![0u64; total]; total];
    for a in 0..n {
        for b in 0..n {
            sums[a][b] = d[a * n + b] as u64;
        }
    }
    let mut size = vec![1usize; total];
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let mut best: Option<(Ratio<u64>, usize, usize)> = None;
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let h = Ratio::new(sums[a][b], (size[a] * size[b]) as u64);
                if best.as_ref().is_none_or(|(bh, ..)| h < *bh) {
                    best = Some((h, a, b));
                }
            }
        }
        let (height, a, b) = best.expect("at least two active clusters");
        let id = n + k;
        size[id] = size[a] + size[b];
        active.retain(|&c| c != a && c != b);
        for &c in &active {
            let s = sums[a][c] + sums[b][c];
            sums[id][c] = s;
            sums[c][id] = s;
        }
        active.push(id);
        merges.push(Merge { a, b, height, size: size[id] });
    }
    Dendrogram { leaves: n, merges }
}

impl Dendrogram {
    pub fn max_height(&self) -> Option<Ratio<u64>> {
        self.merges.iter().map(|m| m.height).max()
    }

    /// Clusters obtained by applying every merge with height `<= threshold`.
    pub fn cut(&self, threshold: Ratio<u64>) -> Clusters {
        let n = self.leaves;
        let mut parent: Vec<usize> = (0..n + self.merges.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (k, m) in self.merges.iter().enumerate() {
            if m.height <= threshold {
                let id = n + k;
                let ra = find(&mut parent, m.a);
                let rb = find(&mut parent, m.b);
                parent[ra] = id;
                parent[rb] = id;
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for leaf in 0..n {
            let root = find(&mut parent, leaf);
            groups.entry(root).or_default().push(leaf);
        }
        let mut clusters: Clusters = groups.into_values().collect();
        clusters.sort_by_key(|c| c[0]);
        clusters
    }
}

/// Common matrix of the source sequences behind each cluster.
pub fn cluster_common_matrices<S: TermSequence>(
    clusters: &[Vec<usize>],
    pts: &MatrixPointSet,
    seqs: &[S],
    j: &LabelTable,
) -> Result<Vec<BoolMatrix>> {
    clusters
        .iter()
        .map(|c| {
            let members: Vec<&S> = c.iter().map(|&k| &seqs[pts.source(k)]).collect();
            common_matrix(&members, j)
        })
        .collect()
}
