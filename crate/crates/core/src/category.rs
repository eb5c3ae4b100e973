//! The category of quasi-skeleton graphs on a fixed label set.
//!
//! Objects are the quasi-skeleton graphs (Hasse diagrams) on the labels; there
//! is a morphism `G -> H` iff `R(H) ⊆ R(G)`, i.e. `H` only keeps
//! before-and-after constraints that `G` already has. Objects are stored in
//! canonical order (lexicographic on the flattened path matrix).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{cover_relation, Digraph};
use crate::labels::LabelTable;
use crate::matrix::BoolMatrix;

/// Largest label count accepted by [`enumerate`] (130,023 objects).
pub const MAX_ENUM_LABELS: usize = 6;

/// Number of labeled posets (OEIS A001035) for `m = 0..=6`.
pub const LABELED_POSET_COUNTS: [usize; 7] = [1, 1, 3, 19, 219, 4231, 130_023];

pub struct CategoryRJ {
    labels: Arc<LabelTable>,
    graphs: Vec<Digraph>,
    path_matrices: Vec<BoolMatrix>,
    index: HashMap<BoolMatrix, usize>,
    up_sets: Vec<OnceLock<FixedBitSet>>,
}

/// Enumerates every quasi-skeleton graph on `labels` exactly once.
pub fn enumerate(labels: Arc<LabelTable>) -> Result<CategoryRJ> {
    let m = labels.len();
    if m == 0 {
        return Err(Error::EmptyLabelSet);
    }
    if m > MAX_ENUM_LABELS {
        return Err(Error::TooManyLabels { got: m, max: MAX_ENUM_LABELS });
    }
    let mut orders: Vec<BoolMatrix> =
        strict_orders(m).into_iter().map(BoolMatrix::from_row_bits).collect();
    orders.par_sort_unstable();

    let graphs: Vec<Digraph> = orders
        .par_iter()
        .map(|closure| Digraph::new(labels.clone(), cover_relation(closure)).expect("dimensions match"))
        .collect();
    let index = orders.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let up_sets = (0..orders.len()).map(|_| OnceLock::new()).collect();
    Ok(CategoryRJ { labels, graphs, path_matrices: orders, index, up_sets })
}

/// All strict partial orders on `0..m`, as successor rows.
///
/// Orders on `0..k` are extended by a new element `k` placed above a down-set
/// `D` and below an up-set `U` with `D ∩ U = ∅` and every element of `D`
/// already below every element of `U`. Each labeled order arises from exactly
/// one sequence of such insertions.
fn strict_orders(m: usize) -> Vec<Vec<u64>> {
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for k in 0..m {
        level = level.par_iter().flat_map_iter(|rows| insert_element(rows, k)).collect();
    }
    level
}

fn insert_element(rows: &[u64], k: usize) -> Vec<Vec<u64>> {
    let mut preds = vec![0u64; k];
    for (i, &r) in rows.iter().enumerate() {
        let mut rest = r;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            preds[j] |= 1 << i;
        }
    }
    let subsets = 0u64..(1u64 << k);
    let mut downs = Vec::new();
    let mut ups = Vec::new();
    for s in subsets {
        if members(s).all(|x| preds[x] & !s == 0) {
            downs.push(s);
        }
        if members(s).all(|x| rows[x] & !s == 0) {
            ups.push(s);
        }
    }
    let mut out = Vec::new();
    for &d in &downs {
        let common_above = members(d).fold(u64::MAX, |acc, x| acc & rows[x]);
        for &u in &ups {
            if u & d != 0 || u & !common_above != 0 {
                continue;
            }
            let mut next = rows.to_vec();
            for x in members(d) {
                next[x] |= 1 << k;
            }
            next.push(u);
            out.push(next);
        }
    }
    out
}

fn members(mut s: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            return None;
        }
        let i = s.trailing_zeros() as usize;
        s &= s - 1;
        Some(i)
    })
}

/// `true` iff there is a morphism `from -> to`: `R(to) ⊆ R(from)`, tested as
/// "the path matrix of `from` minus that of `to` has no negative entry".
pub fn has_morphism(from: &Digraph, to: &Digraph) -> Result<bool> {
    if !from.same_labels(to) {
        return Err(Error::LabelMismatch);
    }
    Ok(to.path_matrix().is_subset_of(&from.path_matrix()))
}

impl CategoryRJ {
    pub fn labels(&self) -> &LabelTable {
        &self.labels
    }

    pub fn shared_labels(&self) -> &Arc<LabelTable> {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[Digraph] {
        &self.graphs
    }

    pub fn graph(&self, i: usize) -> &Digraph {
        &self.graphs[i]
    }

    pub fn path_matrices(&self) -> &[BoolMatrix] {
        &self.path_matrices
    }

    pub fn path_matrix(&self, i: usize) -> &BoolMatrix {
        &self.path_matrices[i]
    }

    /// Position of the object with the given path matrix.
    pub fn index_of(&self, path_matrix: &BoolMatrix) -> Option<usize> {
        self.index.get(path_matrix).copied()
    }

    /// Morphism between two stored objects.
    pub fn morphism(&self, from: usize, to: usize) -> bool {
        self.path_matrices[to].is_subset_of(&self.path_matrices[from])
    }

    /// Up-set of object `i` in the generalization order, cached on first use.
    pub fn generalization_set(&self, i: usize) -> &FixedBitSet {
        self.up_sets[i].get_or_init(|| {
            let own = &self.path_matrices[i];
            let mut set = FixedBitSet::with_capacity(self.len());
            for (h, p) in self.path_matrices.iter().enumerate() {
                if p.is_subset_of(own) {
                    set.insert(h);
                }
            }
            set
        })
    }

    /// Indices of every `H` with a morphism `g -> H`.
    pub fn generalizations(&self, g: &Digraph) -> Result<Vec<usize>> {
        if g.labels() != &*self.labels {
            return Err(Error::LabelMismatch);
        }
        let pm = g.path_matrix();
        Ok(match self.index_of(&pm) {
            Some(i) => self.generalization_set(i).ones().collect(),
            None => (0..self.len()).filter(|&h| self.path_matrices[h].is_subset_of(&pm)).collect(),
        })
    }
}

impl std::fmt::Debug for CategoryRJ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CategoryRJ").field("labels", &self.labels.as_slice()).field("objects", &self.len()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(m: usize) -> CategoryRJ {
        enumerate(Arc::new(LabelTable::letters(m))).unwrap()
    }

    #[test]
    fn counts_match_labeled_posets() {
        for m in 1..=5 {
            assert_eq!(cat(m).len(), LABELED_POSET_COUNTS[m], "m = {m}");
        }
    }

    #[test]
    fn cap_enforced() {
        let err = enumerate(Arc::new(LabelTable::letters(7))).unwrap_err();
        assert_eq!(err, Error::TooManyLabels { got: 7, max: 6 });
        assert_eq!(enumerate(Arc::new(LabelTable::letters(0))).unwrap_err(), Error::EmptyLabelSet);
    }

    #[test]
    fn two_labels_by_hand() {
        let c = cat(2);
        let arrows: Vec<Vec<(usize, usize)>> =
            c.graphs().iter().map(|g| g.arrows().collect()).collect();
        // canonical order: arrowless, B->A (row 2 set), A->B (row 1 set)
        assert_eq!(arrows, vec![vec![], vec![(1, 0)], vec![(0, 1)]]);
    }

    #[test]
    fn stored_objects_are_distinct_quasi_skeletons() {
        let c = cat(4);
        for (i, g) in c.graphs().iter().enumerate() {
            assert!(g.is_quasi_skeleton());
            assert_eq!(&g.path_matrix(), c.path_matrix(i));
            assert_eq!(c.index_of(c.path_matrix(i)), Some(i));
        }
        assert!(c.path_matrices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn morphism_examples() {
        let abc = Arc::new(LabelTable::letters(3));
        let chain = Digraph::from_arrows(abc.clone(), &[("A", "B"), ("B", "C")]).unwrap();
        let ac = Digraph::from_arrows(abc.clone(), &[("A", "C")]).unwrap();
        let none = Digraph::empty(abc.clone()).unwrap();
        let ab = Digraph::from_arrows(abc, &[("A", "B")]).unwrap();
        assert!(has_morphism(&chain, &ac).unwrap());
        assert!(has_morphism(&chain, &chain).unwrap());
        assert!(!has_morphism(&none, &ab).unwrap());
        let other = Digraph::empty(Arc::new(LabelTable::letters(2))).unwrap();
        assert_eq!(has_morphism(&chain, &other).unwrap_err(), Error::LabelMismatch);
    }

    #[test]
    fn generalization_examples() {
        let c = cat(2);
        let none = Digraph::empty(c.shared_labels().clone()).unwrap();
        assert_eq!(c.generalizations(&none).unwrap(), vec![0]);
        let ab = Digraph::from_arrows(c.shared_labels().clone(), &[("A", "B")]).unwrap();
        let expect: Vec<usize> =
            (0..c.len()).filter(|&h| has_morphism(&ab, c.graph(h)).unwrap()).collect();
        assert_eq!(c.generalizations(&ab).unwrap(), expect);
        assert_eq!(expect, vec![0, 2]);

        let c3 = cat(3);
        let chain = Digraph::from_arrows(c3.shared_labels().clone(), &[("A", "B"), ("B", "C")]).unwrap();
        let brute: Vec<usize> = (0..c3.len())
            .filter(|&h| c3.graph(h).reflexive_relation().is_subset_of(&chain.reflexive_relation()))
            .collect();
        let got = c3.generalizations(&chain).unwrap();
        assert_eq!(got, brute);
        // every sub-order of a 3-chain: ∅, three singletons, two 2-element ideals, the chain
        assert_eq!(got.len(), 7);
    }
}
