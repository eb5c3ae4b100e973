#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use hasse_core::{BoolMatrix, Digraph, LabelTable};
use proptest::prelude::*;

pub fn letters(m: usize) -> Arc<LabelTable> {
    Arc::new(LabelTable::letters(m))
}

/// Reachability by breadth-first search from every vertex, as a set of pairs.
pub fn reach_pairs(g: &Digraph) -> BTreeSet<(usize, usize)> {
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    for s in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if g.has_arrow(u, v) && !seen[v] {
                    seen[v] = true;
                    out.insert((s, v));
                    stack.push(v);
                }
            }
        }
    }
    out
}

/// `R(G)`: reachability plus the diagonal.
pub fn reflexive_pairs(g: &Digraph) -> BTreeSet<(usize, usize)> {
    let mut r = reach_pairs(g);
    r.extend((0..g.vertex_count()).map(|v| (v, v)));
    r
}

pub fn digraph_from_pairs(labels: Arc<LabelTable>, pairs: &BTreeSet<(usize, usize)>) -> Digraph {
    let mut m = BoolMatrix::zeros(labels.len());
    for &(a, b) in pairs {
        if a != b {
            m.set(a, b, true);
        }
    }
    Digraph::new(labels, m).unwrap()
}

/// A random DAG on `m` vertices: arrows only go from earlier to later
/// positions of a random permutation.
pub fn dag(max_m: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_m)
        .prop_flat_map(|m| {
            (Just(m), Just((0..m).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), m * m))
        })
        .prop_map(|(m, perm, bits)| {
            let mut adj = BoolMatrix::zeros(m);
            for a in 0..m {
                for b in a + 1..m {
                    if bits[a * m + b] {
                        adj.set(perm[a], perm[b], true);
                    }
                }
            }
            Digraph::new(letters(m), adj).unwrap()
        })
}

/// All digraphs without self-loops on `m` vertices.
pub fn all_loopless(m: usize) -> impl Iterator<Item = Digraph> {
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let labels = letters(m);
    (0u64..1 << cells.len()).map(move |mask| {
        let mut adj = BoolMatrix::zeros(m);
        for (k, &(a, b)) in cells.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj.set(a, b, true);
            }
        }
        Digraph::new(labels.clone(), adj).unwrap()
    })
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k % 2 == 0 { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Linear extensions counted by filtering all permutations.
pub fn brute_linear_extensions(g: &Digraph) -> usize {
    let reach = reach_pairs(g);
    permutations(g.vertex_count())
        .into_iter()
        .filter(|p| {
            let mut rank = vec![0; p.len()];
            for (i, &v) in p.iter().enumerate() {
                rank[v] = i;
            }
            reach.iter().all(|&(a, b)| rank[a] < rank[b])
        })
        .count()
}
