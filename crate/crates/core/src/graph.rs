//! Directed graphs over a label table, stored as packed adjacency matrices.
//!
//! A [`Digraph`] has at most one arrow per ordered pair of vertices, so
//! parallel arrows are unrepresentable. Quasi-skeleton graphs (DAGs where no
//! arrow shortcuts a longer path) are exactly the transitive reductions of
//! finite posets; the operations here convert between the two views.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::labels::LabelTable;
use crate::matrix::{BoolMatrix, MAX_DIM};

#[derive(Clone)]
pub struct Digraph {
    labels: Arc<LabelTable>,
    adj: BoolMatrix,
}

impl Digraph {
    pub fn new(labels: Arc<LabelTable>, adj: BoolMatrix) -> Result<Self> {
        if labels.len() > MAX_DIM {
            return Err(Error::TooManyLabels { got: labels.len(), max: MAX_DIM });
        }
        if adj.dim() != labels.len() {
            return Err(Error::DimensionMismatch(labels.len(), adj.dim()));
        }
        Ok(Digraph { labels, adj })
    }

    /// Arrowless graph on the given labels.
    pub fn empty(labels: Arc<LabelTable>) -> Result<Self> {
        let m = labels.len();
        if m > MAX_DIM {
            return Err(Error::TooManyLabels { got: m, max: MAX_DIM });
        }
        Ok(Digraph { labels, adj: BoolMatrix::zeros(m) })
    }

    pub fn from_arrows<S: AsRef<str>>(labels: Arc<LabelTable>, arrows: &[(S, S)]) -> Result<Self> {
        let mut g = Self::empty(labels)?;
        for (a, b) in arrows {
            let i = g.labels.require(a.as_ref())?;
            let j = g.labels.require(b.as_ref())?;
            g.adj.set(i, j, true);
        }
        Ok(g)
    }

    /// Path graph visiting the vertices in `order` (positions into `labels`).
    pub fn path(labels: Arc<LabelTable>, order: &[usize]) -> Result<Self> {
        let mut g = Self::empty(labels)?;
        for w in order.windows(2) {
            g.adj.set(w[0], w[1], true);
        }
        Ok(g)
    }

    pub fn labels(&self) -> &LabelTable {
        &self.labels
    }

    pub fn shared_labels(&self) -> &Arc<LabelTable> {
        &self.labels
    }

    pub fn adjacency(&self) -> &BoolMatrix {
        &self.adj
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.adj.count_ones() as usize
    }

    pub fn has_arrow(&self, from: usize, to: usize) -> bool {
        self.adj.get(from, to)
    }

    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.ones()
    }

    /// True when both graphs range over equal label tables.
    pub fn same_labels(&self, other: &Digraph) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || *self.labels == *other.labels
    }

    pub fn is_dag(&self) -> bool {
        !closure_rows(&self.adj).has_diagonal_entry()
    }

    /// Graph with an arrow `u -> v` iff `g` has a path of length >= 1 from `u` to `v`.
    pub fn transitive_closure(&self) -> Digraph {
        Digraph { labels: self.labels.clone(), adj: closure_rows(&self.adj) }
    }

    /// Cover relation of the strict order generated by `self`.
    pub fn transitive_reduction(&self) -> Result<Digraph> {
        let closure = closure_rows(&self.adj);
        if closure.has_diagonal_entry() {
            return Err(Error::CyclicInput);
        }
        Ok(Digraph { labels: self.labels.clone(), adj: cover_relation(&closure) })
    }

    pub fn is_quasi_skeleton(&self) -> bool {
        let closure = closure_rows(&self.adj);
        !closure.has_diagonal_entry() && cover_relation(&closure) == self.adj
    }

    /// Reachability matrix (paths of length >= 1).
    pub fn path_matrix(&self) -> BoolMatrix {
        closure_rows(&self.adj)
    }

    /// Reflexive-transitive closure `R(G)`: the path matrix with the diagonal set.
    pub fn reflexive_relation(&self) -> BoolMatrix {
        closure_rows(&self.adj).with_diagonal(true)
    }

    /// `G_U`: the transitive reduction of `R(G) ∩ (U × U)`, over the labels of
    /// `subset` in the order given.
    pub fn restrict<I, S>(&self, subset: I) -> Result<Digraph>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let table = self.labels.subset(subset)?;
        let closure = closure_rows(&self.adj);
        if closure.has_diagonal_entry() {
            return Err(Error::CyclicInput);
        }
        let old: Vec<usize> = table.iter().map(|l| self.labels.position(l).unwrap()).collect();
        let mut sub = BoolMatrix::zeros(old.len());
        for (a, &oa) in old.iter().enumerate() {
            for (b, &ob) in old.iter().enumerate() {
                if closure.get(oa, ob) {
                    sub.set(a, b, true);
                }
            }
        }
        Ok(Digraph { labels: Arc::new(table), adj: cover_relation(&sub) })
    }

    /// Graphviz DOT rendering: one node per label, one edge per arrow.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph {} {{", dot_id(name)).unwrap();
        for l in self.labels.iter() {
            writeln!(out, "    {};", dot_id(l)).unwrap();
        }
        for (i, j) in self.arrows() {
            writeln!(out, "    {} -> {};", dot_id(self.labels.label(i)), dot_id(self.labels.label(j)))
                .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Warshall's algorithm on packed rows.
pub(crate) fn closure_rows(adj: &BoolMatrix) -> BoolMatrix {
    let mut rows = adj.rows().to_vec();
    for k in 0..rows.len() {
        let bit = 1u64 << k;
        let rk = rows[k];
        for r in rows.iter_mut() {
            if *r & bit != 0 {
                *r |= rk;
            }
        }
    }
    BoolMatrix::from_row_bits(rows)
}

/// Covers of a transitive, irreflexive relation: `(u, v)` with no `w` strictly between.
pub(crate) fn cover_relation(closure: &BoolMatrix) -> BoolMatrix {
    let rows = closure.rows();
    let covers = rows
        .iter()
        .map(|&r| {
            let mut above_successors = 0u64;
            let mut rest = r;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                above_successors |= rows[w];
            }
            r & !above_successors
        })
        .collect();
    BoolMatrix::from_row_bits(covers)
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj && self.same_labels(other)
    }
}

impl Eq for Digraph {}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> = self
            .arrows()
            .map(|(i, j)| format!("{}->{}", self.labels.label(i), self.labels.label(j)))
            .collect();
        write!(f, "Digraph({:?}; {})", self.labels, arrows.join(", "))
    }
}
