//! Sequences of label subsets and of labels, and their relationship to graphs.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::labels::LabelTable;
use crate::matrix::BoolMatrix;

/// Anything that can be read as "label `l` occurs in term `k`".
///
/// Event sequences are read as sequences of singleton terms.
pub trait TermSequence {
    fn universe(&self) -> &LabelTable;
    fn term_count(&self) -> usize;
    /// Calls `f(term, label)` for every occurrence, terms in order.
    fn for_each_occurrence(&self, f: &mut dyn FnMut(usize, usize));
}

/// A finite sequence of subsets of a universe `X`. Terms are stored as sorted
/// label positions.
#[derive(Clone, PartialEq, Eq)]
pub struct SubsetSequence {
    universe: Arc<LabelTable>,
    terms: Vec<Vec<usize>>,
}

/// A finite sequence of labels from a universe `X`.
#[derive(Clone, PartialEq, Eq)]
pub struct EventSequence {
    universe: Arc<LabelTable>,
    events: Vec<usize>,
}

impl SubsetSequence {
    pub fn new<T, S>(universe: Arc<LabelTable>, terms: &[T]) -> Result<Self>
    where
        T: AsRef<[S]>,
        S: AsRef<str>,
    {
        let mut out = Vec::with_capacity(terms.len());
        for term in terms {
            let mut set = BTreeSet::new();
            for l in term.as_ref() {
                set.insert(universe.require(l.as_ref())?);
            }
            out.push(set.into_iter().collect());
        }
        Ok(SubsetSequence { universe, terms: out })
    }

    pub fn from_positions(universe: Arc<LabelTable>, terms: Vec<BTreeSet<usize>>) -> Self {
        assert!(terms.iter().flatten().all(|&p| p < universe.len()));
        SubsetSequence { universe, terms: terms.into_iter().map(|t| t.into_iter().collect()).collect() }
    }

    pub fn shared_universe(&self) -> &Arc<LabelTable> {
        &self.universe
    }

    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms are pairwise disjoint.
    pub fn is_simple(&self) -> bool {
        let mut seen = vec![false; self.universe.len()];
        for &p in self.terms.iter().flatten() {
            if std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        true
    }

    pub fn term_labels(&self) -> Vec<Vec<&str>> {
        self.terms
            .iter()
            .map(|t| t.iter().map(|&p| self.universe.label(p)).collect())
            .collect()
    }
}

impl EventSequence {
    pub fn new<S: AsRef<str>>(universe: Arc<LabelTable>, events: &[S]) -> Result<Self> {
        let events = events
            .iter()
            .map(|e| universe.require(e.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(EventSequence { universe, events })
    }

    pub fn from_positions(universe: Arc<LabelTable>, events: Vec<usize>) -> Self {
        assert!(events.iter().all(|&p| p < universe.len()));
        EventSequence { universe, events }
    }

    pub fn shared_universe(&self) -> &Arc<LabelTable> {
        &self.universe
    }

    pub fn events(&self) -> &[usize] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// All events are distinct.
    pub fn is_simple(&self) -> bool {
        let mut seen = vec![false; self.universe.len()];
        self.events.iter().all(|&p| !std::mem::replace(&mut seen[p], true))
    }

    pub fn labels(&self) -> Vec<&str> {
        self.events.iter().map(|&p| self.universe.label(p)).collect()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.events.contains(&label)
    }

    /// The sequence of singleton subsets.
    pub fn to_subsets(&self) -> SubsetSequence {
        SubsetSequence { universe: self.universe.clone(), terms: self.events.iter().map(|&e| vec![e]).collect() }
    }

    /// `m_I(s)`: drops every event not in `subset`.
    pub fn restrict<I, S>(&self, subset: I) -> Result<EventSequence>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let keep = membership(&self.universe, subset)?;
        Ok(EventSequence {
            universe: self.universe.clone(),
            events: self.events.iter().copied().filter(|&e| keep[e]).collect(),
        })
    }

    pub fn with_events(&self, events: Vec<usize>) -> EventSequence {
        EventSequence::from_positions(self.universe.clone(), events)
    }
}

impl<T: TermSequence + ?Sized> TermSequence for &T {
    fn universe(&self) -> &LabelTable {
        (**self).universe()
    }

    fn term_count(&self) -> usize {
        (**self).term_count()
    }

    fn for_each_occurrence(&self, f: &mut dyn FnMut(usize, usize)) {
        (**self).for_each_occurrence(f)
    }
}

impl TermSequence for SubsetSequence {
    fn universe(&self) -> &LabelTable {
        &self.universe
    }

    fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn for_each_occurrence(&self, f: &mut dyn FnMut(usize, usize)) {
        for (k, term) in self.terms.iter().enumerate() {
            for &l in term {
                f(k, l);
            }
        }
    }
}

impl TermSequence for EventSequence {
    fn universe(&self) -> &LabelTable {
        &self.universe
    }

    fn term_count(&self) -> usize {
        self.events.len()
    }

    fn for_each_occurrence(&self, f: &mut dyn FnMut(usize, usize)) {
        for (k, &l) in self.events.iter().enumerate() {
            f(k, l);
        }
    }
}

impl std::fmt::Debug for SubsetSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self.term_labels().iter().map(|t| format!("{{{}}}", t.join(","))).collect();
        write!(f, "SubsetSequence({})", terms.join(", "))
    }
}

impl std::fmt::Debug for EventSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EventSequence({})", self.labels().join(","))
    }
}

fn membership<I, S>(universe: &LabelTable, subset: I) -> Result<Vec<bool>>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut keep = vec![false; universe.len()];
    let mut any = false;
    for l in subset {
        keep[universe.require(l.as_ref())?] = true;
        any = true;
    }
    if !any {
        return Err(Error::EmptyRestriction);
    }
    Ok(keep)
}

/// `m_I(S)`: intersects every term with `subset` and drops the emptied terms.
pub fn restrict_sequence<I, S>(seq: &SubsetSequence, subset: I) -> Result<SubsetSequence>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let keep = membership(&seq.universe, subset)?;
    let terms = seq
        .terms
        .iter()
        .map(|t| t.iter().copied().filter(|&p| keep[p]).collect::<Vec<_>>())
        .filter(|t| !t.is_empty())
        .collect();
    Ok(SubsetSequence { universe: seq.universe.clone(), terms })
}

/// Layered graph of a simple sequence of nonempty subsets: every element of a
/// term points to every element of the next term. Vertices are the labels that
/// occur, in universe order.
pub fn stg(seq: &SubsetSequence) -> Result<Digraph> {
    if seq.terms.iter().any(Vec::is_empty) {
        return Err(Error::EmptyTerm);
    }
    if !seq.is_simple() {
        return Err(Error::NotSimple);
    }
    let mut present: Vec<usize> = seq.terms.iter().flatten().copied().collect();
    present.sort_unstable();
    let table = Arc::new(LabelTable::new(present.iter().map(|&p| seq.universe.label(p)))?);
    let local = |p: usize| present.binary_search(&p).unwrap();
    let mut adj = BoolMatrix::zeros(present.len());
    for pair in seq.terms.windows(2) {
        for &a in &pair[0] {
            for &b in &pair[1] {
                adj.set(local(a), local(b), true);
            }
        }
    }
    Digraph::new(table, adj)
}

/// Inverse of [`stg`] on layered graphs: in-degree-zero layers are peeled off
/// and the result is checked to be complete bipartite between consecutive
/// layers with no other arrows.
pub fn gts(g: &Digraph) -> Result<SubsetSequence> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut layer_of = vec![usize::MAX; n];
    let mut remaining: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut layers: Vec<Vec<usize>> = Vec::new();
    while remaining != 0 {
        let layer: Vec<usize> = (0..n)
            .filter(|&v| remaining >> v & 1 == 1)
            .filter(|&v| (0..n).all(|u| remaining >> u & 1 == 0 || !adj.get(u, v)))
            .collect();
        if layer.is_empty() {
            return Err(Error::NotLayered);
        }
        for &v in &layer {
            layer_of[v] = layers.len();
            remaining &= !(1u64 << v);
        }
        layers.push(layer);
    }
    let complete: usize = layers.windows(2).map(|w| w[0].len() * w[1].len()).sum();
    let consecutive = g.arrows().all(|(a, b)| layer_of[b] == layer_of[a] + 1);
    if !consecutive || g.arrow_count() != complete {
        return Err(Error::NotLayered);
    }
    Ok(SubsetSequence { universe: g.shared_labels().clone(), terms: layers })
}

/// Every occurrence of `x` precedes every occurrence of `y` whenever the
/// graph has a path from `x` to `y` and both occur in the sequence.
pub fn is_consistent(seq: &dyn TermSequence, w: &Digraph) -> Result<bool> {
    let universe = seq.universe();
    let mut span: Vec<Option<(usize, usize)>> = vec![None; universe.len()];
    seq.for_each_occurrence(&mut |k, l| {
        span[l] = Some(match span[l] {
            None => (k, k),
            Some((lo, hi)) => (lo.min(k), hi.max(k)),
        });
    });
    let positions = w
        .labels()
        .iter()
        .map(|l| universe.position(l).ok_or_else(|| Error::LabelNotInUniverse(l.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let reach = w.path_matrix();
    let consistent = reach.ones().all(|(u, v)| match (span[positions[u]], span[positions[v]]) {
        (Some((_, last_u)), Some((first_v, _))) => last_u < first_v,
        _ => true,
    });
    Ok(consistent)
}

/// All linear extensions of the order generated by `g`, as vertex orders,
/// produced by backtracking over currently minimal vertices.
pub fn linear_extensions(g: &Digraph) -> Result<Vec<Vec<usize>>> {
    if !g.is_dag() {
        return Err(Error::CyclicInput);
    }
    let n = g.vertex_count();
    let mut preds = vec![0u64; n];
    for (a, b) in g.arrows() {
        preds[b] |= 1 << a;
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    extend(&preds, 0, &mut prefix, &mut out);
    Ok(out)
}

fn extend(preds: &[u64], placed: u64, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == preds.len() {
        out.push(prefix.clone());
        return;
    }
    for v in 0..preds.len() {
        if placed >> v & 1 == 0 && preds[v] & !placed == 0 {
            prefix.push(v);
            extend(preds, placed | 1 << v, prefix, out);
            prefix.pop();
        }
    }
}

/// Path graphs on the vertices of `g` that admit a morphism into `g`.
pub fn flattenings(g: &Digraph) -> Result<Vec<Digraph>> {
    linear_extensions(g)?
        .iter()
        .map(|order| Digraph::path(g.shared_labels().clone(), order))
        .collect()
}

/// `R(small) ⊆ R(big)`, comparing vertices by label. This is the morphism
/// `big -> small` in the category of all quasi-skeleton graphs, where the two
/// vertex sets may differ.
pub(crate) fn relation_included(small: &Digraph, big: &Digraph) -> bool {
    let map: Option<Vec<usize>> = small.labels().iter().map(|l| big.labels().position(l)).collect();
    let Some(map) = map else { return false };
    let big_rel = big.reflexive_relation();
    small.reflexive_relation().ones().all(|(i, j)| big_rel.get(map[i], map[j]))
}

/// The five characterizations of "`s` is consistent with `w`" for a simple
/// sequence and a quasi-skeleton graph, in order:
///
/// 1. direct pairwise check;
/// 2. `R(w) ∩ (Ũ×Ũ) ⊆ R(stg(m_Ṽ(s)))`;
/// 3. morphism `(stg s)_Ũ -> w_Ũ`;
/// 4. morphism `stg s -> w_Ũ`;
/// 5. morphism `stg s -> Z` for some flattening `Z` of `w_Ũ`,
///
/// where `Ṽ` are the labels of `w` and `Ũ` those of them occurring in `s`.
pub fn consistency_characterizations(s: &EventSequence, w: &Digraph) -> Result<[bool; 5]> {
    if !s.is_simple() {
        return Err(Error::NotSimple);
    }
    if !w.is_quasi_skeleton() {
        return Err(Error::NotQuasiSkeleton);
    }
    let direct = is_consistent(s, w)?;

    let w_labels: Vec<&str> = w.labels().iter().collect();
    let in_s: Vec<&str> =
        w_labels.iter().copied().filter(|l| s.contains(s.universe.position(l).unwrap())).collect();

    let s_graph = stg(&s.to_subsets())?;
    let w_u = w.restrict(&in_s)?;

    let restricted = if w_labels.is_empty() {
        EventSequence { universe: s.universe.clone(), events: Vec::new() }
    } else {
        s.restrict(&w_labels)?
    };
    let restricted_graph = stg(&restricted.to_subsets())?;
    let relation = relation_included(&w_u, &restricted_graph);

    let s_u = s_graph.restrict(&in_s)?;
    let restricted_morphism = relation_included(&w_u, &s_u);

    let morphism_to_restriction = relation_included(&w_u, &s_graph);

    let flattening = flattenings(&w_u)?.iter().any(|z| relation_included(z, &s_graph));

    Ok([direct, relation, restricted_morphism, morphism_to_restriction, flattening])
}

/// `true` iff all five characterizations of consistency agree.
pub fn check_consistency_equivalences(s: &EventSequence, w: &Digraph) -> Result<bool> {
    let c = consistency_characterizations(s, w)?;
    Ok(c.iter().all(|&b| b == c[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(n: usize) -> Arc<LabelTable> {
        Arc::new(LabelTable::letters(n))
    }

    #[test]
    fn restriction_examples() {
        let x = letters(8);
        let s = SubsetSequence::new(x.clone(), &[vec!["C"], vec!["A", "G", "H"], vec!["G"], vec!["B", "D", "H"]])
            .unwrap();
        let r = restrict_sequence(&s, ["A", "B", "C", "D"]).unwrap();
        assert_eq!(r.term_labels(), vec![vec!["C"], vec!["A"], vec!["B", "D"]]);

        let e = EventSequence::new(x.clone(), &["G", "B", "C", "E", "A"]).unwrap();
        assert_eq!(e.restrict(["A", "B", "C", "D"]).unwrap().labels(), ["B", "C", "A"]);

        let all: Vec<&str> = x.iter().collect();
        assert_eq!(restrict_sequence(&s, &all).unwrap(), s);
        assert_eq!(restrict_sequence(&s, Vec::<&str>::new()).unwrap_err(), Error::EmptyRestriction);
    }

    #[test]
    fn stg_examples() {
        let x = letters(6);
        let s = SubsetSequence::new(x.clone(), &[vec!["A"], vec!["B", "C"], vec!["D", "E"], vec!["F"]]).unwrap();
        let g = stg(&s).unwrap();
        let expect = Digraph::from_arrows(
            g.shared_labels().clone(),
            &[
                ("A", "B"), ("A", "C"), ("B", "D"), ("B", "E"),
                ("C", "D"), ("C", "E"), ("D", "F"), ("E", "F"),
            ],
        )
        .unwrap();
        assert_eq!(g, expect);
        assert!(g.is_quasi_skeleton());

        let single = stg(&SubsetSequence::new(x.clone(), &[vec!["A", "B"]]).unwrap()).unwrap();
        assert_eq!(single.vertex_count(), 2);
        assert_eq!(single.arrow_count(), 0);

        let path = stg(&EventSequence::new(x.clone(), &["C", "A", "B"]).unwrap().to_subsets()).unwrap();
        assert_eq!(path.arrow_count(), 2);
        assert!(path.has_arrow(2, 0) && path.has_arrow(0, 1));

        let bad = SubsetSequence::new(x.clone(), &[vec!["A"], vec!["A"]]).unwrap();
        assert_eq!(stg(&bad).unwrap_err(), Error::NotSimple);
        let empty = SubsetSequence::new(x, &[vec!["A"], vec![]]).unwrap();
        assert_eq!(stg(&empty).unwrap_err(), Error::EmptyTerm);
    }

    #[test]
    fn gts_examples() {
        let abc = letters(3);
        let path = Digraph::from_arrows(abc, &[("A", "B"), ("B", "C")]).unwrap();
        assert_eq!(gts(&path).unwrap().term_labels(), vec![vec!["A"], vec!["B"], vec!["C"]]);

        let x = letters(6);
        let s = SubsetSequence::new(x, &[vec!["A"], vec!["B", "C"], vec!["D", "E"], vec!["F"]]).unwrap();
        let back = gts(&stg(&s).unwrap()).unwrap();
        assert_eq!(back.term_labels(), s.term_labels());

        let diamond =
            Digraph::from_arrows(letters(4), &[("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")]).unwrap();
        assert_eq!(gts(&diamond).unwrap().term_labels(), vec![vec!["A"], vec!["B", "C"], vec!["D"]]);

        let claw = Digraph::from_arrows(letters(4), &[("A", "B"), ("A", "C"), ("C", "D")]).unwrap();
        assert_eq!(gts(&claw).unwrap_err(), Error::NotLayered);
        let cyc = Digraph::from_arrows(letters(2), &[("A", "B"), ("B", "A")]).unwrap();
        assert_eq!(gts(&cyc).unwrap_err(), Error::NotLayered);
    }

    #[test]
    fn consistency_examples() {
        let x = letters(5);
        let w = Digraph::from_arrows(letters(3), &[("A", "B"), ("A", "C")]).unwrap();
        let good = SubsetSequence::new(x.clone(), &[vec!["D"], vec!["A", "E"], vec!["B", "C"]]).unwrap();
        let bad = SubsetSequence::new(x.clone(), &[vec!["D"], vec!["A", "B"], vec!["C", "E"]]).unwrap();
        assert!(is_consistent(&good, &w).unwrap());
        assert!(!is_consistent(&bad, &w).unwrap());

        let none = Digraph::empty(letters(3)).unwrap();
        assert!(is_consistent(&bad, &none).unwrap());

        let foreign = Digraph::empty(Arc::new(LabelTable::new(["Q"]).unwrap())).unwrap();
        assert_eq!(is_consistent(&good, &foreign).unwrap_err(), Error::LabelNotInUniverse("Q".into()));
    }

    #[test]
    fn consistency_tolerates_repeats() {
        let x = letters(2);
        let w = Digraph::from_arrows(letters(2), &[("A", "B")]).unwrap();
        assert!(is_consistent(&EventSequence::new(x.clone(), &["A", "A", "B"]).unwrap(), &w).unwrap());
        assert!(!is_consistent(&EventSequence::new(x, &["A", "B", "A"]).unwrap(), &w).unwrap());
    }

    #[test]
    fn flattening_examples() {
        let diamond =
            Digraph::from_arrows(letters(4), &[("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")]).unwrap();
        let orders = linear_extensions(&diamond).unwrap();
        assert_eq!(orders, vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]]);

        let j = Arc::new(LabelTable::new(["e1", "e2", "e5", "e6"]).unwrap());
        let g = Digraph::from_arrows(j, &[("e2", "e5"), ("e5", "e6"), ("e1", "e6")]).unwrap();
        let named: Vec<Vec<&str>> = linear_extensions(&g)
            .unwrap()
            .iter()
            .map(|o| o.iter().map(|&v| g.labels().label(v)).collect())
            .collect();
        assert_eq!(
            named,
            vec![
                vec!["e1", "e2", "e5", "e6"],
                vec!["e2", "e1", "e5", "e6"],
                vec!["e2", "e5", "e1", "e6"],
            ]
        );

        assert_eq!(flattenings(&Digraph::empty(letters(4)).unwrap()).unwrap().len(), 24);
        for z in flattenings(&g).unwrap() {
            assert_eq!(z.arrow_count(), 3);
            assert!(g.reflexive_relation().is_subset_of(&z.reflexive_relation()));
        }
    }

    #[test]
    fn five_characterizations_agree_on_example() {
        let x = letters(5);
        let w = Digraph::from_arrows(letters(3), &[("A", "B"), ("A", "C")]).unwrap();
        let s = EventSequence::new(x.clone(), &["D", "A", "E", "B", "C"]).unwrap();
        assert_eq!(consistency_characterizations(&s, &w).unwrap(), [true; 5]);
        let t = EventSequence::new(x.clone(), &["D", "B", "A", "C", "E"]).unwrap();
        assert_eq!(consistency_characterizations(&t, &w).unwrap(), [false; 5]);
        let rep = EventSequence::new(x, &["A", "A"]).unwrap();
        assert_eq!(check_consistency_equivalences(&rep, &w).unwrap_err(), Error::NotSimple);
    }
}
