//! Class-conditional relevance of "always before" relations.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::labels::LabelTable;
use crate::sequence::EventSequence;

/// A relevance score: a nonnegative rational or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relevance {
    Finite(Ratio<u64>),
    Infinite,
}

impl Relevance {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Relevance::Infinite)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Relevance::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Relevance::Infinite => f64::INFINITY,
        }
    }
}

impl Ord for Relevance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Relevance::Infinite, Relevance::Infinite) => Ordering::Equal,
            (Relevance::Infinite, _) => Ordering::Greater,
            (_, Relevance::Infinite) => Ordering::Less,
            (Relevance::Finite(a), Relevance::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Relevance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Relevance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relevance::Infinite => f.write_str("inf"),
            Relevance::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Relevance::Finite(_) => write!(f, "{}", self.as_f64()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceRow {
    pub i: usize,
    pub j: usize,
    pub wins: u64,
    pub losses: u64,
    pub score: Relevance,
}

#[derive(Debug, Clone)]
pub struct RelevanceTable {
    labels: Arc<LabelTable>,
    n_win: u64,
    n_loss: u64,
    /// Row-major m×m counts; diagonal entries are unused.
    wins: Vec<u64>,
    losses: Vec<u64>,
}

impl RelevanceTable {
    pub fn labels(&self) -> &LabelTable {
        &self.labels
    }

    pub fn class_sizes(&self) -> (u64, u64) {
        (self.n_win, self.n_loss)
    }

    pub fn counts(&self, i: usize, j: usize) -> (u64, u64) {
        let k = i * self.labels.len() + j;
        (self.wins[k], self.losses[k])
    }

    /// `R_ij`, or `None` on the diagonal.
    pub fn score(&self, i: usize, j: usize) -> Option<Relevance> {
        if i == j {
            return None;
        }
        let (w, l) = self.counts(i, j);
        Some(if l == 0 {
            Relevance::Infinite
        } else {
            Relevance::Finite(Ratio::new(w * self.n_loss, l * self.n_win))
        })
    }

    pub fn rows(&self) -> Vec<RelevanceRow> {
        let m = self.labels.len();
        let mut out = Vec::with_capacity(m * m.saturating_sub(1));
        for i in 0..m {
            for j in 0..m {
                if let Some(score) = self.score(i, j) {
                    let (wins, losses) = self.counts(i, j);
                    out.push(RelevanceRow { i, j, wins, losses, score });
                }
            }
        }
        out
    }

    /// Rows by descending score, ties by `(i, j)`.
    pub fn ranked(&self) -> Vec<RelevanceRow> {
        let mut rows = self.rows();
        rows.sort_by(|a, b| b.score.cmp(&a.score).then((a.i, a.j).cmp(&(b.i, b.j))));
        rows
    }
}

/// Scores every ordered label pair over labeled episodes (`1` = win).
pub fn relevance_scores(episodes: &[(EventSequence, u8)]) -> Result<RelevanceTable> {
    let labels = match episodes.first() {
        Some((s, _)) => s.shared_universe().clone(),
        None => return Err(Error::MissingClass),
    };
    let m = labels.len();
    let mut table = RelevanceTable {
        labels: labels.clone(),
        n_win: 0,
        n_loss: 0,
        wins: vec![0; m * m],
        losses: vec![0; m * m],
    };
    let mut first = vec![usize::MAX; m];
    let mut last = vec![0usize; m];
    for (seq, class) in episodes {
        if seq.shared_universe().as_slice() != labels.as_slice() {
            return Err(Error::LabelMismatch);
        }
        let counts = match class {
            1 => {
                table.n_win += 1;
                &mut table.wins
            }
            0 => {
                table.n_loss += 1;
                &mut table.losses
            }
            other => return Err(Error::InvalidParameter(format!("class label {other} is not 0 or 1"))),
        };
        first.fill(usize::MAX);
        for (t, &e) in seq.events().iter().enumerate() {
            if first[e] == usize::MAX {
                first[e] = t;
            }
            last[e] = t;
        }
        for i in (0..m).filter(|&i| first[i] != usize::MAX) {
            for j in (0..m).filter(|&j| j != i && first[j] != usize::MAX) {
                if last[i] < first[j] {
                    counts[i * m + j] += 1;
                }
            }
        }
    }
    if table.n_win == 0 || table.n_loss == 0 {
        return Err(Error::MissingClass);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(u: &Arc<LabelTable>, events: &[&str], class: u8) -> (EventSequence, u8) {
        (EventSequence::new(u.clone(), events).unwrap(), class)
    }

    #[test]
    fn opposite_orders() {
        let u = Arc::new(LabelTable::events(2));
        let eps = vec![ep(&u, &["e1", "e2"], 1), ep(&u, &["e1", "e2"], 1), ep(&u, &["e2", "e1"], 0)];
        let t = relevance_scores(&eps).unwrap();
        assert_eq!(t.score(0, 1), Some(Relevance::Infinite));
        assert_eq!(t.score(1, 0), Some(Relevance::Finite(Ratio::from_integer(0))));
        assert_eq!(t.score(0, 0), None);
    }

    #[test]
    fn identical_populations_score_one() {
        let u = Arc::new(LabelTable::events(3));
        let runs: &[&[&str]] = &[&["e1", "e2", "e3"], &["e3", "e1"], &["e2", "e1", "e3", "e1"]];
        let mut eps = Vec::new();
        for r in runs {
            eps.push(ep(&u, r, 1));
            eps.push(ep(&u, r, 0));
        }
        let t = relevance_scores(&eps).unwrap();
        for row in t.rows() {
            if !row.score.is_infinite() {
                assert_eq!(row.score, Relevance::Finite(Ratio::from_integer(1)), "{row:?}");
            }
        }
    }

    #[test]
    fn repeated_events_need_all_before_all() {
        let u = Arc::new(LabelTable::events(2));
        let eps = vec![ep(&u, &["e1", "e2", "e1"], 1), ep(&u, &["e1", "e2"], 0)];
        let t = relevance_scores(&eps).unwrap();
        assert_eq!(t.counts(0, 1), (0, 1));
        assert_eq!(t.counts(1, 0), (0, 0));
    }

    #[test]
    fn ranking_puts_infinity_first() {
        let u = Arc::new(LabelTable::events(3));
        let eps = vec![ep(&u, &["e1", "e2", "e3"], 1), ep(&u, &["e3", "e2", "e1"], 0), ep(&u, &["e1", "e3"], 0)];
        let ranked = relevance_scores(&eps).unwrap().ranked();
        assert!(ranked[0].score.is_infinite());
        assert!(ranked.windows(2).all(|w| w[0].score >= w[1].score));
    }

    #[test]
    fn missing_class() {
        let u = Arc::new(LabelTable::events(2));
        assert_eq!(relevance_scores(&[ep(&u, &["e1"], 1)]).unwrap_err(), Error::MissingClass);
        assert_eq!(relevance_scores(&[]).unwrap_err(), Error::MissingClass);
    }
}
