use crate::error::{Error, Result};
use crate::labels::LabelTable;
use crate::matrix::{BoolMatrix, MAX_DIM};
use crate::sequence::TermSequence;

/// For every label of `J`, the 1-based positions of the terms containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceIndex {
    positions: Vec<Vec<usize>>,
}

impl OccurrenceIndex {
    pub fn build<S: TermSequence + ?Sized>(seq: &S, j: &LabelTable) -> Result<Self> {
        if j.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        if j.len() > MAX_DIM {
            return Err(Error::TooManyLabels { got: j.len(), max: MAX_DIM });
        }
        let universe = seq.universe();
        let mut local = vec![None; universe.len()];
        for (i, l) in j.iter().enumerate() {
            local[universe.require(l)?] = Some(i);
        }
        let mut positions = vec![Vec::new(); j.len()];
        seq.for_each_occurrence(&mut |k, l| {
            if let Some(i) = local[l] {
                if positions[i].last() != Some(&(k + 1)) {
                    positions[i].push(k + 1);
                }
            }
        });
        Ok(OccurrenceIndex { positions })
    }

    pub fn positions(&self, i: usize) -> &[usize] {
        &self.positions[i]
    }

    pub fn occurs(&self, i: usize) -> bool {
        !self.positions[i].is_empty()
    }

    /// Bit `i` set iff label `i` occurs.
    pub fn present_mask(&self) -> u64 {
        (0..self.positions.len()).filter(|&i| self.occurs(i)).fold(0, |acc, i| acc | 1 << i)
    }

    /// `M(i, j) = 1` iff both occur and `max P_i < min P_j`.
    pub fn to_matrix(&self) -> BoolMatrix {
        let m = self.positions.len();
        let mut out = BoolMatrix::zeros(m);
        for (i, pi) in self.positions.iter().enumerate() {
            let Some(&last_i) = pi.last() else { continue };
            for (j, pj) in self.positions.iter().enumerate() {
                if let Some(&first_j) = pj.first() {
                    if i != j && last_i < first_j {
                        out.set(i, j, true);
                    }
                }
            }
        }
        out
    }
}

/// Path matrix of the before-and-after relations among `J` seen in `seq`.
pub fn seq_to_matrix<S: TermSequence + ?Sized>(seq: &S, j: &LabelTable) -> Result<BoolMatrix> {
    Ok(OccurrenceIndex::build(seq, j)?.to_matrix())
}

/// Common matrix of several sequences: `M(s, t) = 1` iff some sequence orders
/// `s` strictly before `t` and every sequence containing both does so.
pub fn common_matrix<S: TermSequence>(seqs: &[S], j: &LabelTable) -> Result<BoolMatrix> {
    if seqs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = j.len();
    let mut witnessed = vec![0u64; m];
    let mut vetoed = vec![0u64; m];
    for seq in seqs {
        let index = OccurrenceIndex::build(seq, j)?;
        let present = index.present_mask();
        let mk = index.to_matrix();
        for s in 0..m {
            witnessed[s] |= mk.row(s);
            if index.occurs(s) {
                let both = present & !(1 << s);
                vetoed[s] |= both & !mk.row(s);
            }
        }
    }
    Ok(BoolMatrix::from_row_bits(witnessed.iter().zip(&vetoed).map(|(w, v)| w & !v).collect()))
}
