//! Seeded corruption of episode sequences.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Episode;
use crate::sequence::EventSequence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorruptOp {
    /// Exchange two positions holding different events.
    Swap,
    Delete,
    /// Insert an event drawn uniformly from the alphabet.
    Insert,
}

impl CorruptOp {
    pub const ALL: [CorruptOp; 3] = [CorruptOp::Swap, CorruptOp::Delete, CorruptOp::Insert];
}

impl FromStr for CorruptOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swap" => Ok(CorruptOp::Swap),
            "delete" => Ok(CorruptOp::Delete),
            "insert" => Ok(CorruptOp::Insert),
            other => Err(Error::InvalidParameter(format!("unknown corruption op `{other}`"))),
        }
    }
}

impl fmt::Display for CorruptOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorruptOp::Swap => "swap",
            CorruptOp::Delete => "delete",
            CorruptOp::Insert => "insert",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Corrupted {
    pub episodes: Vec<Episode>,
    /// Indices of the mutated episodes, increasing.
    pub mutated: Vec<usize>,
}

/// `ceil(fraction * n)`, without letting float noise such as `0.1 * 130`
/// (= 13.000000000000002) round up to the next integer.
fn mutation_count(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

/// Mutates exactly `ceil(fraction * n)` episodes, each by one op drawn from
/// `ops`. Every mutation changes its sequence; labels are kept.
pub fn corrupt(episodes: &[Episode], fraction: f64, seed: u64, ops: &[CorruptOp]) -> Result<Corrupted> {
    let seqs: Vec<EventSequence> = episodes.iter().map(|e| e.events.clone()).collect();
    let (seqs, mutated) = corrupt_sequences(&seqs, fraction, seed, ops)?;
    let episodes = episodes
        .iter()
        .zip(seqs)
        .map(|(e, events)| Episode { events, ..e.clone() })
        .collect();
    Ok(Corrupted { episodes, mutated })
}

/// [`corrupt`] on bare sequences; also returns the mutated indices.
pub fn corrupt_sequences(
    seqs: &[EventSequence],
    fraction: f64,
    seed: u64,
    ops: &[CorruptOp],
) -> Result<(Vec<EventSequence>, Vec<usize>)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!("fraction {fraction} is outside [0, 1]")));
    }
    if ops.is_empty() {
        return Err(Error::InvalidParameter("no corruption ops given".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = mutation_count(fraction, seqs.len());
    let mut mutated = sample(&mut rng, seqs.len(), count).into_vec();
    mutated.sort_unstable();

    let mut out = seqs.to_vec();
    for &k in &mutated {
        let mut events = out[k].events().to_vec();
        let universe = out[k].shared_universe().len();
        let distinct = events.iter().any(|&e| e != events[0]);
        let usable: Vec<CorruptOp> = ops
            .iter()
            .copied()
            .filter(|op| match op {
                CorruptOp::Swap => distinct,
                CorruptOp::Delete => !events.is_empty(),
                CorruptOp::Insert => true,
            })
            .collect();
        if usable.is_empty() {
            return Err(Error::InvalidParameter(format!("sequence {k} cannot be changed by {ops:?}")));
        }
        match usable[rng.gen_range(0..usable.len())] {
            CorruptOp::Swap => {
                let i = rng.gen_range(0..events.len());
                // Some value differs from `events[i]` because not all events are equal.
                let others: Vec<usize> = (0..events.len()).filter(|&j| events[j] != events[i]).collect();
                let j = others[rng.gen_range(0..others.len())];
                events.swap(i, j);
            }
            CorruptOp::Delete => {
                events.remove(rng.gen_range(0..events.len()));
            }
            CorruptOp::Insert => {
                let at = rng.gen_range(0..=events.len());
                events.insert(at, rng.gen_range(0..universe));
            }
        }
        out[k] = out[k].with_events(events);
    }
    Ok((out, mutated))
}
