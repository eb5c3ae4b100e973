//! Mining abstract temporal concepts from event sequences.
//!
//! Sequences are mapped to path matrices over an ordered label set, and the
//! category of Hasse diagrams on those labels is searched for a few maximally
//! specific graphs that jointly generalize most of the input.

pub mod algorithms;
pub mod baselines;
pub mod category;
pub mod error;
pub mod game;
pub mod graph;
pub mod labels;
pub mod matrix;
pub mod sequence;

pub use category::{enumerate, has_morphism, CategoryRJ};
pub use error::{Error, Result};
pub use graph::Digraph;
pub use labels::LabelTable;
pub use matrix::BoolMatrix;
pub use sequence::{EventSequence, SubsetSequence, TermSequence};
