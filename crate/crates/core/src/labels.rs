use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered table of distinct vertex/event labels.
///
/// Positions are 0-based internally; anything written out for humans uses
/// the label strings themselves (`e1`, `e2`, ...), so no index conversion
/// leaks into file formats.
#[derive(Clone, PartialEq, Eq)]
pub struct LabelTable {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelTable {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(LabelTable { labels, index })
    }

    /// `e1..en`.
    pub fn events(n: usize) -> Self {
        LabelTable::new((1..=n).map(|i| format!("e{i}"))).expect("generated labels are distinct")
    }

    /// Single-letter labels `A, B, C, ...` (at most 26).
    pub fn letters(n: usize) -> Self {
        assert!(n <= 26);
        LabelTable::new((0..n).map(|i| ((b'A' + i as u8) as char).to_string()))
            .expect("generated labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.position(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.labels.iter().map(String::as_str)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.labels
    }

    /// Sub-table made of the given labels, in the given order.
    pub fn subset<I, S>(&self, labels: I) -> Result<LabelTable>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = Vec::new();
        for l in labels {
            let l = l.as_ref();
            self.require(l)?;
            out.push(l.to_string());
        }
        LabelTable::new(out)
    }

    pub fn into_shared(self) -> Arc<LabelTable> {
        Arc::new(self)
    }
}

impl fmt::Debug for LabelTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}
