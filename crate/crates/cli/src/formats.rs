//! On-disk formats: JSONL sequence files and CSV matrix files.

use std::collections::BTreeSet;
use std::sync::Arc;

use hasse_core::game::EpisodeRecord;
use hasse_core::{BoolMatrix, EventSequence, LabelTable};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    universe: Vec<String>,
}

/// A parsed sequence file: an optional `{"universe": [...]}` header line
/// followed by one record per line.
#[derive(Debug, Clone)]
pub struct SequenceFile {
    pub universe: Arc<LabelTable>,
    pub records: Vec<EpisodeRecord>,
    /// Whether the universe came from a header line (kept on rewrite).
    pub has_header: bool,
}

impl SequenceFile {
    pub fn new(universe: Arc<LabelTable>, records: Vec<EpisodeRecord>) -> Self {
        SequenceFile { universe, records, has_header: true }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
        let mut header = None;
        if let Some((_, first)) = lines.peek() {
            if let Ok(h) = serde_json::from_str::<Header>(first) {
                header = Some(h.universe);
                lines.next();
            }
        }
        let records = lines
            .map(|(n, line)| {
                serde_json::from_str::<EpisodeRecord>(line)
                    .map_err(|e| CliError::Usage(format!("line {}: {e}", n + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let has_header = header.is_some();
        let labels = match header {
            Some(u) => u,
            None => infer_universe(&records),
        };
        let universe = Arc::new(LabelTable::new(labels)?);
        let file = SequenceFile { universe, records, has_header };
        file.sequences()?;
        Ok(file)
    }

    pub fn sequences(&self) -> Result<Vec<EventSequence>, CliError> {
        self.records
            .iter()
            .map(|r| EventSequence::new(self.universe.clone(), &r.events).map_err(CliError::from))
            .collect()
    }

    /// Sequences with their class labels; every record needs a label.
    pub fn labelled(&self) -> Result<Vec<(EventSequence, u8)>, CliError> {
        self.sequences()?
            .into_iter()
            .zip(&self.records)
            .enumerate()
            .map(|(k, (s, r))| {
                r.label.map(|l| (s, l)).ok_or_else(|| CliError::Usage(format!("record {} has no label", k + 1)))
            })
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        if self.has_header {
            let header = Header { universe: self.universe.as_slice().to_vec() };
            out.push_str(&serde_json::to_string(&header).expect("header serializes"));
            out.push('\n');
        }
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

/// Without a header: `e1..eN` when every token is `e<k>` (N the largest `k`),
/// otherwise the tokens in order of first appearance.
fn infer_universe(records: &[EpisodeRecord]) -> Vec<String> {
    let tokens = records.iter().flat_map(|r| r.events.iter());
    let numbered: Option<Vec<usize>> = tokens
        .clone()
        .map(|t| t.strip_prefix('e').and_then(|k| k.parse::<usize>().ok()).filter(|&k| k > 0))
        .collect();
    match numbered {
        Some(ks) if !ks.is_empty() => {
            let max = ks.into_iter().max().unwrap();
            LabelTable::events(max).as_slice().to_vec()
        }
        _ => {
            let mut seen = BTreeSet::new();
            tokens.filter(|t| seen.insert(t.as_str())).cloned().collect()
        }
    }
}

/// CSV with the label order as header row and one 0/1 row per label.
pub fn matrix_to_csv(labels: &LabelTable, m: &BoolMatrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(labels.iter()).expect("in-memory write");
    for i in 0..m.dim() {
        w.write_record((0..m.dim()).map(|j| if m.get(i, j) { "1" } else { "0" })).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

pub fn matrix_from_csv(text: &str) -> Result<(LabelTable, BoolMatrix), CliError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let labels: Vec<String> = r.headers().map_err(bad_csv)?.iter().map(String::from).collect();
    let table = LabelTable::new(labels)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(bad_csv)?;
        let row: String = rec.iter().collect();
        if rec.len() != table.len() || !row.chars().all(|c| c == '0' || c == '1') {
            return Err(CliError::Usage(format!("matrix row `{}` must have {} entries of 0/1", row, table.len())));
        }
        rows.push(row);
    }
    if rows.len() != table.len() {
        return Err(CliError::Usage(format!("matrix has {} rows for {} labels", rows.len(), table.len())));
    }
    Ok((table, BoolMatrix::parse_rows(&rows)?))
}

fn bad_csv(e: csv::Error) -> CliError {
    CliError::Usage(format!("matrix csv: {e}"))
}
