use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use hasse_core::algorithms::{hasse_cluster, ClusterMode, HasseParams, Relevance, Threshold};
use hasse_core::algorithms::{relevance_scores, seq_to_matrix};
use hasse_core::baselines::{cluster_common_matrices, dbscan, hierarchical, Clusters, MatrixPointSet};
use hasse_core::game::{self, corrupt_sequences, CorruptOp, GameConfig, Policy};
use hasse_core::{enumerate as enumerate_category, BoolMatrix, Digraph, EventSequence, LabelTable};
use num_rational::Ratio;
use serde::Serialize;

use crate::formats::{matrix_from_csv, matrix_to_csv, SequenceFile};
use crate::{Algo, BaselineArgs, CliError, CorruptArgs, DotArgs, EnumerateArgs, MineArgs, Mode, RelevanceArgs, SimulateArgs};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn make_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Writes to `out` when given, otherwise returns the text for stdout.
fn emit(out: Option<&Path>, text: String) -> Result<String, CliError> {
    match out {
        Some(p) => write(p, &text).map(|_| String::new()),
        None => Ok(text),
    }
}

pub fn enumerate(args: &EnumerateArgs) -> Result<String, CliError> {
    let labels = Arc::new(LabelTable::letters(args.m as usize));
    let cat = enumerate_category(labels.clone())?;
    if let Some(dir) = &args.dot {
        make_dir(dir)?;
        for (k, g) in cat.graphs().iter().enumerate() {
            write(&dir.join(format!("g{k:06}.dot")), &g.to_dot(&format!("g{k}")))?;
        }
    }
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "arrows", "path_matrix"]).expect("in-memory write");
        for (k, g) in cat.graphs().iter().enumerate() {
            let arrows: Vec<String> =
                g.arrows().map(|(a, b)| format!("{}>{}", labels.label(a), labels.label(b))).collect();
            w.write_record([k.to_string(), arrows.join(" "), cat.path_matrix(k).to_string()])
                .expect("in-memory write");
        }
        write(path, &String::from_utf8(w.into_inner().expect("flush")).expect("ascii"))?;
    }
    Ok(format!("{}\n", cat.len()))
}

pub fn simulate(args: &SimulateArgs) -> Result<String, CliError> {
    let config = GameConfig::preset(args.version)?;
    let policy: Policy = args.policy.parse()?;
    let random_config = match args.step_cap {
        Some(cap) => config.clone().with_step_cap(cap),
        None => config.clone(),
    };
    let mut episodes = match policy {
        Policy::Random => game::simulate(&random_config, args.episodes, policy, args.seed)?,
        _ => game::simulate(&config, args.episodes, policy, args.seed)?,
    };
    if args.random > 0 {
        let extra = args.episodes..args.episodes + args.random;
        episodes.extend(game::simulate_range(&random_config, extra, Policy::Random, args.seed)?);
    }
    let file = SequenceFile::new(game::event_universe(), episodes.iter().map(|e| e.to_record()).collect());
    emit(args.out.as_deref(), file.to_jsonl())
}

pub fn corrupt(args: &CorruptArgs) -> Result<String, CliError> {
    let mut file = SequenceFile::parse(&read(&args.input)?)?;
    let ops = args.ops.iter().map(|o| o.parse::<CorruptOp>()).collect::<Result<Vec<_>, _>>()?;
    let (seqs, _) = corrupt_sequences(&file.sequences()?, args.fraction, args.seed, &ops)?;
    for (record, seq) in file.records.iter_mut().zip(seqs) {
        record.events = seq.labels().into_iter().map(String::from).collect();
    }
    emit(args.out.as_deref(), file.to_jsonl())
}

/// Loads sequences, optionally keeping one class and dropping all-zero matrices.
fn load_filtered(
    path: &Path,
    j: &LabelTable,
    only_label: Option<u8>,
    drop_empty: bool,
) -> Result<Vec<EventSequence>, CliError> {
    let file = SequenceFile::parse(&read(path)?)?;
    let mut out = Vec::new();
    for (seq, rec) in file.sequences()?.into_iter().zip(&file.records) {
        if only_label.is_some_and(|l| rec.label != Some(l)) {
            continue;
        }
        if drop_empty && seq_to_matrix(&seq, j)?.is_zero() {
            continue;
        }
        out.push(seq);
    }
    if out.is_empty() {
        return Err(CliError::Usage("no sequences left after filtering".into()));
    }
    Ok(out)
}

fn label_table(labels: &[String]) -> Result<LabelTable, CliError> {
    Ok(LabelTable::new(labels.iter().map(|l| l.trim()))?)
}

#[derive(Serialize)]
struct MineReport<'a> {
    labels: &'a [String],
    threshold: String,
    r: usize,
    mode: String,
    sequences: usize,
    distinct_graphs: usize,
    candidates: usize,
    clusters: Vec<ClusterReport>,
}

#[derive(Serialize)]
struct ClusterReport {
    matrices: Vec<BoolMatrix>,
    arrows: Vec<Vec<String>>,
    covered: usize,
    coverage: f64,
}

pub fn mine(args: &MineArgs) -> Result<String, CliError> {
    let j = label_table(&args.labels)?;
    let threshold: Threshold = args.t.parse()?;
    let mode = match args.mode {
        Mode::Minimal => ClusterMode::Minimal,
        Mode::Literal => ClusterMode::Literal,
    };
    let seqs = load_filtered(&args.input, &j, args.only_label, args.drop_empty)?;
    let out = hasse_cluster(&seqs, &j, &HasseParams::new(threshold, args.r).with_mode(mode))?;
    let shared = Arc::new(j.clone());
    let hasse = |m: &BoolMatrix| Digraph::new(shared.clone(), m.clone()).and_then(|g| g.transitive_reduction());

    let mut clusters = Vec::new();
    for (k, c) in out.clusters.iter().enumerate() {
        let graphs = c.matrices.iter().map(hasse).collect::<Result<Vec<_>, _>>()?;
        if let Some(dir) = &args.dot {
            make_dir(dir)?;
            for (i, g) in graphs.iter().enumerate() {
                let name = format!("c{}_g{}", k + 1, i + 1);
                write(&dir.join(format!("{name}.dot")), &g.to_dot(&name))?;
            }
        }
        clusters.push(ClusterReport {
            matrices: c.matrices.clone(),
            arrows: graphs
                .iter()
                .map(|g| g.arrows().map(|(a, b)| format!("{}->{}", j.label(a), j.label(b))).collect())
                .collect(),
            covered: c.covered,
            coverage: out.coverage(c),
        });
    }
    let report = MineReport {
        labels: j.as_slice(),
        threshold: threshold.to_string(),
        r: args.r,
        mode: mode.to_string(),
        sequences: out.sequences,
        distinct_graphs: out.distinct_graphs,
        candidates: out.candidates,
        clusters,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if out.is_empty() {
        Err(CliError::Empty(text))
    } else {
        Ok(text)
    }
}

pub fn relevance(args: &RelevanceArgs) -> Result<String, CliError> {
    let file = SequenceFile::parse(&read(&args.input)?)?;
    let table = relevance_scores(&file.labelled()?).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "j", "W", "L", "R"]).expect("in-memory write");
    for row in table.ranked() {
        let r = match row.score {
            Relevance::Infinite => "inf".to_string(),
            finite => finite.to_string(),
        };
        w.write_record([
            table.labels().label(row.i).to_string(),
            table.labels().label(row.j).to_string(),
            row.wins.to_string(),
            row.losses.to_string(),
            r,
        ])
        .expect("in-memory write");
    }
    Ok(String::from_utf8(w.into_inner().expect("flush")).expect("utf8"))
}

/// Parses `2`, `2.5` or `5/2` exactly.
pub fn parse_height(s: &str) -> Result<Ratio<u64>, CliError> {
    let bad = || CliError::Usage(format!("invalid threshold `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        return if d == 0 { Err(bad()) } else { Ok(Ratio::new(n, d)) };
    }
    let (int, frac) = s.trim().split_once('.').unwrap_or((s.trim(), ""));
    if frac.len() > 9 || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Ratio::new(int * den + frac, den))
}

pub fn baseline(args: &BaselineArgs) -> Result<String, CliError> {
    let j = label_table(&args.labels)?;
    let seqs = load_filtered(&args.input, &j, args.only_label, args.drop_empty)?;
    let pts = MatrixPointSet::from_sequences(&seqs, &j)?;
    let clusters: Clusters = match args.algo {
        Algo::Dbscan => {
            let eps = args.eps.ok_or_else(|| CliError::Usage("dbscan needs --eps".into()))?;
            if args.threshold.is_some() || args.dendrogram.is_some() {
                return Err(CliError::Usage("--threshold and --dendrogram apply to hier only".into()));
            }
            if args.min_samples == 0 {
                return Err(CliError::Usage("--min-samples must be positive".into()));
            }
            dbscan(&pts, eps, args.min_samples)
        }
        Algo::Hier => {
            let h = parse_height(args.threshold.as_deref().ok_or_else(|| CliError::Usage("hier needs --threshold".into()))?)?;
            if args.eps.is_some() {
                return Err(CliError::Usage("--eps applies to dbscan only".into()));
            }
            let d = hierarchical(&pts);
            if let Some(path) = &args.dendrogram {
                let mut text = format!("# leaves {}\n# a b height size\n", d.leaves);
                for m in &d.merges {
                    writeln!(text, "{} {} {} {}", m.a, m.b, m.height, m.size).unwrap();
                }
                write(path, &text)?;
            }
            d.cut(h)
        }
    };
    let mut assignment = vec![0; pts.len()];
    for (c, members) in clusters.iter().enumerate() {
        for &p in members {
            assignment[p] = c;
        }
    }
    let mut table = String::from("sequence,cluster\n");
    for (p, c) in assignment.iter().enumerate() {
        writeln!(table, "{},{}", pts.source(p), c).unwrap();
    }
    let commons = cluster_common_matrices(&clusters, &pts, &seqs, &j)?;
    if let Some(dir) = &args.out_dir {
        make_dir(dir)?;
        write(&dir.join("clusters.csv"), &table)?;
        for (c, m) in commons.iter().enumerate() {
            write(&dir.join(format!("common_{c}.csv")), &matrix_to_csv(&j, m))?;
        }
    }
    let mut summary = format!("clusters: {}\n", clusters.len());
    for (c, (members, m)) in clusters.iter().zip(&commons).enumerate() {
        writeln!(summary, "{c}: size {} common {m}", members.len()).unwrap();
    }
    Ok(if args.out_dir.is_some() { summary } else { summary + &table })
}

pub fn dot(args: &DotArgs) -> Result<String, CliError> {
    let (labels, m) = matrix_from_csv(&read(&args.input)?)?;
    let g = Digraph::new(Arc::new(labels), m)?.transitive_reduction()?;
    emit(args.out.as_deref(), g.to_dot(&args.name))
}
