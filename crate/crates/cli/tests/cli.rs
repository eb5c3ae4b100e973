use std::path::Path;
use std::process::{Command, Output};

fn hasse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hasse")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn enumerate_counts_and_exports() {
    for (m, want) in [("1", "1"), ("3", "19"), ("5", "4231")] {
        let o = hasse(&["enumerate", "--m", m]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
    let dir = tempfile::tempdir().unwrap();
    let dots = dir.path().join("dots");
    let csv = path(dir.path(), "g.csv");
    let o = hasse(&["enumerate", "--m", "2", "--dot", dots.to_str().unwrap(), "--csv", &csv]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(&dots).unwrap().count(), 3);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table, "index,arrows,path_matrix\n0,,00;00\n1,B>A,00;10\n2,A>B,01;00\n");
    assert_eq!(hasse(&["enumerate", "--m", "7"]).status.code(), Some(2));
    assert_eq!(hasse(&["enumerate", "--m", "0"]).status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_and_covers_types() {
    let a = hasse(&["simulate", "--version", "1", "--episodes", "80", "--policy", "scripted-mixed", "--seed", "7"]);
    let b = hasse(&["simulate", "--version", "1", "--episodes", "80", "--policy", "scripted-mixed", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 81);
    let mut types = std::collections::BTreeSet::new();
    for line in text.lines().skip(1) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["label"], 1);
        let j: Vec<&str> = v["events"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e.as_str().unwrap())
            .filter(|e| ["e1", "e2", "e5", "e6"].contains(e))
            .collect();
        types.insert(j.join(","));
    }
    assert_eq!(types.len(), 3);
    let bad = hasse(&["simulate", "--version", "1", "--policy", "scripted:coin"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn file_round_trip_matches_library() {
    use hasse_core::game::{simulate, GameConfig, Policy};
    let o = hasse(&["simulate", "--version", "2", "--episodes", "30", "--seed", "4"]);
    let file = hasse_cli::formats::SequenceFile::parse(&stdout(&o)).unwrap();
    let direct = simulate(&GameConfig::v2(), 30, Policy::ScriptedMixed, 4).unwrap();
    let parsed = file.sequences().unwrap();
    assert_eq!(parsed.len(), direct.len());
    for (p, d) in parsed.iter().zip(&direct) {
        assert_eq!(p, &d.events);
    }
}

#[test]
fn corrupt_zero_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "in.jsonl");
    let o = hasse(&["simulate", "--version", "2", "--episodes", "25", "--out", &input]);
    assert!(o.status.success());
    let same = hasse(&["corrupt", "--in", &input, "--fraction", "0", "--seed", "1"]);
    assert_eq!(stdout(&same), std::fs::read_to_string(&input).unwrap());
    let some = hasse(&["corrupt", "--in", &input, "--fraction", "0.2", "--seed", "1"]);
    let changed = stdout(&some)
        .lines()
        .zip(std::fs::read_to_string(&input).unwrap().lines())
        .filter(|(a, b)| a != b)
        .count();
    assert_eq!(changed, 5);
    assert_eq!(hasse(&["corrupt", "--in", &input, "--fraction", "2"]).status.code(), Some(2));
    assert_eq!(hasse(&["corrupt", "--in", &input, "--fraction", "0.1", "--ops", "shuffle"]).status.code(), Some(2));
}

#[test]
fn mine_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "v1.jsonl");
    std::fs::write(
        &input,
        "{\"events\":[\"e1\",\"e2\",\"e5\",\"e6\",\"e9\"],\"label\":1}\n\
         {\"events\":[\"e2\",\"e1\",\"e5\",\"e6\",\"e9\"],\"label\":1}\n\
         {\"events\":[\"e2\",\"e5\",\"e1\",\"e6\",\"e9\"],\"label\":1}\n\
         {\"events\":[\"e3\",\"e4\",\"e10\"],\"label\":0}\n",
    )
    .unwrap();
    let dots = dir.path().join("dots");
    let o = hasse(&[
        "mine", "--in", &input, "--labels", "e1,e2,e5,e6", "--t", "100", "--r", "1", "--only-label", "1", "--dot",
        dots.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["clusters"].as_array().unwrap().len(), 1);
    assert_eq!(v["clusters"][0]["matrices"][0], serde_json::json!(["0001", "0011", "0001", "0000"]));
    assert_eq!(v["clusters"][0]["arrows"][0], serde_json::json!(["e1->e6", "e2->e5", "e5->e6"]));
    let dot = std::fs::read_to_string(dots.join("c1_g1.dot")).unwrap();
    assert!(dot.contains("\"e2\" -> \"e5\";"));

    assert_eq!(hasse(&["mine", "--in", &input, "--labels", "e1,e2,e3,e4,e5,e6,e7", "--t", "100"]).status.code(), Some(2));
    assert_eq!(hasse(&["mine", "--in", &input, "--labels", "e1,e2", "--t", "150"]).status.code(), Some(2));
    assert_eq!(hasse(&["mine", "--in", &input, "--labels", "e1,e2", "--r", "0"]).status.code(), Some(2));
    assert_eq!(hasse(&["mine", "--in", &input, "--labels", "e1,e99"]).status.code(), Some(2));
}

#[test]
fn mine_empty_result_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "s.jsonl");
    // One sequence (A, B) over labels A, B, C. In literal mode {A->B} and
    // {A->B, A->B->C} dominate each other, and {A->B} dominates every other
    // candidate, so no source is left. Minimal mode keeps {A->B}.
    std::fs::write(&input, "{\"universe\":[\"A\",\"B\",\"C\"]}\n{\"events\":[\"A\",\"B\"]}\n").unwrap();
    let o = hasse(&["mine", "--in", &input, "--labels", "A,B,C", "--t", "100", "--r", "2", "--mode", "literal"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let minimal = hasse(&["mine", "--in", &input, "--labels", "A,B,C", "--t", "100", "--r", "2"]);
    assert!(minimal.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["clusters"].as_array().unwrap().is_empty());
}

#[test]
fn relevance_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "r.jsonl");
    std::fs::write(
        &input,
        "{\"events\":[\"e1\",\"e2\"],\"label\":1}\n{\"events\":[\"e1\",\"e2\"],\"label\":1}\n{\"events\":[\"e2\",\"e1\"],\"label\":0}\n{\"events\":[\"e1\",\"e2\"],\"label\":0}\n",
    )
    .unwrap();
    let o = hasse(&["relevance", "--in", &input]);
    assert_eq!(stdout(&o), "i,j,W,L,R\ne1,e2,2,1,2\ne2,e1,0,1,0\n");
    std::fs::write(&input, "{\"events\":[\"e1\"],\"label\":1}\n").unwrap();
    assert_eq!(hasse(&["relevance", "--in", &input]).status.code(), Some(2));
}

#[test]
fn relevance_on_simulated_v1_data() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "v1.jsonl");
    let o = hasse(&["simulate", "--version", "1", "--episodes", "100", "--random", "184", "--seed", "12", "--out", &input]);
    assert!(o.status.success());
    let csv = stdout(&hasse(&["relevance", "--in", &input]));
    for (i, j) in [("e1", "e9"), ("e1", "e6"), ("e6", "e9"), ("e2", "e9"), ("e2", "e6"), ("e5", "e6"), ("e5", "e9")] {
        let row = csv.lines().find(|l| l.starts_with(&format!("{i},{j},"))).unwrap();
        assert!(row.ends_with(",inf"), "{row}");
    }
    let first_finite = csv.lines().skip(1).position(|l| !l.ends_with("inf")).unwrap();
    assert!(csv.lines().skip(1 + first_finite).all(|l| !l.ends_with("inf")));
}

#[test]
fn baseline_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "v2.jsonl");
    hasse(&["simulate", "--version", "2", "--episodes", "125", "--seed", "3", "--out", &input]);
    let labels = "e1,e2,e5,e6,e11";
    let count = |args: &[&str]| -> String { stdout(&hasse(args)).lines().next().unwrap().to_string() };
    assert_eq!(count(&["baseline", "--algo", "dbscan", "--in", &input, "--labels", labels, "--eps", "2"]), "clusters: 3");
    assert_eq!(count(&["baseline", "--algo", "dbscan", "--in", &input, "--labels", labels, "--eps", "6"]), "clusters: 1");
    assert_eq!(count(&["baseline", "--algo", "hier", "--in", &input, "--labels", labels, "--threshold", "0"]), "clusters: 7");

    let out = dir.path().join("out");
    let dendro = path(dir.path(), "d.txt");
    let o = hasse(&[
        "baseline", "--algo", "hier", "--in", &input, "--labels", labels, "--threshold", "7/2", "--out-dir",
        out.to_str().unwrap(), "--dendrogram", &dendro,
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&dendro).unwrap().lines().count(), 2 + 124);
    assert_eq!(std::fs::read_to_string(out.join("clusters.csv")).unwrap().lines().count(), 126);
    let common0 = std::fs::read_to_string(out.join("common_0.csv")).unwrap();
    assert_eq!(common0, "e1,e2,e5,e6,e11\n0,0,0,1,0\n0,0,1,1,0\n0,0,0,1,0\n0,0,0,0,0\n0,0,0,0,0\n");

    assert_eq!(hasse(&["baseline", "--algo", "dbscan", "--in", &input, "--labels", labels]).status.code(), Some(2));
    assert_eq!(hasse(&["baseline", "--algo", "hier", "--in", &input, "--labels", labels]).status.code(), Some(2));
}

#[test]
fn dot_from_matrix_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "m.csv");
    std::fs::write(&input, "e1,e2,e5,e6\n0,0,0,1\n0,0,1,1\n0,0,0,1\n0,0,0,0\n").unwrap();
    let o = hasse(&["dot", "--in", &input, "--name", "door"]);
    assert_eq!(
        stdout(&o),
        "digraph \"door\" {\n    \"e1\";\n    \"e2\";\n    \"e5\";\n    \"e6\";\n    \"e1\" -> \"e6\";\n    \"e2\" -> \"e5\";\n    \"e5\" -> \"e6\";\n}\n"
    );
    std::fs::write(&input, "a,b\n0,1\n1,0\n").unwrap();
    assert_eq!(hasse(&["dot", "--in", &input]).status.code(), Some(2));
}
