use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nds"))
        .args(args)
        .env_remove("NDS_SEED")
        .output()
        .unwrap()
}

fn karate() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/karate.edges")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn missing_file_is_an_input_error() {
    let out = nds(&["analyze", "/nonexistent/graph.edges"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn malformed_edge_list_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.edges");
    std::fs::write(&p, "0 1\n7\n").unwrap();
    assert_eq!(nds(&["analyze", s(&p)]).status.code(), Some(2));
}

#[test]
fn edgeless_graph_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.mtx");
    std::fs::write(
        &p,
        "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 0\n",
    )
    .unwrap();
    let out = nds(&["analyze", s(&p)]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn analyze_csv_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("k.csv");
    assert!(nds(&["analyze", s(&karate()), "--csv", s(&csv)])
        .status
        .success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("network_id,source,n,m,density,components,S,"));
    assert!(lines[1].starts_with("karate,"));
}

#[test]
fn zero_ensemble_is_rejected() {
    let out = nds(&["nullcompare", "--ensemble-count", "0", s(&karate())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nullcompare_is_reproducible() {
    let run = || {
        nds(&[
            "nullcompare",
            "--ensemble-count",
            "5",
            "--seed",
            "9",
            s(&karate()),
        ])
        .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn batch_keep_going_records_failures() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.txt");
    std::fs::write(
        &manifest,
        format!("# corpus\n{} edge-list club\nmissing.edges\n", s(&karate())),
    )
    .unwrap();
    let out = nds(&["batch", s(&manifest)]);
    assert_eq!(out.status.code(), Some(2));

    let out = nds(&["batch", "--keep-going", s(&manifest)]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "club");
    assert_eq!(&rows[0][2], "34");
    assert!(rows[0].iter().last().unwrap().is_empty());
    assert!(!rows[1].iter().last().unwrap().is_empty());
}

#[test]
fn batch_order_is_independent_of_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = String::new();
    for i in 0..6 {
        let p = dir.path().join(format!("g{i}.mtx"));
        let out = nds(&[
            "generate",
            "--seed",
            &i.to_string(),
            "--format",
            "matrix-market",
            "--out",
            s(&p),
            "erdos-renyi",
            "--n",
            "30",
            "--p",
            "0.2",
        ]);
        assert!(out.status.success());
        manifest.push_str(&format!("{}\n", p.display()));
    }
    let m = dir.path().join("m.txt");
    std::fs::write(&m, manifest).unwrap();
    let serial = nds(&["batch", "--parallelism", "1", s(&m)]).stdout;
    let parallel = nds(&["batch", "--parallelism", "4", s(&m)]).stdout;
    assert_eq!(serial, parallel);
}

#[test]
fn generate_is_seeded() {
    let run = |seed: &str| {
        nds(&[
            "generate",
            "--seed",
            seed,
            "barabasi-albert",
            "--n",
            "50",
            "--m0",
            "3",
            "--m-attach",
            "2",
        ])
        .stdout
    };
    assert_eq!(run("4"), run("4"));
    assert_ne!(run("4"), run("5"));
}

#[test]
fn temporal_needs_two_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(karate(), dir.path().join("t0.edges")).unwrap();
    assert_eq!(nds(&["temporal", s(dir.path())]).status.code(), Some(2));
}
