use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn xadg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xadg"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = xadg(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn cars_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let (car, recipe) = (data("car.csv"), data("recipes/cars.toml"));
    let tree = dir.path().join("tree.json");
    let adg = dir.path().join("adg.json");
    let simple = dir.path().join("simple.json");
    let graph = dir.path().join("graph.json");

    ok(&[
        "fit-tree",
        "--data",
        s(&car),
        "--recipe",
        s(&recipe),
        "--max-depth",
        "4",
        "--out",
        s(&tree),
    ]);
    ok(&["extract", "--tree", s(&tree), "--out", s(&adg)]);
    ok(&[
        "simplify",
        "--tree",
        s(&tree),
        "--adg",
        s(&adg),
        "--out",
        s(&simple),
    ]);
    ok(&[
        "build-xadg",
        "--data",
        s(&car),
        "--recipe",
        s(&recipe),
        "--max-depth",
        "4",
        "--out",
        s(&graph),
    ]);

    let report = ok(&[
        "check",
        "--tree",
        s(&tree),
        "--adg",
        s(&simple),
        "--xadg",
        s(&graph),
        "--data",
        s(&car),
    ]);
    assert!(report.contains("well-formed: ok"), "{report}");
    assert!(report.contains("well-built: ok"), "{report}");
    assert!(
        report.contains("equivalence (adg): 100% (1728/1728, 0 undecided)"),
        "{report}"
    );
    assert!(
        report.contains("equivalence (xadg): 100% (1728/1728, 0 undecided)"),
        "{report}"
    );

    let csv = ok(&["classify", "--xadg", s(&graph), "--data", s(&car)]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,class,status,accepted"));
    assert_eq!(lines.clone().count(), 1728);
    assert!(lines.all(|l| l.contains(",decided,")));

    let json = ok(&[
        "classify",
        "--xadg",
        s(&graph),
        "--data",
        s(&car),
        "--format",
        "json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 1728);

    let dot = dir.path().join("graph.dot");
    ok(&["export-dot", "--xadg", s(&graph), "--out", s(&dot)]);
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));
    ok(&["export-dot", "--tree", s(&tree), "--out", s(&dot)]);
    assert!(std::fs::read_to_string(&dot).unwrap().contains("->"));
}

#[test]
fn evaluate_prints_intervals_and_writes_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.json");
    let table = ok(&[
        "evaluate",
        "--data",
        s(&data("car.csv")),
        "--recipe",
        s(&data("recipes/cars.toml")),
        "--max-depth",
        "3",
        "--runs",
        "5",
        "--baseline",
        "cars-prior",
        "--out",
        s(&out),
    ]);
    assert!(table.contains("accuracy"));
    assert!(table.contains("cars-prior"));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["records"].as_array().unwrap().len(), 5);
}

#[test]
fn evaluate_reads_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        format!(
            "data = {:?}\nrecipe = {:?}\nmax_depth = 2\nruns = 3\n",
            data("car.csv"),
            data("recipes/cars.toml")
        ),
    )
    .unwrap();
    let table = ok(&["evaluate", "--config", s(&config)]);
    assert!(table.contains("runs: 3"), "{table}");
}

#[test]
fn missing_input_exits_one() {
    let out = xadg(&[
        "extract",
        "--tree",
        "/nonexistent/tree.json",
        "--out",
        "/tmp/never.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(xadg(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(xadg(&["fit-tree"]).status.code(), Some(2));
}

#[test]
fn unknown_fallback_class_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.json");
    let car = data("car.csv");
    ok(&[
        "build-xadg",
        "--data",
        s(&car),
        "--recipe",
        s(&data("recipes/cars.toml")),
        "--max-depth",
        "2",
        "--out",
        s(&graph),
    ]);
    let out = xadg(&[
        "classify",
        "--xadg",
        s(&graph),
        "--data",
        s(&car),
        "--fallback",
        "nope",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
