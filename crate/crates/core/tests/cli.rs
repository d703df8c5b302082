use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covsketch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_sketch_solve_and_simulate_agree() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let sketch = dir.path().join("sketch.txt");
    let from_sketch = dir.path().join("a.sol");
    let from_sim = dir.path().join("b.sol");
    let report = dir.path().join("report.txt");

    ok(&[
        "generate",
        "planted",
        "--k",
        "10",
        "--m",
        "4000",
        "--kprime",
        "300",
        "--eps",
        "0.2",
        "--seed",
        "3",
        "--out",
        p(&inst),
    ]);
    assert!(dir.path().join("inst.txt.opt").exists());

    let args = ["--k", "10", "--eps", "0.9", "--delta-dprime", "0.02", "--seed", "11"];
    let mut sk = vec!["sketch", "--in", p(&inst), "--theory", "--out", p(&sketch)];
    sk.extend(args);
    let stats = ok(&sk);
    assert!(stats.contains("edges_in=") && stats.contains("ratio="), "{stats}");

    ok(&["solve", "--in", p(&sketch), "--k", "10", "--out", p(&from_sketch)]);
    let mut sim = vec![
        "simulate",
        "--in",
        p(&inst),
        "--machines",
        "6",
        "--out",
        p(&from_sim),
        "--report",
        p(&report),
    ];
    sim.extend(args);
    ok(&sim);

    assert_eq!(fs::read(&from_sketch).unwrap(), fs::read(&from_sim).unwrap());
    let report = fs::read_to_string(&report).unwrap();
    assert_eq!(report.lines().filter(|l| l.starts_with("machine=")).count(), 6 * 4);
    assert!(report.contains("divergence=false"), "{report}");
}

#[test]
fn rho_one_keeps_every_edge() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let sketch = dir.path().join("sketch.txt");
    ok(&[
        "generate",
        "adversarial",
        "--n",
        "10",
        "--k",
        "2",
        "--beta",
        "2",
        "--seed",
        "1",
        "--out",
        p(&inst),
    ]);
    let stats = ok(&[
        "sketch",
        "--in",
        p(&inst),
        "--rho",
        "1",
        "--sigma",
        "1000000",
        "--out",
        p(&sketch),
    ]);
    assert!(stats.contains("ratio=1.0000"), "{stats}");
}

#[test]
fn brute_force_matches_generated_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    ok(&[
        "generate",
        "adversarial",
        "--n",
        "10",
        "--k",
        "2",
        "--beta",
        "2",
        "--seed",
        "4",
        "--out",
        p(&inst),
    ]);
    let out = ok(&["solve", "--in", p(&inst), "--k", "2", "--solver", "brute-force"]);
    assert!(out.starts_with("value=30 k=2"), "{out}");
}

#[test]
fn set_cover_with_outliers_reaches_required_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    ok(&[
        "generate",
        "planted",
        "--k",
        "5",
        "--m",
        "500",
        "--kprime",
        "20",
        "--eps",
        "0.2",
        "--seed",
        "2",
        "--out",
        p(&inst),
    ]);
    for engine in ["direct", "sketch"] {
        let out = ok(&[
            "solve",
            "--in",
            p(&inst),
            "--problem",
            "setcover-outliers",
            "--lambda",
            "0.05",
            "--eps",
            "0.2",
            "--engine",
            engine,
        ]);
        let value: u64 = out.split_whitespace().next().unwrap()["value=".len()..]
            .parse()
            .unwrap();
        assert!(value >= 475, "{engine}: {out}");
    }
}

#[test]
fn timestamp_header_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let args = [
        "generate", "planted", "--k", "2", "--m", "20", "--kprime", "3", "--eps", "0.2", "--seed", "1",
    ];
    let mut with = args.to_vec();
    with.extend(["--out", p(&a)]);
    ok(&with);
    let mut without = vec!["--no-timestamp"];
    without.extend(args);
    without.extend(["--out", p(&b)]);
    ok(&without);
    let a = fs::read_to_string(a).unwrap();
    let b = fs::read_to_string(b).unwrap();
    assert!(a.contains("generated_at="));
    assert!(!b.contains("generated_at="));
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("generated_at="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn experiment_writes_csv_with_mean_rows() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("sweep.spec");
    let csv = dir.path().join("out.csv");
    fs::write(
        &spec,
        "generator = planted k=5 m=500 kprime=40 eps=0.2 seed=1\nrho = 0.2, 1\nsigma = 1000\nk = 5\nseeds = 1, 2\n",
    )
    .unwrap();
    ok(&["--no-timestamp", "experiment", "--spec", p(&spec), "--out", p(&csv)]);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rho,sigma,k,seed,sketch_edges,sketch_ratio,coverage,baseline_coverage,quality_ratio"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 3);
    assert_eq!(rows.iter().filter(|r| r.contains(",mean,")).count(), 2);
    let full_mean = rows
        .iter()
        .find(|r| r.starts_with("1,") && r.contains(",mean,"))
        .unwrap();
    assert!(full_mean.ends_with(",1"), "{full_mean}");
}

#[test]
fn exit_codes() {
    let missing = run(&["solve", "--k", "3"]);
    assert_eq!(missing.status.code(), Some(2));

    let gone = run(&["solve", "--in", "/nonexistent/inst.txt", "--k", "3"]);
    assert_eq!(gone.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&gone.stderr).starts_with("error:"));

    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    ok(&[
        "generate",
        "planted",
        "--k",
        "2",
        "--m",
        "20",
        "--kprime",
        "3",
        "--eps",
        "0.2",
        "--seed",
        "1",
        "--out",
        p(&inst),
    ]);
    let one_machine = run(&[
        "simulate",
        "--in",
        p(&inst),
        "--machines",
        "1",
        "--k",
        "2",
        "--eps",
        "0.5",
    ]);
    assert_eq!(one_machine.status.code(), Some(1));
    let too_many = run(&[
        "sketch",
        "--in",
        p(&inst),
        "--theory",
        "--k",
        "99",
        "--eps",
        "0.5",
        "--out",
        p(&dir.path().join("s")),
    ]);
    assert_eq!(too_many.status.code(), Some(1));
}
