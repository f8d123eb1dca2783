//! End-to-end tests of the binary: subcommands, file outputs, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn dcapep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcapep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tightness_compares_run_and_bound() {
    let o = dcapep(&["tightness", "--l1", "8", "--n", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("difference = 0.000e0"), "{out}");

    // observed = bound = sqrt(0.5)
    let o = dcapep(&["tightness", "--l1", "2", "--n", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("7.071067811865"), "{out}");

    // precondition failure is a configuration error (exit 2)
    let o = dcapep(&["tightness", "--l1", "1", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("U = sqrt(2/(L1(N+1))) < 1"));
}

#[test]
fn run_writes_deterministic_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("instance.toml");
    std::fs::write(&cfg, "family = \"tightness\"\n[params]\nl1 = 8.0\nn = 3\n").unwrap();
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    for out in [&out1, &out2] {
        let o = dcapep(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--stop",
            "gap",
            "--eps",
            "1e-13",
            "--max-iter",
            "3",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(out1.join("trace.csv")).unwrap();
    let b = std::fs::read(out2.join("trace.csv")).unwrap();
    assert_eq!(a, b, "two runs must produce byte-identical traces");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("k,x_0,gap,T,f1,f2,f\n"), "{text}");
    assert_eq!(text.lines().count(), 5); // header + 4 iterates
}

#[test]
fn pep_export_then_solve_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = dcapep(&[
        "pep",
        "export",
        "--kind",
        "p3",
        "--l1",
        "8",
        "--l2",
        "inf",
        "--n",
        "3",
        "--delta",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file = dir.path().join("pep.dat-s");
    assert!(file.exists());
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains("*PEPMETA spec kind=p3"));

    let o = dcapep(&["pep", "solve", "--input", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("objective: 3.9999"), "{out}");
}

#[test]
fn certify_reports_printed_and_repaired() {
    let o = dcapep(&["certify", "--theorem", "decrease-b2", "--samples", "120"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("printed"), "{out}");
    assert!(out.contains("repaired"), "{out}");
    let printed_failures = out
        .lines()
        .filter(|l| l.contains(",printed,") && l.ends_with("false"))
        .count();
    assert!(printed_failures > 0, "printed defect must be visible:\n{out}");
    for line in out.lines().filter(|l| l.contains(",repaired,")) {
        assert!(line.ends_with("true"), "repaired must verify: {line}");
    }
}

fn write_sweep_grid(path: &Path, body: &str) {
    std::fs::write(path, body).unwrap();
}

#[test]
fn sweep_grid_bound_dominates_pep() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.toml");
    write_sweep_grid(
        &grid,
        "l1 = [1.0, 2.0, 4.0]\nl2 = [1.0, 2.0, 4.0]\nmu1 = [0.0]\nmu2 = [0.0]\nn = [2]\ndelta = 1.0\n",
    );
    let o = dcapep(&[
        "sweep",
        "--kind",
        "p3",
        "--grid",
        grid.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).filter(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 9, "{out}");
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let bound: f64 = f[8].parse().unwrap();
        let pep: f64 = f[9].parse().unwrap();
        assert!(pep <= bound + 1e-6, "row {row}");
        assert_eq!(f[11], "true", "certificate check in row {row}");
    }
}

#[test]
fn sweep_empty_grid_yields_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.toml");
    write_sweep_grid(&grid, "l1 = []\nl2 = [1.0]\nn = [2]\n");
    let o = dcapep(&["sweep", "--kind", "p3", "--grid", grid.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("kind,"));
}

#[test]
fn sweep_marks_inapplicable_rows() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.toml");
    write_sweep_grid(&grid, "l1 = [\"inf\"]\nl2 = [\"inf\"]\nn = [2]\n");
    let o = dcapep(&["sweep", "--kind", "p3", "--grid", grid.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    let f: Vec<&str> = row.split(',').collect();
    assert!(f[8].is_empty() && f[9].is_empty(), "no values expected: {row}");
    assert!(
        f[12].contains("finite"),
        "note must name the inapplicability: {row}"
    );
}

#[test]
fn bound_csv_has_constants() {
    let o = dcapep(&[
        "bound",
        "--theorem",
        "thm31-i",
        "--mu1",
        "0.3",
        "--l1",
        "2",
        "--mu2",
        "0.9",
        "--l2",
        "1.5",
        "--n",
        "2",
        "--delta",
        "1",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("A="), "{out}");
    assert!(out.contains("thm31-i"), "{out}");
}

#[test]
fn counterexample_demonstrates_rule_divergence() {
    let o = dcapep(&["counterexample", "--iters", "30"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("gradient-gap rule fired: false"), "{out}");
    assert!(out.contains("min gap = 1.000000000000000e0"), "{out}");
}
