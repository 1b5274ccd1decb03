//! End-to-end runs of the binary: exit codes, deterministic output, and the
//! documented subcommand surfaces.

use std::path::Path;
use std::process::{Command, Output};

fn run_bin(args: &[&str], spec: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radtower"));
    cmd.arg(args[0]);
    for a in &args[1..] {
        cmd.arg(a);
    }
    cmd.arg("--spec").arg(spec);
    cmd.output().expect("binary runs")
}

fn write_spec(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const EXAMPLE: &str = "p = 3\nvars = X, Y\nradicand { f = \"X^3 + 9\", n = 3 }\nradicand { f = \"Y^3 + 9\", n = 3 }\nseed = 11\nsamples = 25\n";

#[test]
fn basis_emits_the_nine_lines() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "ex.spec", EXAMPLE);
    let out = run_bin(&["basis"], &spec);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "3^-0 * 1");
    assert_eq!(lines[8], "3^-2 * (w1 - X)^2 * (w2 - Y)^2");
}

#[test]
fn verify_is_byte_identical_and_green() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "ex.spec", EXAMPLE);
    let a = run_bin(&["verify"], &spec);
    let b = run_bin(&["verify"], &spec);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("result: all hypotheses verified"));
    assert!(text.contains("result: ring closure verified"));
    assert!(text.contains("result: all witness identities hold"));
    assert!(text.contains("result: oracle agrees with basis reduction"));
    // section order is pinned
    let idx = |s: &str| text.find(s).unwrap_or_else(|| panic!("missing {s}"));
    assert!(idx("= hypotheses =") < idx("= basis ="));
    assert!(idx("= basis =") < idx("= closure ="));
    assert!(idx("= closure =") < idx("= witnesses ="));
    assert!(idx("= witnesses =") < idx("= oracle ="));
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_spec(dir.path(), "good.spec", EXAMPLE);
    assert_eq!(run_bin(&["check"], &good).status.code(), Some(0));

    let bad = write_spec(
        dir.path(),
        "bad.spec",
        "p = 3\nvars = X\nradicand { f = \"X^3 + 3\", n = 3 }\n",
    );
    let out = run_bin(&["check"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("not a p-th power modulo p^2"));

    let unparseable = write_spec(dir.path(), "syntax.spec", "p = 3\nvars = X\nwat\n");
    let out = run_bin(&["check"], &unparseable);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reduce_both_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "ex.spec", EXAMPLE);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radtower"));
    let out = cmd
        .args(["reduce", "3^-2 * (w1 - X)^2 * (w2 - Y)^2", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("in module: yes"));
    assert!(text.contains("3^-2 * (w1 - X)^2 * (w2 - Y)^2  :  1"));

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radtower"));
    let out = cmd
        .args(["reduce", "3^-1 * 1", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("in module: no"));
    assert!(text.contains("residual coefficient: 1"));
}

#[test]
fn pipeline_on_factored_input() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "pipe.spec",
        "p = 3\nvars = x, y\nradicand { f = \"(x*y^4 + 9) * (x^4*y + 9)^2\", n = 3 }\nfactor { radicand = 1, q = \"x*y^4 + 9\", c = 1 }\nfactor { radicand = 1, q = \"x^4*y + 9\", c = 2 }\n",
    );
    let out = run_bin(&["pipeline"], &spec);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("common k = 3"));
    assert!(text.contains("rank 9 = 3^2"));
    assert!(text.contains("result: pipeline verified"));

    // a core with no p-th root anywhere fails with the stage named
    let bad = write_spec(
        dir.path(),
        "pipebad.spec",
        "p = 3\nvars = x, y\nradicand { f = \"x + 3\", n = 3 }\n",
    );
    let out = run_bin(&["pipeline"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("no k in [3] certifies"));
}

#[test]
fn disjoint_flow() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "mix.spec",
        "p = 3\nvars = X, Y\nradicand { f = \"X^3 + 9\", n = 3 }\ndisjoint { g = \"Y\" }\nsamples = 10\n",
    );
    let out = run_bin(&["disjoint"], &spec);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("linearly disjoint modulo 3"));
    assert!(text.contains("rank 9 = 3^2"));
    assert!(text.contains("result: ring closure verified"));
    // the mixed tower also passes full verification
    let out = run_bin(&["verify"], &spec);
    assert_eq!(out.status.code(), Some(0));

    let bad = write_spec(
        dir.path(),
        "baddisj.spec",
        "p = 3\nvars = x, y\ndisjoint { g = \"x\" }\ndisjoint { g = \"x^2*y^3\" }\n",
    );
    let out = run_bin(&["disjoint"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("witness exponents [1, 1]"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "ex.spec", EXAMPLE);
    let out_path = dir.path().join("report.txt");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radtower"));
    let out = cmd
        .arg("basis")
        .arg("--spec")
        .arg(&spec)
        .arg("--output")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written.lines().count(), 9);
}

#[test]
fn seed_changes_oracle_samples_but_not_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "ex.spec", EXAMPLE);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radtower"));
    let a = cmd
        .args(["verify", "--seed", "1", "--samples", "15", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radtower"));
    let b = cmd
        .args(["verify", "--seed", "2", "--samples", "15", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
}
