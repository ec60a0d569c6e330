use std::path::Path;
use std::process::{Command, Output};

use oneshot_core::Multicoloring;

fn oneshot(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oneshot"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = oneshot(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

const GEN: [&str; 13] = [
    "gen", "--model", "gnp", "--n", "100", "--p", "0.05", "--N", "1000", "--seed", "7", "-o",
    "g.el",
];

#[test]
fn gen_is_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &GEN);
    let first = std::fs::read(dir.path().join("g.el")).unwrap();
    ok(dir.path(), &GEN);
    assert_eq!(std::fs::read(dir.path().join("g.el")).unwrap(), first);
    assert!(String::from_utf8(first).unwrap().starts_with("# N=1000"));
}

#[test]
fn run_output_verifies_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &GEN);
    ok(
        d,
        &[
            "run",
            "--algo",
            "randomized",
            "--eps",
            "0.5",
            "--seed",
            "11",
            "-g",
            "g.el",
            "-o",
            "out.json",
            "--trace",
            "trace.json",
        ],
    );
    let m =
        Multicoloring::from_json(&std::fs::read_to_string(d.join("out.json")).unwrap()).unwrap();
    assert_eq!(m.params.seed, 11);
    assert_eq!(m.params.algorithm, "randomized");
    assert_eq!(m.params.version, env!("CARGO_PKG_VERSION"));
    ok(d, &["verify", "-g", "g.el", "-c", "out.json"]);

    ok(
        d,
        &[
            "export",
            "-g",
            "g.el",
            "-c",
            "out.json",
            "--format",
            "csv",
            "-o",
            "slots.csv",
        ],
    );
    let csv = std::fs::read_to_string(d.join("slots.csv")).unwrap();
    assert!(csv.starts_with("node,slot\n"));

    let stats = ok(
        d,
        &[
            "stats",
            "-g",
            "g.el",
            "-c",
            "out.json",
            "--trace",
            "trace.json",
        ],
    );
    let text = String::from_utf8(stats.stdout).unwrap();
    assert!(text.starts_with("degree,nodes,min_colors,required,rho,meets_target\n"));
    assert!(text.contains("message_count"));
}

#[test]
fn every_algorithm_runs_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--model", "stars", "--count", "5", "--degree", "3", "--N", "60", "--seed", "1",
            "-o", "s.el",
        ],
    );
    for algo in [
        "randomized",
        "shared-order",
        "algebraic-basic",
        "algebraic-weighted",
    ] {
        ok(
            d,
            &[
                "run", "--algo", algo, "--seed", "2", "-g", "s.el", "-o", "c.json",
            ],
        );
        ok(d, &["verify", "-g", "s.el", "-c", "c.json"]);
    }
}

#[test]
fn nbrgraph_reports_counts_and_chi() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        dir.path(),
        &["nbrgraph", "--N", "3", "--Delta", "1", "--chi"],
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "vertices=6 edges=3 chi=2"
    );
    let out = ok(
        dir.path(),
        &[
            "nbrgraph",
            "--N",
            "8",
            "--Delta",
            "2",
            "--certify",
            "algebraic-basic",
        ],
    );
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("intersecting=0"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // Usage errors.
    assert_eq!(
        oneshot(d, &["run", "--algo", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        oneshot(d, &["gen", "--model", "gnp", "--N", "10", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
    // Budget exceeded.
    assert_eq!(
        oneshot(d, &["nbrgraph", "--N", "1000", "--Delta", "4"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        oneshot(d, &["nbrgraph", "--N", "30", "--Delta", "3", "--chi"])
            .status
            .code(),
        Some(3)
    );

    // A coloring that reuses a color across an edge fails verification.
    std::fs::write(d.join("k2.el"), "# N=2\n1 2\n").unwrap();
    ok(
        d,
        &[
            "run",
            "--algo",
            "algebraic-basic",
            "-g",
            "k2.el",
            "-o",
            "c.json",
            "--seed",
            "0",
        ],
    );
    let mut m =
        Multicoloring::from_json(&std::fs::read_to_string(d.join("c.json")).unwrap()).unwrap();
    let first = m.assignment[&1].clone();
    m.assignment.insert(2, first);
    std::fs::write(d.join("bad.json"), m.to_json().unwrap()).unwrap();
    assert_eq!(
        oneshot(d, &["verify", "-g", "k2.el", "-c", "bad.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        oneshot(d, &["export", "-g", "k2.el", "-c", "bad.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn missing_seed_is_drawn_and_printed() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        dir.path(),
        &[
            "gen", "--model", "udg", "--n", "20", "--radius", "0.3", "--N", "50",
        ],
    );
    let err = String::from_utf8(out.stderr).unwrap();
    let seed: u64 = err.trim().strip_prefix("seed=").unwrap().parse().unwrap();
    let again = ok(
        dir.path(),
        &[
            "gen",
            "--model",
            "udg",
            "--n",
            "20",
            "--radius",
            "0.3",
            "--N",
            "50",
            "--seed",
            &seed.to_string(),
        ],
    );
    assert_eq!(out.stdout, again.stdout);
}
