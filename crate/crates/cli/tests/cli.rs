use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ghcloud(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghcloud"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TRIANGLE: &str = "points 3 strict\n0 3 4\n3 0 5\n4 5 0\n";
const SEGMENT: &str = "points 2 strict\n0 2\n2 0\n";

#[test]
fn gh_csv_row_matches_enumeration() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.msp", TRIANGLE);
    let y = write(&dir, "y.msp", SEGMENT);
    let out = ghcloud(&["--csv", "gh", s(&x), s(&y), "--enumerate-oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let row = stdout(&out);
    let fields: Vec<&str> = row.trim().split(',').collect();
    assert_eq!(fields.len(), 4);
    assert_eq!(fields[0], fields[3]);
    assert_eq!(fields[0], "3/2");
}

#[test]
fn gh_writes_witness() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.msp", TRIANGLE);
    let w = dir.path().join("w.corr");
    let out = ghcloud(&["gh", s(&x), s(&x), "--sequential", "--witness", s(&w)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("d_GH = 0"));
    assert!(fs::read_to_string(&w).unwrap().lines().any(|l| l.trim() == "0 0"));
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.msp", TRIANGLE);
    let bad = write(&dir, "bad.msp", "points 3 strict\n0 1 5\n1 0 1\n5 1 0\n");
    let broken = write(&dir, "broken.msp", "points 2 strict\n0 x\n1 0\n");
    assert_eq!(ghcloud(&["validate", s(&good)]).status.code(), Some(0));
    let out = ghcloud(&["--csv", "validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("false,,,"));
    let out = ghcloud(&["validate", s(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    assert_eq!(ghcloud(&["validate", "/nonexistent.msp"]).status.code(), Some(2));
}

#[test]
fn glue_pair_writes_carrier_and_provenance() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.msp", TRIANGLE);
    let y = write(&dir, "y.msp", SEGMENT);
    let r = write(&dir, "r.corr", "0 0\n1 1\n2 1\n");
    let z = dir.path().join("z.msp");
    let out = ghcloud(&["--csv", "glue", "--pair", s(&x), s(&y), s(&r), "-o", s(&z)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let fields: Vec<String> = stdout(&out).trim().split(',').map(String::from).collect();
    assert_eq!(fields[2], fields[3]);
    assert_eq!(fields[4], "true");
    let carrier = fs::read_to_string(&z).unwrap();
    assert!(carrier.starts_with("points 5 "));
    let prov = fs::read_to_string(dir.path().join("z.msp.prov")).unwrap();
    assert_eq!(prov.lines().count(), 5);
    let out = ghcloud(&["validate", s(&z)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn glue_tree_reports_every_edge() {
    let dir = TempDir::new().unwrap();
    write(&dir, "a.msp", TRIANGLE);
    write(&dir, "b.msp", SEGMENT);
    write(&dir, "c.msp", "points 1 strict\n0\n");
    write(&dir, "ab.corr", "0 0\n1 1\n2 1\n");
    write(&dir, "ac.corr", "0 0\n1 0\n2 0\n");
    let tree = write(
        &dir,
        "t.tree",
        "vertex 0 a.msp\nvertex 1 b.msp\nvertex 2 c.msp\nedge 0 1 ab.corr\nedge 0 2 ac.corr\n",
    );
    let out = ghcloud(&["--csv", "glue", "--tree", s(&tree)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows[1].starts_with("0,2,5/2,5/2"));
}

#[test]
fn glue_rejects_both_sources() {
    let out = ghcloud(&["glue"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hedgehog_commands() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.hh", "3\n1 2\n");
    let b = write(&dir, "b.hh", "1\n3\n1\n");
    let c = write(&dir, "c.hh", "5/2\n1 2\n");
    let out = ghcloud(&["hedgehog", "compile", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("points 4 strict"));
    assert_eq!(stdout(&ghcloud(&["--csv", "hedgehog", "iso", s(&a), s(&b)])).trim(), "true");
    assert_eq!(stdout(&ghcloud(&["--csv", "hedgehog", "iso", s(&a), s(&c)])).trim(), "false");
    let out = ghcloud(&["--csv", "hedgehog", "bucket", s(&a), s(&c), "--eps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim().ends_with(",true"));
    let out = ghcloud(&["--csv", "hedgehog", "bucket", s(&a), s(&c), "--eps", "1/4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), ",,,false");
}

#[test]
fn needles_single_index() {
    let dir = TempDir::new().unwrap();
    let out = ghcloud(&["--csv", "needles", "--n", "10", "--k", "20", "--m", "3", "-o", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "3,true,1/3,1/3");
    for f in ["X.msp", "Y.msp", "map.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(ghcloud(&["needles", "--n", "3", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn limit_of_a_budgeted_chain() {
    let dir = TempDir::new().unwrap();
    write(&dir, "x1.msp", "points 2 strict\n0 1\n1 0\n");
    write(&dir, "x2.msp", "points 3 strict\n0 5/4 5/4\n5/4 0 0\n5/4 0 0\n");
    write(&dir, "x3.msp", "points 2 strict\n0 9/8\n9/8 0\n");
    write(&dir, "r1.corr", "0 0\n1 1\n1 2\n");
    write(&dir, "r2.corr", "0 0\n1 1\n2 1\n");
    let chain = write(
        &dir,
        "c.chain",
        "budget\nspace x1.msp\nlink r1.corr\nspace x2.msp\nlink r2.corr\nspace x3.msp\n",
    );
    let out = ghcloud(&["--csv", "limit", s(&chain)]);
    // x2 is a pseudometric written as strict, so the file is refused.
    assert_eq!(out.status.code(), Some(2));

    write(&dir, "x2.msp", "points 3 pseudo\n0 5/4 5/4\n5/4 0 0\n5/4 0 0\n");
    let limit = dir.path().join("lim.msp");
    let out = ghcloud(&["--csv", "limit", s(&chain), "-o", s(&limit)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(fs::read_to_string(&limit).unwrap().starts_with("points "));
}

#[test]
fn probe_center_and_stabilizer() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.msp", TRIANGLE);
    let out = ghcloud(&["--csv", "probe", s(&x), "--lambdas", "1/2,1,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1/2,5/4,5/4,true\n1,0,0,true\n3,5,5,true\n");

    let out = ghcloud(&["--csv", "center", s(&x), "--lambda", "1/2", "--n", "4", "--geometric"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("4,5/16,"));

    let out = ghcloud(&["--csv", "stab", s(&x), "--samples", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = stdout(&out);
    assert!(rows.lines().any(|l| l == "1,true,true,true"));
    assert!(rows.lines().any(|l| l == "2,false,false,true"));

    let h = write(&dir, "h.hh", "1 2\n3\n");
    let out = ghcloud(&["stab", "--hedgehog", s(&h)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("stabilizer: {1}"));
}

#[test]
fn generate_is_deterministic() {
    for args in [
        &["generate", "random-metric", "--seed", "11", "--points", "6"][..],
        &["generate", "dense-spec", "--seed", "11", "--count", "5"][..],
    ] {
        let a = ghcloud(args);
        let b = ghcloud(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let other = ghcloud(&["generate", "random-metric", "--seed", "12", "--points", "6"]);
    let first = ghcloud(&["generate", "random-metric", "--seed", "11", "--points", "6"]);
    assert_ne!(other.stdout, first.stdout);

    let out = ghcloud(&["generate", "grid-hedgehog", "--eps", "1/4", "--max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| !l.trim().is_empty()).count(), 8);
}

#[test]
fn generated_space_validates() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("g.msp");
    let out = ghcloud(&["generate", "random-metric", "--seed", "3", "--denom", "2", "-o", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(ghcloud(&["validate", s(&p)]).status.code(), Some(0));
}

#[test]
fn verify_suite_passes() {
    let out = Command::new(env!("CARGO_BIN_EXE_ghcloud"))
        .args(["--csv", "verify", "--suite", "all", "--seed", "7"])
        .env("GH_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.contains(",pass,")));
}

#[test]
fn bad_worker_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_ghcloud"))
        .args(["generate", "random-metric"])
        .env("GH_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
