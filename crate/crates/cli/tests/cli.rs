use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pmiwasawa_cli::report::{csv_without_runtime, CSV_COLUMNS};

const CURVES: &str = "\
# label a1 a2 a3 a4 a6 conductor
11a1 0 -1 1 -10 -20 11
37a1 0 0 1 -1 0 37
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pmiwasawa"))
}

fn curve_file(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("curves.txt");
    fs::write(&path, text).unwrap();
    path
}

fn sweep(curves: &Path, extra: &[&str]) -> Output {
    bin()
        .arg("sweep")
        .arg("--curves")
        .arg(curves)
        .args(extra)
        .output()
        .unwrap()
}

/// Data lines as `column -> value` maps, read with a plain split.
fn records(stdout: &[u8]) -> Vec<Vec<(String, String)>> {
    let text = String::from_utf8(stdout.to_vec()).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect())
        .collect()
}

fn field<'a>(rec: &'a [(String, String)], name: &str) -> &'a str {
    &rec.iter().find(|(k, _)| k == name).unwrap().1
}

#[test]
fn sweep_covers_only_supersingular_primes() {
    let dir = tempfile::tempdir().unwrap();
    let curves = curve_file(dir.path(), CURVES);
    let out = sweep(&curves, &["--pmax", "30"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out.stdout);
    let cells: Vec<(String, String)> = recs
        .iter()
        .map(|r| (field(r, "label").to_string(), field(r, "p").to_string()))
        .collect();
    let expect = [("11a1", "19"), ("11a1", "29"), ("37a1", "17"), ("37a1", "19")];
    assert_eq!(cells, expect.map(|(a, b)| (a.to_string(), b.to_string())));
    for r in &recs {
        assert_eq!(field(r, "a_p"), "0");
    }
    let r = &recs[0];
    assert_eq!(
        [field(r, "mu_plus"), field(r, "lambda_plus"), field(r, "mu_minus"), field(r, "lambda_minus")],
        ["0", "0", "0", "0"]
    );
    assert_eq!(field(r, "expectation"), "ok");
}

#[test]
fn summary_line_matches_recount() {
    let dir = tempfile::tempdir().unwrap();
    let curves = curve_file(dir.path(), CURVES);
    let out = sweep(&curves, &["--pmax", "30"]);
    let recs = records(&out.stdout);
    let count = |sign: &str, cap: u32| {
        let zero: Vec<_> = recs.iter().filter(|r| field(r, &format!("lambda_{sign}")) == "0").collect();
        let within = zero
            .iter()
            .filter(|r| field(r, &format!("mu_{sign}")).parse::<u32>().is_ok_and(|m| m <= cap))
            .count();
        (within, zero.len())
    };
    let (mw, mz) = count("minus", 1);
    let (pw, pz) = count("plus", 2);
    let anomalies = recs.iter().filter(|r| field(r, "anomaly") == "true").count();
    let expected = format!(
        "{} rows; lambda-=0: {mw}/{mz} with mu-<=1; lambda+=0: {pw}/{pz} with mu+<=2; {anomalies} anomalies",
        recs.len()
    );
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), expected);
}

#[test]
fn empty_range_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let curves = curve_file(dir.path(), CURVES);
    let out = sweep(&curves, &["--pmin", "30", "--pmax", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1], CSV_COLUMNS.join(","));
}

#[test]
fn cache_and_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let curves = curve_file(dir.path(), CURVES);
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let run = |extra: &[&str]| {
        let out = sweep(&curves, &[&["--pmax", "30"], extra].concat());
        assert_eq!(out.status.code(), Some(0));
        csv_without_runtime(&String::from_utf8(out.stdout).unwrap())
    };
    let cold = run(&["--cache", cache]);
    assert!(Path::new(cache).join("11a1.plus.msym").exists());
    let warm = run(&["--cache", cache]);
    let plain = run(&["--jobs", "2"]);
    assert_eq!(cold, warm);
    assert_eq!(cold, plain);

    // a damaged entry is rebuilt, not trusted
    let entry = Path::new(cache).join("37a1.plus.msym");
    let text = fs::read_to_string(&entry).unwrap();
    fs::write(&entry, &text[..text.len() / 2]).unwrap();
    assert_eq!(run(&["--cache", cache]), cold);
    assert_eq!(fs::read_to_string(&entry).unwrap(), text);
}

#[test]
fn json_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let curves = curve_file(dir.path(), CURVES);
    let dumps = dir.path().join("theta");
    let out = sweep(
        &curves,
        &["--pmax", "20", "--format", "json", "--dump-theta", dumps.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["summary"]["rows"], 3);
    let d: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dumps.join("11a1_p19_n1.json")).unwrap()).unwrap();
    assert_eq!(d["basis"], "powers-of-t");
    assert_eq!(d["coefficients"].as_array().unwrap().len(), 19);
}

#[test]
fn bad_configuration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let curves = curve_file(dir.path(), CURVES);
    for extra in [&["--pmin", "3"][..], &["--nmax", "5"], &["--jobs", "0"], &["--format", "xml"]] {
        assert_eq!(sweep(&curves, extra).status.code(), Some(2), "{extra:?}");
    }
    assert_eq!(sweep(&dir.path().join("missing.txt"), &[]).status.code(), Some(2));
    assert_eq!(bin().arg("sweep").output().unwrap().status.code(), Some(2));
}

#[test]
fn malformed_curve_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let curves = curve_file(dir.path(), "11a1 0 -1 1 -10 -20 11\n37a1 0 0 1 x 0 37\n");
    let out = sweep(&curves, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let dup = curve_file(dir.path(), "11a1 0 -1 1 -10 -20 11\n11a1 0 -1 1 -10 -20 11\n");
    assert_eq!(sweep(&dup, &[]).status.code(), Some(2));
}

#[test]
fn curve_at_the_wrong_level_is_an_anomaly() {
    let dir = tempfile::tempdir().unwrap();
    // 11a1 filed at level 121 parses, but its old space has no unique eigenline
    let curves = curve_file(dir.path(), "old 0 -1 1 -10 -20 121\n11a1 0 -1 1 -10 -20 11\n");
    let out = sweep(&curves, &["--pmax", "30"]);
    assert_eq!(out.status.code(), Some(3));
    let recs = records(&out.stdout);
    assert_eq!(recs.len(), 4);
    let bad: Vec<_> = recs.iter().filter(|r| field(r, "label") == "old").collect();
    assert!(bad.iter().all(|r| field(r, "anomaly") == "true" && !field(r, "error").is_empty()));
    // the good curve is unaffected
    assert!(recs.iter().filter(|r| field(r, "label") == "11a1").all(|r| field(r, "anomaly") == "false"));
}

#[test]
fn selftest_passes() {
    let out = bin().args(["selftest", "--seed", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
}
