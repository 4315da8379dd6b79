use std::path::PathBuf;
use std::process::{Command, Output};

use bitrade::io::BitradeDoc;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn bitrade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitrade")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn validate_example_4x5() {
    let o = bitrade(&["validate", &path("bitrade_4x5.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("spherical, s=12, m=14, genus 0"));
}

#[test]
fn validate_toroidal() {
    let o = bitrade(&["validate", &path("toroidal_star.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("s=18"));
    assert!(stdout(&o).contains("genus 1"));
}

#[test]
fn malformed_json_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"star\": [").unwrap();
    let o = bitrade(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn axiom_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.json");
    std::fs::write(
        &f,
        r#"{"star":[["r0","c0","s0"],["r0","c1","s1"],["r1","c0","s1"],["r1","c1","s0"]],
           "delta":[["r0","c0","s1"],["r0","c1","s0"],["r1","c0","s0"],["r1","c1","s0"]]}"#,
    )
    .unwrap();
    let o = bitrade(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error:"));
}

#[test]
fn validate_json_round_trips_to_canonical_form() {
    let o = bitrade(&["validate", "--json", &path("bitrade_4x5.json")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let doc: BitradeDoc = serde_json::from_value(v["canonical"].clone()).unwrap();
    let t = bitrade::build_bitrade(&doc.clone().into_input()).unwrap();
    assert_eq!(t, bitrade::corpus::example_4x5());
    assert_eq!(BitradeDoc::from_bitrade(&t), doc);
}

#[test]
fn solve_example_4x5() {
    let o = bitrade(&["solve", &path("bitrade_4x5.json"), "--pivot", "r0,c0,s4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("r1=2/7"));
    assert!(s.contains("s3=11/14"));
    assert!(s.contains("width 14"));
}

#[test]
fn solve_intercalate_json() {
    let o = bitrade(&["solve", "--json", &path("intercalate.json")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["width"], 2);
    assert_eq!(v["rows"][1][1], "1/2");
    assert_eq!(v["cols"][1][1], "1/2");
    assert_eq!(v["syms"][1][1], "1/2");
}

#[test]
fn solve_toroidal_exits_4() {
    let o = bitrade(&["solve", &path("toroidal_star.json")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("rank 15"));
}

#[test]
fn unknown_pivot_is_a_usage_failure() {
    let o = bitrade(&["solve", &path("intercalate.json"), "--pivot", "r0,c0,s1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dissect_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("example.svg");
    let o = bitrade(&["dissect", &path("bitrade_4x5.json"), "--pivot", "r0,c0,s4", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("separated dissection: true"));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(
        text.matches("<polygon class=\"upright\"").count() + text.matches("<polygon class=\"inverted\"").count(),
        12
    );
}

#[test]
fn dissect_collision_exits_5() {
    let o = bitrade(&["dissect", &path("nested_intercalate.json"), "--pivot", "r1,c1,s0"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("r0 and r2"));
}

#[test]
fn embed_reports() {
    let o = bitrade(&["embed", &path("intercalate.json")]);
    assert!(stdout(&o).starts_with("G = Z^2 + Z2; H = Z2; embeddable"));
    let o = bitrade(&["embed", &path("toroidal_delta.json")]);
    assert!(stdout(&o).contains("H = Z10"));
    let o = bitrade(&["embed", &path("toroidal_star.json")]);
    assert!(stdout(&o).contains("not embeddable; witness pair"));
}

#[test]
fn separate_example_rows() {
    let o = bitrade(&["separate", &path("bitrade_4x5.json"), "--pair", "r0", "r2", "--coord", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("modulus 14"));
    assert!(s.contains("values 0 vs 5"));
}

#[test]
fn separate_nested_recurses_once() {
    let o = bitrade(&[
        "separate",
        &path("nested_intercalate.json"),
        "--pivot",
        "r1,c1,s0",
        "--pair",
        "s0",
        "s2",
        "--coord",
        "sym",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["depth"], 1);
    assert_eq!(v["homotopy"]["modulus"], 4);
}

#[test]
fn trigon_listing() {
    assert_eq!(stdout(&bitrade(&["trigons", &path("intercalate.json")])).trim(), "none");
    let s = stdout(&bitrade(&["trigons", &path("nested_intercalate.json")]));
    assert_eq!(s.lines().count(), 1);
    assert!(s.starts_with("(r2,c2,s0)"));
}

#[test]
fn report_is_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["bitrade_4x5.json", "intercalate.json", "toroidal_star.json"] {
        std::fs::copy(data(name), dir.path().join(name)).unwrap();
    }
    std::fs::write(dir.path().join("zz_broken.json"), "not json").unwrap();
    let d = dir.path().to_str().unwrap();
    let a = stdout(&bitrade(&["report", d, "--jobs", "1"]));
    let b = stdout(&bitrade(&["report", d, "--jobs", "3"]));
    assert_eq!(a, b);
    let mut rdr = csv::Reader::from_reader(a.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "file",
            "pivot",
            "status",
            "s",
            "m",
            "genus",
            "separated_solution",
            "width",
            "trigons",
            "h_invariants",
            "det_b1m"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4 + 12 + 18 + 1);
    let row = rows.iter().find(|r| r[0].ends_with("bitrade_4x5.json") && &r[1] == "(r0,c0,s4)").unwrap();
    assert_eq!((&row[7], &row[9], &row[10]), ("14", "Z14", "14"));
    assert!(rows.iter().filter(|r| r[0].ends_with("toroidal_star.json")).all(|r| &r[2] == "singular"));
    assert!(rows.last().unwrap()[2].starts_with("parse error"));
}
