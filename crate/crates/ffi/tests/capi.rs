use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use bitrade_ffi::*;

fn data(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn load(name: &str) -> *mut BtBitrade {
    let mut h = ptr::null_mut();
    let s = unsafe { bt_bitrade_from_json(data(name).as_ptr(), &mut h) };
    assert_eq!(s, BtStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    let p = bt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { bt_string_free(s) };
    out
}

#[test]
fn metrics_of_example_4x5() {
    let h = load("bitrade_4x5.json");
    let mut m = BtMetrics::default();
    assert_eq!(unsafe { bt_bitrade_metrics(h, &mut m) }, BtStatus::Ok);
    assert_eq!((m.size, m.m, m.genus), (12, 14, 0));
    assert!(m.spherical && m.separated);
    assert!(bt_last_error().is_null());
    unsafe { bt_bitrade_free(h) };
}

#[test]
fn solve_returns_json() {
    let h = load("intercalate.json");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bt_solve_json(h, 0, &mut out) }, BtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["width"], 2);
    assert_eq!(unsafe { bt_solve_json(h, 9, &mut out) }, BtStatus::OutOfRange);
    unsafe { bt_bitrade_free(h) };
}

#[test]
fn singular_system_status() {
    let h = load("toroidal_star.json");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bt_solve_json(h, 0, &mut out) }, BtStatus::Singular);
    assert!(last_error().contains("singular"));
    unsafe { bt_bitrade_free(h) };
}

#[test]
fn dissect_and_collision() {
    let h = load("bitrade_4x5.json");
    let mut out = ptr::null_mut();
    let t = bitrade::corpus::example_4x5();
    let pivot = t.star().iter().position(|x| t.triple_names(x) == ["r0", "c0", "s4"]).unwrap();
    assert_eq!(unsafe { bt_dissect_svg(h, pivot, true, &mut out) }, BtStatus::Ok);
    assert!(take(out).contains("<svg"));
    unsafe { bt_bitrade_free(h) };

    let h = load("nested_intercalate.json");
    let statuses: Vec<BtStatus> = (0..8).map(|p| unsafe { bt_dissect_svg(h, p, false, &mut out) }).collect();
    assert!(statuses.contains(&BtStatus::NotSeparated));
    unsafe { bt_bitrade_free(h) };
}

#[test]
fn embed_json_and_trigons() {
    let h = load("toroidal_delta.json");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bt_embed_json(h, &mut out) }, BtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["H"]["text"], "Z10");
    unsafe { bt_bitrade_free(h) };

    let h = load("nested_intercalate.json");
    assert_eq!(unsafe { bt_trigon_count(h) }, 1);
    unsafe { bt_bitrade_free(h) };
}

#[test]
fn error_codes_for_bad_input() {
    let mut h = ptr::null_mut();
    let bad = CString::new("{\"star\": [").unwrap();
    assert_eq!(unsafe { bt_bitrade_from_json(bad.as_ptr(), &mut h) }, BtStatus::Parse);
    assert!(h.is_null());
    assert!(last_error().contains("malformed"));

    let broken = CString::new(
        r#"{"star":[["r0","c0","s0"],["r0","c1","s1"],["r1","c0","s1"],["r1","c1","s0"]],
           "delta":[["r0","c0","s1"],["r0","c1","s0"],["r1","c0","s0"],["r1","c1","s0"]]}"#,
    )
    .unwrap();
    assert_eq!(unsafe { bt_bitrade_from_json(broken.as_ptr(), &mut h) }, BtStatus::Axiom);

    assert_eq!(unsafe { bt_bitrade_from_json(ptr::null(), &mut h) }, BtStatus::NullArgument);
    assert_eq!(unsafe { bt_trigon_count(ptr::null()) }, -1);
    unsafe { bt_bitrade_free(ptr::null_mut()) };
    unsafe { bt_string_free(ptr::null_mut()) };
}

#[test]
fn header_declares_the_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/bitrade.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "bt_bitrade_from_json",
        "bt_bitrade_free",
        "bt_bitrade_metrics",
        "bt_solve_json",
        "bt_dissect_svg",
        "bt_embed_json",
        "bt_trigon_count",
        "bt_last_error",
        "bt_string_free",
        "typedef struct BtBitrade BtBitrade;",
        "BT_STATUS_NOT_SEPARATED = 5",
    ] {
        assert!(text.contains(f), "header lacks {f}");
    }
    // Compile check when a C compiler is available.
    if let Ok(o) = std::process::Command::new("cc").args(["-std=c99", "-fsyntax-only", "-x", "c"]).arg(&header).output()
    {
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
}

/// Builds and runs a C program against the static library.
#[test]
fn c_program_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libbitrade_ffi.a");
    if !lib.exists() || std::process::Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let o = std::process::Command::new("cc")
        .arg("-std=c99")
        .arg("-I")
        .arg(root.join("include"))
        .arg(root.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let run = std::process::Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok 6");
}
