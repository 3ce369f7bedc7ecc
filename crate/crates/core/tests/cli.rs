use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use curvforge::algebra::{h_map, CurvatureOp};
use curvforge::io;
use curvforge::rational::int;
use curvforge::tensor::Tensor2;
use serde_json::Value;

fn curvforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvforge"))
        .args(args)
        .env_remove("CURVFORGE_MAX_M")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not a report ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn statuses(report: &Value) -> Vec<(String, String)> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect()
}

fn all_pass(report: &Value) -> bool {
    statuses(report).iter().all(|(_, s)| s == "pass")
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn gen(dir: &Path, name: &str, seed: &str, mask: &str) -> PathBuf {
    let p = path(dir, name);
    let out = curvforge(&["gen", "--seed", seed, "--mask", mask, "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn gen_is_deterministic_and_summarized() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.json", "7", "weyl,sym");
    let b = gen(dir.path(), "b.json", "7", "weyl,sym");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = curvforge(&["gen", "--seed", "7", "--mask", "weyl,sym", "--out", a.to_str().unwrap()]);
    let r = report(&out);
    assert_eq!(r["summary"]["components"], "(*,*,0)");
    assert_eq!(r["summary"]["ricci_symmetric"], true);
    assert!(all_pass(&r));

    // without --out the tensor goes to stdout
    let raw = curvforge(&["gen", "--seed", "7", "--mask", "weyl,sym"]);
    assert_eq!(raw.stdout, std::fs::read(&a).unwrap());
}

#[test]
fn gen_none_is_zero_tensor() {
    let out = curvforge(&["gen", "--mask", "none"]);
    let t: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(t["m"], 3);
    assert_eq!(t["entries"].as_array().unwrap().len(), 0);
}

#[test]
fn check_valid_and_corrupted() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.json", "3", "all");
    let out = curvforge(&["check", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(all_pass(&report(&out)));

    let mut t: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    t["entries"][0]["v"] = Value::String("100/1".into());
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, serde_json::to_string(&t).unwrap()).unwrap();
    let out = curvforge(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let anti = &r["checks"][0];
    assert_eq!(anti["name"], "antisymmetry");
    assert_eq!(anti["status"], "fail");
    assert!(anti["witness"]["indices"].is_array());
}

#[test]
fn check_reports_projective_flatness_of_h_image() {
    let theta = Tensor2::from_fn(3, |i, j| int((i * 3 + j) as i64 - 4));
    let a: CurvatureOp = h_map(&theta);
    let dir = tempfile::tempdir().unwrap();
    let p = path(dir.path(), "h.json");
    std::fs::write(&p, io::tensor_to_json(&a)).unwrap();
    let out = curvforge(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["projectively_flat"], true);
    assert_eq!(r["summary"]["weyl_nonzero_entries"], 0);
}

#[test]
fn realize_modes_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let full = gen(dir.path(), "full.json", "11", "all");
    let pf = gen(dir.path(), "pf.json", "11", "sym,alt");
    for (input, mode) in [(&full, "linear"), (&full, "ricci-constant"), (&pf, "projective")] {
        let conn = path(dir.path(), &format!("{mode}.json"));
        let out = curvforge(&[
            "realize",
            input.to_str().unwrap(),
            "--mode",
            mode,
            "--out",
            conn.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{mode}: {}", String::from_utf8_lossy(&out.stdout));
        let r = report(&out);
        assert!(all_pass(&r), "{mode}");
        assert!(statuses(&r).iter().any(|(n, _)| n == "r0_equals_a"));

        let out = curvforge(&["verify", conn.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{mode}");
        let r = report(&out);
        // Full operators carry an alternating Ricci part: no volume form.
        let vp = statuses(&r).into_iter().find(|(n, _)| n == "volume_potential").unwrap();
        assert_eq!(vp.1, "witness", "{mode}");
        assert!(r.get("volume_potential").is_none());
    }
}

#[test]
fn realize_projective_rejects_weyl_input() {
    let dir = tempfile::tempdir().unwrap();
    let full = gen(dir.path(), "full.json", "5", "all");
    let conn = path(dir.path(), "conn.json");
    let out = curvforge(&["realize", full.to_str().unwrap(), "--mode", "projective", "--out", conn.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let check = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "input_projectively_flat").unwrap();
    assert_eq!(check["status"], "fail");
    assert!(check["witness"].is_object());
    assert!(!conn.exists());
}

#[test]
fn zero_tensor_realizes_flat_connection() {
    let dir = tempfile::tempdir().unwrap();
    let zero = gen(dir.path(), "zero.json", "0", "none");
    let out = curvforge(&["realize", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(c["gamma"].as_array().unwrap().len(), 0);

    let flat = path(dir.path(), "flat.json");
    std::fs::write(&flat, &out.stdout).unwrap();
    let out = curvforge(&["verify", flat.to_str().unwrap()]);
    assert!(all_pass(&report(&out)));
}

#[test]
fn verify_emits_volume_potential_for_ricci_symmetric_realizer() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.json", "4", "weyl,sym");
    let conn = path(dir.path(), "c.json");
    curvforge(&["realize", a.to_str().unwrap(), "--out", conn.to_str().unwrap()]);
    let r = report(&curvforge(&["verify", conn.to_str().unwrap()]));
    assert!(all_pass(&r));
    assert!(r["volume_potential"]["terms"].as_array().is_some_and(|t| !t.is_empty()));

    let a = gen(dir.path(), "b.json", "4", "weyl,alt");
    curvforge(&["realize", a.to_str().unwrap(), "--out", conn.to_str().unwrap()]);
    let out = curvforge(&["verify", conn.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let vp = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "volume_potential").unwrap();
    assert_eq!(vp["status"], "witness");
    assert_eq!(vp["witness"]["indices"].as_array().unwrap().len(), 2);
}

#[test]
fn table_is_stable_and_matches() {
    let first = curvforge(&["table", "--m", "3"]);
    assert_eq!(first.status.code(), Some(0));
    let second = curvforge(&["table", "--m", "3"]);
    assert_eq!(first.stdout, second.stdout);
    let r = report(&first);
    let verdicts: Vec<&str> = r["rows"].as_array().unwrap().iter().map(|row| row["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["yes", "yes", "yes", "yes", "yes", "yes", "obstructed", "yes"]);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(curvforge(&["gen", "--mask", "weyl,weyl"]).status.code(), Some(2));
    assert_eq!(curvforge(&["gen", "--m", "2"]).status.code(), Some(2));
    assert_eq!(curvforge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(curvforge(&["check", "/nonexistent/file.json"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, "{\n  \"m\": 3,\n  \"entries\": [\n    {\"i\": 1, \"j\": 2, \"k\": 1, \"l\": 9, \"v\": \"1\"}\n  ]\n}\n").unwrap();
    let out = curvforge(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entries[0].l"));

    std::fs::write(&bad, "{\n  \"m\": 3,\n  \"entries\": [,]\n}\n").unwrap();
    let out = curvforge(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn dimension_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_curvforge"))
        .args(["gen", "--m", "5"])
        .env("CURVFORGE_MAX_M", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dims_report() {
    let out = curvforge(&["dims", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(all_pass(&r));
    assert_eq!(r["checks"][0]["detail"], "weyl=15 sym=6 alt=3 total=24");
}
