use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn eddeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eddeg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn records(dir: &Path) -> Vec<Value> {
    std::fs::read_to_string(dir.join("runs.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn counts_of_the_conjugate_product() {
    let spec = fixture("varieties/nodal_product.json");
    let spec = spec.to_str().unwrap();
    let unit = eddeg(&["count", spec, "--weights", "unit"]);
    assert_eq!((code(&unit), stdout(&unit).as_str()), (0, "18"));
    let generic = eddeg(&["count", spec, "--weights", "generic"]);
    assert_eq!((code(&generic), stdout(&generic).as_str()), (0, "20"));
}

#[test]
fn hyperplane_and_weight_files() {
    let dir = tempfile::tempdir().unwrap();
    let plane = write(dir.path(), "plane.json", r#"{"n":3,"codim":1,"generators":["x0 + 2*x1 - x2 + 5*x3"]}"#);
    let o = eddeg(&["count", &plane, "--weights", "unit"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1"));
    let weights = write(dir.path(), "w.json", r#"["1", "2", "3", "4"]"#);
    let o = eddeg(&["count", &plane, "--weights", &weights, "--method", "both"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1"));
}

#[test]
fn defects_of_binomials_and_their_sphere_sections() {
    let dir = tempfile::tempdir().unwrap();
    let b11 = write(dir.path(), "b11.json", r#"{"n":4,"codim":1,"generators":["x0^2 - x3*x4"]}"#);
    let b12 = write(dir.path(), "b12.json", r#"{"n":4,"codim":1,"generators":["x0^3 - x3*x4^2"]}"#);
    let o = eddeg(&["defect", &b11]);
    assert_eq!(stdout(&o), "GED 4  UED 4  DED 0");
    let o = eddeg(&["defect", &b11, "--sphere"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "GED 20  UED 8  DED 12"));
    let o = eddeg(&["defect", &b12, "--sphere"]);
    assert_eq!(stdout(&o), "GED 30  UED 12  DED 18");
    let o = eddeg(&["defect", fixture("varieties/nodal_cubic.json").to_str().unwrap(), "--method", "both"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "GED 10  UED 9  DED 1"));
}

#[test]
fn thin_wrappers() {
    let o = eddeg(&["milnor", fixture("germs/nodal_pullback.json").to_str().unwrap(), "--check"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "3"));
    let o = eddeg(&["milnor", fixture("germs/umbrella_pullback.json").to_str().unwrap()]);
    assert_eq!(stdout(&o), "1");
    let o = eddeg(&["mv", "--alpha", "1,2,1"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "16"));
    let o = eddeg(&["strat", fixture("posets/umbrella_point.json").to_str().unwrap()]);
    assert_eq!((code(&o), stdout(&o).lines().last().unwrap()), (0, "DED 1"));
    let o = eddeg(&["strat", fixture("posets/umbrella_point.json").to_str().unwrap(), "--slice"]);
    assert_eq!(stdout(&o).lines().last().unwrap(), "DED 0");
    let o = eddeg(&["strat", fixture("posets/point_on_curve.json").to_str().unwrap()]);
    assert_eq!((code(&o), stdout(&o).lines().last().unwrap()), (0, "DED 1"));

    let dir = tempfile::tempdir().unwrap();
    let polys = write(
        dir.path(),
        "p.json",
        r#"[{"dim":2,"vertices":[[0,0],[2,0],[0,2]]},{"dim":2,"vertices":[[0,0],[3,0],[0,3]]}]"#,
    );
    let o = eddeg(&["mv", "--polytopes", &polys]);
    assert_eq!(stdout(&o), "6");
}

#[test]
fn milnor_of_a_non_isolated_germ() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", r#"{"vars":["u","v"],"germ":"u^2*v^2"}"#);
    let o = eddeg(&["milnor", &g]);
    assert_eq!((code(&o), stdout(&o).as_str()), (2, "infinite"));
}

#[test]
fn reproduction_suites() {
    for suite in ["nodal", "umbrella", "eckart-young", "toric"] {
        let o = eddeg(&["reproduce", suite]);
        let out = stdout(&o);
        assert_eq!(code(&o), 0, "{suite}:\n{out}");
        assert!(!out.contains("MISMATCH") && out.lines().last().unwrap().ends_with("checks passed"));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&eddeg(&["count", "/no/such/file.json"])), 2);
    let iso = write(dir.path(), "iso.json", r#"{"n":2,"codim":1,"generators":["x0^2 + x1^2 + x2^2"]}"#);
    assert_eq!(code(&eddeg(&["count", &iso])), 2);
    assert_eq!(code(&eddeg(&["mv", "--alpha", "2,2"])), 2);
    let tol = write(dir.path(), "tol.json", r#"{"min_step": -1.0}"#);
    let plane = write(dir.path(), "plane.json", r#"{"n":2,"codim":1,"generators":["x0 + x1 + 3*x2"]}"#);
    assert_eq!(code(&eddeg(&["count", &plane, "--method", "numeric", "--tolerances", &tol])), 2);
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"dim_x0":1,
            "strata":[{"id":"V","dim":0,"mu":3,"ged":1},{"id":"S","dim":1,"mu":2,"ged":1}],
            "edges":[{"lower":"V","upper":"S","chi_c":1}],
            "transition":[[1,4],[0,1]]}"#,
    );
    assert_eq!(code(&eddeg(&["strat", &bad])), 1);
    let cyclic = write(
        dir.path(),
        "cyclic.json",
        r#"{"dim_x0":1,"strata":[{"id":"V","dim":0,"mu":3,"ged":1}],"edges":[{"lower":"V","upper":"V","chi_c":1}]}"#,
    );
    assert_eq!(code(&eddeg(&["strat", &cyclic])), 2);
}

#[test]
fn records_are_appended_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs");
    let out_s = out.to_str().unwrap();
    let spec = fixture("varieties/nodal_cubic.json");
    let spec = spec.to_str().unwrap();
    for _ in 0..2 {
        let o = eddeg(&["--json-out", out_s, "--seed", "5", "count", spec, "--weights", "unit"]);
        assert_eq!(code(&o), 0);
    }
    let o = eddeg(&["--json-out", out_s, "--seed", "5", "count", spec, "--weights", "generic"]);
    assert_eq!(code(&o), 0);
    let recs = records(&out);
    assert_eq!(recs.len(), 3);
    let strip = |r: &Value| {
        let mut r = r.clone();
        r.as_object_mut().unwrap().remove("wall_seconds");
        r
    };
    assert_eq!(strip(&recs[0]), strip(&recs[1]));
    assert_ne!(recs[0]["input_digest"], recs[2]["input_digest"]);
    assert_eq!(recs[0]["counts"]["symbolic"], 9);
    assert_eq!(recs[2]["counts"]["symbolic"], 10);
    assert_eq!(recs[0]["status"], "pass");
    assert_eq!(recs[0]["seeds"][0], 5);

    let o = eddeg(&["--json-out", out_s, "reproduce", "eckart-young"]);
    assert_eq!(code(&o), 0);
    let recs = records(&out);
    assert_eq!(recs.len(), 4);
    assert_eq!(recs[3]["detail"]["got"], "2");

    let o = eddeg(&["--json-out", out_s, "count", "/no/such/file.json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(records(&out)[4]["status"], "degenerate");
}
