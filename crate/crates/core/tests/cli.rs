use std::io::Write as _;

use carnot::cli::run;
use serde_json::Value;

fn carnot(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("carnot").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut v = vec!["--format", "json"];
    v.extend_from_slice(args);
    let (code, out, err) = carnot(&v);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn dims_table() {
    let v = json(&["dims", "-r", "4", "-s", "3"]);
    assert_eq!(v["graded"], serde_json::json!([4, 6, 20]));
    assert_eq!(v["total"], 30);
    assert_eq!(json(&["dims", "-r", "2", "-s", "4"])["graded"], serde_json::json!([2, 1, 2, 3]));
    assert_eq!(json(&["dims", "-r", "2", "-s", "2"])["graded"], serde_json::json!([2, 1]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(carnot(&["casimirs", "-r", "2", "-s", "5"]).0, 2);
    assert_eq!(carnot(&["dims", "-r", "3"]).0, 2);
    assert_eq!(carnot(&["frobnicate"]).0, 2);
    assert_eq!(carnot(&["bivector", "-r", "2", "-s", "3", "--block", "1;2"]).0, 2);
    assert_eq!(carnot(&["--help"]).0, 0);
}

#[test]
fn cartan_casimirs() {
    let v = json(&["casimirs", "-r", "2", "-s", "3", "--verify"]);
    let polys: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["polynomial"].as_str().unwrap()).collect();
    assert_eq!(polys, ["x112", "x212", "2*x1*x212 - 2*x2*x112 + x12^2"]);
}

#[test]
fn rank4_casimirs_all_verify() {
    let (code, out, _) = carnot(&["casimirs", "-r", "4", "-s", "3", "--verify"]);
    assert_eq!(code, 0);
    assert!(out.contains("verified 22/22"), "{out}");
}

#[test]
fn all_subsets_windows() {
    let v = json(&["casimirs", "-r", "4", "-s", "3", "--windows", "all"]);
    let minors = v.as_array().unwrap().iter().filter(|e| e["role"] == "minor").count();
    assert_eq!(minors, 6);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let a = carnot(&["--format", "json", "casimirs", "-r", "3", "-s", "3"]);
    let b = carnot(&["--format", "json", "casimirs", "-r", "3", "-s", "3"]);
    assert_eq!(a, b);
}

#[test]
fn verify_reports_witness_and_line_numbers() {
    let f = temp_file("x1\nx112\n");
    let (code, out, _) = carnot(&["verify", "-r", "2", "-s", "3", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("line 1: false  {x2, f} = -x12"), "{out}");
    assert!(out.contains("line 2: true"));

    let bad = temp_file("x112\n\nx1 +* x2\n");
    let (code, _, err) = carnot(&["verify", "-r", "2", "-s", "3", bad.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn bivector_block_at_point() {
    let p = temp_file(r#"{"x112": 2, "x212": "1/3"}"#);
    let v = json(&["bivector", "-r", "2", "-s", "3", "--block", "1,2", "--point", p.path().to_str().unwrap()]);
    assert_eq!(v["entries"], serde_json::json!([["2"], ["1/3"]]));
    assert_eq!(v["rank"], 1);
}

#[test]
fn example_strata() {
    let v = json(&["orbit", "--example-5.1"]);
    assert_eq!(v["h1"], serde_json::json!(["x3"]));
    assert_eq!(v["kernel_casimirs"].as_array().unwrap().len(), 1);
    assert_eq!(v["h2_constant"], true);
    assert_eq!(v["ker_d_constant"], true);

    let v = json(&["orbit", "--example-5.1-degenerate"]);
    assert_eq!(v["kernel_casimirs"], serde_json::json!(["x23"]));
}

#[test]
fn orbit_at_points() {
    let zero = temp_file("{}");
    let v = json(&["orbit", "-r", "3", "-s", "3", zero.path().to_str().unwrap()]);
    assert_eq!(v["orbit_type"], "point");
    assert_eq!(v["orbit_dim"], 0);

    let generic = temp_file(r#"{"x112": 1, "x113": 2, "x123": -1, "x212": 3, "x213": 1, "x223": 5, "x313": -2, "x323": 7}"#);
    let v = json(&["orbit", "-r", "3", "-s", "3", generic.path().to_str().unwrap()]);
    assert_eq!(v["orbit_type"], "affine_subspace");
    assert_eq!(v["orbit_dim"], 6);
}

#[test]
fn stratum_file_is_detected() {
    let s = temp_file(r#"{"description": "custom", "set_zero": ["x313", "x323"], "identify": [["x123", "x213"]]}"#);
    let v = json(&["orbit", "-r", "3", "-s", "3", s.path().to_str().unwrap()]);
    assert_eq!(v["description"], "custom");
    assert_eq!(v["rank_b12"], 2);
}

#[test]
fn flow_presets() {
    let (code, out, _) = carnot(&["flow", "--preset", "cartan-circle"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("periodic, period ≈ 6.2832"), "{out}");

    let (code, out, _) = carnot(&["flow", "-r", "3", "-s", "3", "--preset", "zero-brackets", "-T", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("constant"), "{out}");
}

#[test]
fn flow_drift_budget_exceeded_fails() {
    let (code, out, _) =
        carnot(&["flow", "-r", "3", "-s", "3", "--seed", "1", "--dt", "0.2", "-T", "10", "--tol-conservation", "1e-14"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("exceeded"));
}

#[test]
fn flow_writes_csv_and_accepts_control() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let control = temp_file(r#"[[2, "1/2"], ["1/2", 1]]"#);
    let v = json(&[
        "flow",
        "-r",
        "2",
        "-s",
        "3",
        "--seed",
        "7",
        "-T",
        "1",
        "--control",
        control.path().to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(v["conservation"]["pass"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,x1,x2,x12,x112,x212\n"));
    assert_eq!(text.lines().count(), 1 + 1001);

    let indefinite = temp_file("[[1, 2], [2, 1]]");
    let (code, _, err) = carnot(&["flow", "-r", "2", "-s", "3", "--seed", "1", "--control", indefinite.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("positive definite"));
}
