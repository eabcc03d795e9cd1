use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn belyi(args: &[&str], input: &str) -> (i32, Value) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_belyi"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the belyi binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let report = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), report)
}

fn run(problem: Value) -> (i32, Value) {
    belyi(&[], &problem.to_string())
}

#[test]
fn genus_of_the_elliptic_cover() {
    let (code, r) = run(json!({"curve": {"N": 3, "a": 1, "b": 1}, "command": "genus"}));
    assert_eq!(code, 0);
    assert_eq!(r["command"], "genus");
    assert_eq!(r["result"]["genus"], 1);
}

#[test]
fn pushforward_of_the_structure_sheaf() {
    let (code, r) = run(json!({"curve": {"N": 2, "a": 1, "b": 0}, "bundle": [[]], "command": "pushforward"}));
    assert_eq!(code, 0);
    assert_eq!(r["result"]["splitting"], json!([0, -1]));
    assert_eq!(r["result"]["weights"], json!({"0": ["0", "1/2"], "infinity": ["0", "1/2"]}));
    assert!(r["statistics"]["rr_spaces"].as_u64().unwrap() > 0);
}

#[test]
fn riemann_roch_space_at_infinity() {
    let problem = json!({
        "curve": {"N": 2, "a": 1, "b": 0},
        "divisor": [{"point": "infinity", "coeff": 2}],
        "command": "lspace"
    });
    let (code, r) = run(problem);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["dimension"], 3);
    assert_eq!(r["result"]["basis"], json!(["1", "x", "y"]));
}

#[test]
fn parabolic_structure_has_flags_over_branch_points() {
    let (code, r) = run(json!({"curve": {"N": 3, "a": 1, "b": 1}, "bundle": [[]], "command": "parabolic"}));
    assert_eq!(code, 0);
    assert_eq!(r["result"]["algebraic"], true);
    for y in ["0", "1", "infinity"] {
        let flags = r["result"]["fibers"][y][0]["flags"].as_array().unwrap();
        let dims: Vec<usize> = flags.iter().map(|f| f.as_array().unwrap().len()).collect();
        assert_eq!(dims, vec![3, 2, 1, 0], "over {y}");
    }
}

#[test]
fn transcendental_point_does_not_descend() {
    let problem = json!({
        "field": {"base_min_poly": [1, 1, 1], "transcendentals": ["t"], "algebraic_ext": ["t - t^2", "0", "0", "1"]},
        "curve": {"N": 3, "a": 1, "b": 1},
        "bundle": [[{"point": {"x": "t", "y": "u"}, "coeff": 1}, {"point": "infinity", "coeff": -1}]],
        "command": "descend"
    });
    let (code, r) = run(problem);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verdict"], "NotDefined");
    assert_eq!(r["result"]["witness"]["ell"], 0);
}

#[test]
fn t_free_bundle_descends() {
    let problem = json!({
        "curve": {"N": 3, "a": 1, "b": 1},
        "bundle": [[{"point": {"branch": "0", "index": 0}, "coeff": 1}, {"point": "infinity", "coeff": -1}]],
        "command": "descend"
    });
    let (code, r) = run(problem);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verdict"], "DefinedOverF");
}

#[test]
fn command_line_overrides_the_problem() {
    let (code, r) = belyi(&["--command", "genus"], &json!({"curve": {"N": 5, "a": 1, "b": 1}}).to_string());
    assert_eq!(code, 0);
    assert_eq!(r["result"]["genus"], 2);
}

#[test]
fn malformed_input_exits_with_2() {
    let (code, r) = belyi(&[], "{");
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "schema");
    let (code, _) = run(json!({"curve": {"N": 2, "a": 1, "b": 0}, "colour": "red", "command": "genus"}));
    assert_eq!(code, 2);
    let (code, _) = run(json!({"curve": {"N": 2, "a": 1, "b": 0}}));
    assert_eq!(code, 2);
    let (code, _) = run(json!({"curve": {"N": 2, "a": 1, "b": 0}, "command": "factor"}));
    assert_eq!(code, 2);
}

#[test]
fn mathematical_errors_exit_with_3() {
    let problem = json!({
        "curve": {"N": 2, "a": 1, "b": 0},
        "bundle": [[{"point": {"x": "2", "y": "5"}, "coeff": 1}]],
        "command": "pushforward"
    });
    let (code, r) = run(problem);
    assert_eq!(code, 3);
    assert_eq!(r["error"]["kind"], "math");
    assert!(r["error"]["message"].as_str().unwrap().contains("does not lie on the curve"));
    let (code, _) = run(json!({"tower": {"N": 4, "a": 2, "b": 1, "M": 3}, "bundle": [[]], "command": "verify-tower"}));
    assert_eq!(code, 3);
}

#[test]
fn selftest_reports_a_corrupted_weight() {
    let (code, r) = belyi(&["--command", "selftest", "--criterion", "1", "--corrupt-weight"], "");
    assert_eq!(code, 4);
    assert_eq!(r["result"]["passed"], false);
    let detail = r["result"]["criteria"][0]["detail"].as_str().unwrap();
    assert!(detail.contains("parabolic invariant violated"), "{detail}");
}

#[test]
fn selftest_subset() {
    let (code, r) = belyi(&["--command", "selftest", "--criterion", "1", "--criterion", "2"], "");
    assert_eq!(code, 0);
    assert_eq!(r["result"]["criteria"].as_array().unwrap().len(), 2);
    let (code, _) = belyi(&["--command", "selftest", "--criterion", "11"], "");
    assert_eq!(code, 2);
}
