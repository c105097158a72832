use std::process::{Command, Output};

use qgw_core::linalg::ParamMatrix;
use qgw_core::CheckReport;

fn qgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgw")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn normalize_example() {
    let o = qgw(&["normalize", "--algebra", "gmk", "d*c"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "c*d - m*c*c");
}

#[test]
fn normalize_trace_lists_rewrites() {
    let o = qgw(&["normalize", "--algebra", "Grs", "c*a", "--trace"]);
    let text = stdout(&o);
    assert!(text.contains("c*a @0"), "{text}");
    assert_eq!(text.lines().last().unwrap(), "r*a*c");
}

#[test]
fn contract_emits_the_golden_matrix() {
    let o = qgw(&["contract", "--plan", "paper9", "--emit", "json"]);
    assert!(o.status.success());
    let (got, _) = ParamMatrix::from_json(&stdout(&o)).unwrap();
    let golden = qgw_core::data::DataDir::embedded()
        .read("rmatrices/R_Gmk.json")
        .unwrap();
    let (want, _) = ParamMatrix::from_json(&golden).unwrap();
    assert_eq!(got, want);
}

#[test]
fn json_reports_are_strict_and_deterministic() {
    let args = ["check", "qybe", "rtt", "grouplike", "--paper", "--json", "--no-timing"];
    let (a, b) = (qgw(&args), qgw(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let reports: Vec<CheckReport> = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r.elapsed_ms == 0));
}

#[test]
fn parallel_flag_keeps_report_order() {
    let seq = qgw(&["check", "all", "--json", "--no-timing"]);
    let par = qgw(&["check", "all", "--json", "--no-timing", "--parallel"]);
    assert!(seq.status.success());
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn failing_check_exits_one() {
    let o = qgw(&["rmatrix", "triangular", "R_Grs", "--params", "r=2,s=3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(1, 1)"));
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(qgw(&["check", "nonsense"]).status.code(), Some(2));
    assert_eq!(qgw(&["normalize", "--algebra", "sl3", "a"]).status.code(), Some(2));
    assert_eq!(qgw(&["parse", "/nonexistent/file.qgw"]).status.code(), Some(2));
    let o = qgw(&["rmatrix", "show", "R_Grs", "--params", "r=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("denominator vanishes"));
}

#[test]
fn parse_reports_position_of_errors() {
    let dir = std::env::temp_dir().join(format!("qgw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.qgw");
    std::fs::write(&f, "algebra X\ngens a < b\nrel b*a = a*z\n").unwrap();
    let o = qgw(&["parse", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("3:"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    std::fs::write(&f, "algebra X; params q; gens a < b; rel b*a = q*a*b\n").unwrap();
    let o = qgw(&["parse", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("gens a < b"));
}

#[test]
fn data_dir_override() {
    let dir = std::env::temp_dir().join(format!("qgw-data-{}", std::process::id()));
    std::fs::create_dir_all(dir.join("presentations")).unwrap();
    std::fs::write(
        dir.join("presentations/glr2.qgw"),
        "algebra GLr2\nparams r\ngens a < b < c < d\nrel b*a = a*b\nrel c*a = a*c\nrel c*b = b*c\nrel d*a = a*d\nrel d*b = b*d\nrel d*c = c*d\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qgw"))
        .env("QGW_DATA_DIR", &dir)
        .args(["normalize", "--algebra", "GLr2", "d*a"])
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "a*d");
}

#[test]
fn morphism_verb_prints_the_presentation() {
    let o = qgw(&["check", "morphism", "--source", "gmk", "--N", "2", "-v"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("algebra GLhh2"), "{text}");
    assert!(text.contains("not mechanically verified"));
}
