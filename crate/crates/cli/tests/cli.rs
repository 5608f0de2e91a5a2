use std::io::Write;

use elliptic_bailey_cli::json::{FailureJson, PairJson, ReportJson, ValueJson};
use elliptic_bailey_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ebailey").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn gamma_at_balanced_point_is_one() {
    let (code, out, _) = call(&["gamma", "--q", "0.3", "--p", "0.2", "--z", "0.24494897", "--json"]);
    assert_eq!(code, 0);
    let v: ValueJson = serde_json::from_str(&out).unwrap();
    assert!((v.value[0] - 1.0).abs() < 1e-6 && v.value[1].abs() < 1e-15, "{v:?}");
}

#[test]
fn pochhammer_value() {
    let (code, out, _) = call(&["pochhammer", "--q", "0.5", "--z", "0.5", "--json"]);
    assert_eq!(code, 0);
    let v: ValueJson = serde_json::from_str(&out).unwrap();
    assert!((v.value[0] - 0.288_788_095_086_602_4).abs() < 1e-14, "{v:?}");
    assert_eq!(call(&["pochhammer", "--q", "1.5", "--z", "0.5"]).0, 2);
}

#[test]
fn beta_verifies() {
    let (code, out, _) = call(&["verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.7,0.6,0.5,0.6,0.7", "--tol", "1e-8", "--json"]);
    assert_eq!(code, 0, "{out}");
    let r: ReportJson = serde_json::from_str(&out).unwrap();
    assert!(r.converged && r.rel_err < 1e-8 && r.runtime_ms > 0.0);
    assert_eq!(r.nodes_used.len(), 2);
}

#[test]
fn beta_constraint_violation_exits_one_with_record() {
    let (code, out, _) = call(&["verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.5,0.5,0.5,0.5,0.5", "--json"]);
    assert_eq!(code, 1);
    let f: FailureJson = serde_json::from_str(&out).unwrap();
    assert_eq!(f.identity_id, "beta");
    assert!(f.error.contains("constraint"), "{}", f.error);
}

#[test]
fn report_json_round_trips() {
    let (_, out, _) = call(&["verify", "transformation", "--q", "0.3", "--p", "0.2", "--seed", "5", "--json"]);
    let parsed: ReportJson = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), out.trim());
}

#[test]
fn seeded_runs_are_deterministic() {
    let args = ["verify", "id-seq", "--m", "1", "--q", "0.3", "--p", "0.2", "--seed", "9", "--json"];
    let a: ReportJson = serde_json::from_str(&call(&args).1).unwrap();
    let b: ReportJson = serde_json::from_str(&call(&args).1).unwrap();
    assert_eq!(a.assignment, b.assignment);
    assert_eq!((a.lhs, a.rhs), (b.lhs, b.rhs));
    assert_eq!(a.identity_id, "id-seq:1");
}

#[test]
fn id_seq_prints_cross_check() {
    let (code, out, _) = call(&["verify", "id-seq:1", "--q", "0.3", "--p", "0.2", "--seed", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("vs transformation"), "{out}");
}

#[test]
fn config_file_merges_and_conflicts() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"p": 0.2, "t": [0.7, 0.6, 0.5, 0.6, 0.7]}}"#).unwrap();
    let path = f.path().to_str().unwrap();
    let (code, _, _) = call(&["verify", "beta", "--q", "0.3", "--config", path]);
    assert_eq!(code, 0);
    let (code, _, err) = call(&["verify", "beta", "--q", "0.3", "--p", "0.2", "--config", path]);
    assert_eq!(code, 2);
    assert!(err.contains("both"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["--bogus"]).0, 2);
    assert_eq!(call(&["verify", "nope", "--q", "0.3", "--p", "0.2"]).0, 2);
    assert_eq!(call(&["gamma", "--q", "0.3", "--p", "0.2"]).0, 2);
    assert_eq!(call(&["gamma", "--q", "1.2", "--p", "0.2", "--z", "0.5"]).0, 2);
    assert_eq!(call(&["gamma", "--q", "x", "--p", "0.2", "--z", "0.5"]).0, 2);
    assert_eq!(call(&["verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.7,0.6"]).0, 2);
    assert_eq!(call(&["verify", "beta", "--q", "0.3", "--p", "0.2", "--n-max", "100"]).0, 2);
    assert_eq!(call(&["verify", "ident1", "--q", "0.3", "--p", "0.2", "--t", "0.5,0.5,0.5,0.5"]).0, 2);
    assert_eq!(call(&["tree", "--word", "X(s,u)"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn tree_prints_pair_and_checks_it() {
    let (code, out, _) = call(&["tree", "--word", "D(s1,u1);C(s2,u2)", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let pair: PairJson = serde_json::from_value(v["pair"].clone()).unwrap();
    assert_eq!(pair.word, "D(s1,u1);C(s2,u2)");
    assert_eq!(pair.t_expr.get("s2"), Some(&1));
    assert!(v.get("report").is_none());

    let (code, out, _) = call(&["tree", "--word", "C(s1,u1)", "--q", "0.3", "--p", "0.2", "--seed", "2", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let r: ReportJson = serde_json::from_value(v["report"].clone()).unwrap();
    assert!(r.rel_err < 1e-8 && r.converged);
}
