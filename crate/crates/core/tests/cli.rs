use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn generated_plane_is_free() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("plane.json");
    let inst = inst.to_str().unwrap();
    let gen = zlab(&["family", "gen", "--name", "projective_plane", "--q", "3", "--out", inst]);
    assert!(gen.status.success(), "{gen:?}");
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(inst).unwrap()).unwrap();
    assert_eq!(parsed["k"], 2);
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 52);

    let free = zlab(&["freeness", "--instance", inst, "--u", "2"]);
    assert!(free.status.success());
    assert_eq!(stdout(&free).trim(), "free");
}

#[test]
fn freeness_prints_witness() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"k":2,"classes":[["p0","p1"],["q0","q1"]],"edges":[[0,0],[0,1],[1,0],[1,1]]}"#);
    let out = zlab(&["freeness", "--instance", &inst, "--u", "2"]);
    let text = stdout(&out);
    let (head, json) = text.split_once('\n').unwrap();
    assert_eq!(head, "contains");
    let w: Value = serde_json::from_str(json).unwrap();
    assert_eq!(w["parts"], serde_json::json!([[0, 1], [0, 1]]));
}

#[test]
fn bounds_commands() {
    let out = zlab(&["bounds", "eval", "--c", "2,2", "--n", "100,100", "--eps", "0.05"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["exact_edges"].is_null());
    let e = report["e_value"].as_f64().unwrap();
    assert!((e - 100f64.powf(4.0 / 3.0)).abs() < 1e-9 * e);

    let out = zlab(&["bounds", "gamma", "--c", "1,2"]);
    let g: Vec<f64> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(g, vec![0.0, 1.0]);

    let bad = zlab(&["bounds", "gamma", "--c", "0.5,2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bounds_eval_reports_instance_edges() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"k":2,"classes":[["a","b"],["x","y"]],"edges":[[0,1],[1,0]]}"#);
    let out = zlab(&["bounds", "eval", "--c", "2,2", "--n", "2,2", "--eps", "0.1", "--instance", &inst]);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["exact_edges"], 2);
}

#[test]
fn witness_verify_and_refine() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("order.json");
    let inst = inst.to_str().unwrap();
    assert!(zlab(&["family", "gen", "--name", "order", "--n", "6", "--out", inst]).status.success());
    // x < y on 6 points, blocks {0,1,2},{3,4,5}; only the diagonal cells are mixed
    let w = write(
        dir.path(),
        "w.json",
        r#"{"delta":0.2,"lambda":3.0,"c":[1,1],"parts":[[[0,1,2],[3,4,5]],[[0,1,2],[3,4,5]]],"sigma":[[0,0],[1,1]]}"#,
    );
    let out = zlab(&["witness", "verify", "--instance", inst, "--witness", &w, "--mode", "strong"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let outcome: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(outcome["passed"], true);

    let nobad = write(
        dir.path(),
        "w2.json",
        r#"{"delta":0.2,"lambda":3.0,"c":[1,1],"parts":[[[0,1,2],[3,4,5]],[[0,1,2],[3,4,5]]],"sigma":[]}"#,
    );
    let out = zlab(&["witness", "verify", "--instance", inst, "--witness", &nobad]);
    assert_eq!(out.status.code(), Some(1));

    let out = zlab(&["witness", "refine", "--instance", inst, "--witness", &w]);
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r["witness"]["c"], serde_json::json!([2.0, 2.0]));

    let out = zlab(&["experiment", "audit", "--instance", inst, "--witness", &w]);
    let a: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(a["i1"].as_u64().unwrap() + a["i2"].as_u64().unwrap(), 15);
    assert_eq!(a["i1"], 6);
}

#[test]
fn witness_estimate_and_restrict() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("order.json");
    let inst = inst.to_str().unwrap();
    assert!(zlab(&["family", "gen", "--name", "order", "--n", "32", "--out", inst]).status.success());
    let out = zlab(&["witness", "estimate", "--instance", inst, "--delta-grid", "0.25,0.125,0.0625", "--seed", "3"]);
    assert!(out.status.success());
    let est: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(est["c_hat"].as_array().unwrap().len(), 2);

    let out = zlab(&["witness", "estimate", "--instance", inst, "--delta-grid", "0.25,0.5,0.1"]);
    assert_eq!(out.status.code(), Some(2));

    let small = write(dir.path(), "s.json", r#"{"k":2,"classes":[["a","b"],["x","y","z","w"]],"edges":[[0,0],[0,1],[1,0],[1,1]]}"#);
    let w = write(
        dir.path(),
        "w.json",
        r#"{"delta":0.4,"lambda":2.0,"c":[1,1],"parts":[[[0],[1]],[[0,1],[2,3]]],"sigma":[]}"#,
    );
    let out = zlab(&["witness", "restrict", "--instance", &small, "--witness", &w]);
    assert!(out.status.success(), "{:?}", out);
    let r: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r["instance"]["edges"], serde_json::json!([[0], [1]]));
}

#[test]
fn sweep_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let good = write(
        dir.path(),
        "good.json",
        &format!(
            r#"{{"family":{{"name":"projective_plane","q":2}},"sizes":[2,3,5],"u":2,"c":[2,2],"lambda":2,"epsilon":0.05,"output":{:?},"format":"csv","seed":1}}"#,
            csv.to_str().unwrap()
        ),
    );
    let out = zlab(&["experiment", "sweep", "--config", &good]);
    assert!(out.status.success(), "{out:?}");
    let body = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(body.lines().count(), 4);
    assert!(body.starts_with("family,params,k,u,n1,n2,edges,free,"));

    let config_error = write(
        dir.path(),
        "bad.json",
        r#"{"family":{"name":"order","n":2},"sizes":[5,3],"u":2,"c":[2,2],"lambda":2,"epsilon":0.05}"#,
    );
    assert_eq!(zlab(&["experiment", "sweep", "--config", &config_error]).status.code(), Some(2));

    let gen_error = write(
        dir.path(),
        "gen.json",
        r#"{"family":{"name":"projective_plane","q":2},"sizes":[2,4],"u":2,"c":[2,2],"lambda":2,"epsilon":0.05,"format":"json"}"#,
    );
    let out = zlab(&["experiment", "sweep", "--config", &gen_error]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid point 1"));
}

#[test]
fn threads_env_and_incidence_table() {
    let out = Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(["family", "incidence", "--q", "2,3"])
        .env("ZLAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[1]["incidences"], 52);

    let bad = Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(["family", "incidence", "--q", "2"])
        .env("ZLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn generation_errors_exit_3() {
    let out = zlab(&["family", "gen", "--name", "projective_plane", "--q", "6"]);
    assert_eq!(out.status.code(), Some(3));
    let out = zlab(&["family", "gen", "--name", "no_such_family"]);
    assert_eq!(out.status.code(), Some(2));
    let out = zlab(&["family", "gen", "--name", "random", "--sizes", "3,3", "--p", "0.5", "--seed", "1"]);
    assert!(out.status.success());
}
