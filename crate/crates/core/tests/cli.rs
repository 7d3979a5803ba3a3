use std::path::PathBuf;
use std::process::{Command, Output};

use blockforge::catalog::CatalogFile;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_blockforge"));
    c.env_remove("BLOCKFORGE_CATALOG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blockforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn catalog_lists_groups_and_instances() {
    let o = run(&["catalog"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for id in ["S3", "S4", "A4", "C2", "C3", "V4", "C2wrS2", "s3-gf4-principal"] {
        assert!(s.contains(id), "{id} missing from\n{s}");
    }
}

#[test]
fn catalog_group_s3() {
    let o = run(&["catalog", "--group", "S3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("order 6, classes 3"));
    let v: Value = serde_json::from_slice(&run(&["catalog", "--group", "S3", "--json"]).stdout).unwrap();
    assert_eq!(v["order"], 6);
    assert_eq!(v["classes"], 3);
}

#[test]
fn catalog_json_is_a_loadable_catalog() {
    let o = run(&["catalog", "--json"]);
    assert_eq!(code(&o), 0);
    let cat: CatalogFile = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cat.schema, "blockforge/1");
    let mut renamed = cat.clone();
    for e in &mut renamed.groups {
        e.id = format!("X{}", e.id);
    }
    let path = scratch("catalog.json");
    std::fs::write(&path, serde_json::to_string(&renamed).unwrap()).unwrap();
    let o = bin().args(["catalog", "--group", "XS4"]).env("BLOCKFORGE_CATALOG", &path).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("order 24, classes 5"));
    let o = bin().args(["catalog"]).env("BLOCKFORGE_CATALOG", scratch("missing.json")).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn radical_tensor_passes_and_is_deterministic() {
    let args = ["suite", "radical-tensor", "--p", "3", "--groups", "S3:A3,C2:1", "--n", "2", "--json"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&args).stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "blockforge/1");
    assert_eq!(v["seed"], 0);
    assert_eq!(v["ok"], true);
    let seeded: Value = serde_json::from_slice(&run(&[&args[..], &["--seed", "7"]].concat()).stdout).unwrap();
    assert_eq!(seeded["seed"], 7);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["suite", "radical-tensor", "--groups", "S3:A3"])), 2);
    assert_eq!(code(&run(&["suite", "no-such-suite"])), 2);
    assert_eq!(code(&run(&["suite", "wreath-crossed", "--instance", "v4-c2-p2", "--n", "4"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn certificates_round_trip_and_corruption_is_caught() {
    let good = scratch("good.json");
    let o = run(&["suite", "geq-b", "--instance", "s3-a3-p3", "--emit-cert", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&run(&["certify", good.to_str().unwrap()])), 0);

    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    c["kind"] = "geq-c".into();
    let x = c["iso"][0][0].as_u64().unwrap();
    c["iso"][0][0] = ((x + 1) % 13).into();
    let bad = scratch("bad.json");
    std::fs::write(&bad, c.to_string()).unwrap();
    let o = run(&["suite", "geq-c", "--cert", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"][0]["witness"].is_string());

    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    c.as_object_mut().unwrap().remove("defect_group");
    let nodef = scratch("nodef.json");
    std::fs::write(&nodef, c.to_string()).unwrap();
    assert_eq!(code(&run(&["certify", nodef.to_str().unwrap()])), 2);
}

#[test]
fn block_wreath_exit_codes() {
    assert_eq!(code(&run(&["suite", "block-wreath", "--instance", "v4-c2-p2", "--n", "2"])), 0);
    let o = run(&["suite", "block-wreath", "--instance", "s3-gf4-principal", "--n", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not in Ḡⁿ"));
}

#[test]
fn raising_caps_warns() {
    let o = run(&["--max-dim", "5000", "catalog", "--group", "C2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
