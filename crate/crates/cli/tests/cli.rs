use std::path::PathBuf;
use std::process::{Command, Output};

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mzv-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn dim_delta_at_eight() {
    let out = mzv(&["dim-delta", "--n", "8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "144");
}

#[test]
fn depth_dims_text_and_json() {
    assert_eq!(stdout(&mzv(&["depth-dims", "--weight", "9"])).trim(), "(1, 0)");
    let out = mzv(&["depth-dims", "--weight", "11", "--matrix", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["depth2"], 0);
    assert_eq!(v["matrix_m"][0][4], "-2");
}

#[test]
fn shuffle_and_stuffle() {
    assert_eq!(stdout(&mzv(&["shuffle", "--a", "xy", "--b", "y"])).trim(), "2*xyy + yxy");
    assert_eq!(stdout(&mzv(&["stuffle", "--a", "y2", "--b", "y1"])).trim(), "y3 + y1 y2 + y2 y1");
}

#[test]
fn identity_finds_euler_relation() {
    let out = mzv(&["identity", "--mzv", "2,1", "--against", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ratio"], "1");
    let out = mzv(&["identity", "--mzv", "2*2", "--against", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ratio"], "5/2");
}

#[test]
fn exit_codes() {
    assert_eq!(mzv(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mzv(&["dim-delta", "--n", "3"]).status.code(), Some(2));
    assert_eq!(mzv(&["identity", "--mzv", "2,1", "--against", "2"]).status.code(), Some(1));
    assert_eq!(mzv(&["identity", "--mzv", "1,2", "--against", "3"]).status.code(), Some(1));
    assert_eq!(mzv(&["depth2-coeff", "--i", "3", "--j", "5"]).status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_and_respects_output_dir() {
    let dir = scratch_dir("det");
    for name in ["a.json", "b.json"] {
        let status = Command::new(env!("CARGO_BIN_EXE_mzv"))
            .env("MZV_OUTPUT_DIR", &dir)
            .args(["reduce", "--n", "7", "--format", "json", "--output", name])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(dir.join("a.json")).unwrap();
    let b = std::fs::read(dir.join("b.json")).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["dim"], 1);
    assert_eq!(v["weight"], 4);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reduce_emit_writes_table() {
    let dir = scratch_dir("emit");
    let path = dir.join("r6.json");
    let out = mzv(&["reduce", "--n", "6", "--emit", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "reduce");
    assert_eq!(v["basis"].as_array().unwrap().len(), 1);
    assert_eq!(v["table"].as_array().unwrap().len(), 4);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn numeric_is_seeded() {
    let args = ["numeric", "--mzv", "3", "--samples", "20000", "--seed", "7", "--format", "json"];
    let a = mzv(&args);
    let b = mzv(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn partial_dim_delta_matches_full_space() {
    let out = mzv(&["partial-dim", "--n", "6", "--divisors", "delta", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(v["rank"], 4);
    assert_eq!(v["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn pic_expand_five_points() {
    let out = mzv(&["pic-expand", "--n", "5", "--divisor", "1,2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "d_{1,2} = d_{1,3} - d_{1,2,4} + d_{1,3,4}");
}

#[test]
fn verify_single_check() {
    let out = mzv(&["verify-all", "--only", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("PASS 03"));
}
