use std::process::{Command, Output};

fn vwframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vwframe")).args(args).env_remove("VWFRAME_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("vwframe-cli-{}-{}", std::process::id(), name))
}

#[test]
fn theta_rank2() {
    let o = vwframe(&["theta", "--rank", "2", "--ell", "0", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1 + q(y + y^-1) + q^4(y^2 + y^-2)"), "{}", stdout(&o));
}

#[test]
fn klt_passes() {
    let o = vwframe(&["verify", "klt", "--rank", "2", "--ell", "1", "--order", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn symmetry_checks_are_seeded() {
    let a = vwframe(&["--seed", "7", "--json", "verify", "permutation", "--rank", "2", "--order", "2", "--trials", "3"]);
    let b = vwframe(&["--seed", "7", "--json", "verify", "permutation", "--rank", "2", "--order", "2", "--trials", "3"]);
    assert_eq!(a.status.code(), Some(0));
    let strip = |o: &Output| {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["report"].clone()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a)["pass"], true);
}

#[test]
fn route_equality_json() {
    let o = vwframe(&["--json", "verify", "route-equality", "--rank", "2", "--order", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["identity"], "route-equality");
}

#[test]
fn missing_surface_is_an_io_error() {
    let o = vwframe(&["vw", "--surface", "definitely-missing.json", "--rank", "2", "--order", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("definitely-missing.json"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(vwframe(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(vwframe(&["theta", "--rank", "2"]).status.code(), Some(2));
}

#[test]
fn invalid_surface_is_reported_line_by_line() {
    let path = temp("bad.json");
    std::fs::write(&path, r#"{"chi": 1, "K2": 2, "gram": [[1]], "K": [1], "classes": [{"name": "a", "vector": [2], "sw": 1}], "c1": [0]}"#).unwrap();
    let o = vwframe(&["vw", "--surface", path.to_str().unwrap(), "--order", "1"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("K.K = 1 but K2 = 2") && err.contains("class a"), "{err}");
}

#[test]
fn vw_closed_form_and_extracted_agree() {
    let path = temp("k3.json");
    std::fs::write(&path, r#"{"chi": 2, "K2": 0, "gram": [[-2]], "K": [0], "classes": [{"name": "0", "vector": [0], "sw": 1}], "c1": [0]}"#).unwrap();
    let p = path.to_str().unwrap();
    let a = vwframe(&["--json", "vw", "--surface", p, "--order", "1", "--closed-form"]);
    let b = vwframe(&["--json", "vw", "--surface", p, "--order", "1"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let ra: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let rb: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(ra["result"], rb["result"]);
}

#[test]
fn extract_writes_json_and_uses_cache() {
    let out = temp("series.json");
    let cache = temp("cache");
    let args = ["--cache-dir", cache.to_str().unwrap(), "extract", "--rank", "2", "--order", "2", "--out", out.to_str().unwrap()];
    let first = vwframe(&args);
    assert_eq!(first.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["r"], 2);
    assert!(v["series"]["Abar"].is_array());
    let second = vwframe(&args);
    let err = String::from_utf8_lossy(&second.stderr);
    assert!(err.contains("cache:") && !err.contains(" 0 hits"), "{err}");
    std::fs::remove_file(&out).unwrap();
    std::fs::remove_dir_all(&cache).unwrap();
}

#[test]
fn nekrasov_with_explicit_framing() {
    let o = vwframe(&["nekrasov", "--rank", "2", "--order", "1", "--ei-spec", "0:0,1:-2", "--direction", "1,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("q^1: exact on u^[-2..0]"));
    assert_eq!(vwframe(&["nekrasov", "--rank", "2", "--order", "1", "--ei-spec", "0:0"]).status.code(), Some(3));
}
