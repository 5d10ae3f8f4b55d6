use std::path::PathBuf;
use std::process::{Command, Output};

use petersson_core::jacobi::jac_eis_m;

fn petersson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_petersson"))
        .args(args)
        .env_remove("PETERSSON_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("petersson-cli-{}-{name}", std::process::id()))
}

#[test]
fn jacobi_eis_index_one() {
    let o = petersson(&["jacobi-eis", "--k", "4", "--m", "1", "--prec", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coeffs"][0], serde_json::json!([0, 0, "1"]));
    assert_eq!(v["k"], 4);
    assert_eq!(v["prec"], 5);
}

#[test]
fn jacobi_eis_golden() {
    let o = petersson(&["jacobi-eis", "--k", "12", "--m", "4", "--prec", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("golden/jacobi_eis_k12_m4.json");
    assert_eq!(stdout(&o), golden);
    let lib = petersson_cli::to_sorted_json(&jac_eis_m(12, 4, 6).unwrap()).unwrap();
    assert_eq!(lib, golden);
}

#[test]
fn usage_errors() {
    assert_eq!(petersson(&["jacobi-eis", "--k", "5", "--m", "1"]).status.code(), Some(2));
    assert_eq!(petersson(&["jacobi-eis", "--k", "12", "--m", "0"]).status.code(), Some(2));
    assert_eq!(petersson(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(petersson(&["verify", "diffop", "--bits", "128"]).status.code(), Some(2));
    assert_eq!(petersson(&["verify", "routes", "--k", "13"]).status.code(), Some(2));
    assert_eq!(petersson(&["--jobs", "0", "saha"]).status.code(), Some(2));
    assert_eq!(petersson(&["repnum", "--lattice", "e8"]).status.code(), Some(2));
}

#[test]
fn verify_routes() {
    let o = petersson(&["verify", "routes", "--k", "12", "--m-max", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 3);
}

#[test]
fn verify_diffop() {
    let o = petersson(&["verify", "diffop", "--bits", "256"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn repnum_e8_single() {
    let o = petersson(&["repnum", "--lattice", "e8", "--t", "1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,r,m,detT,A,main,diff,mst_ratio"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], ["1", "0", "1"]);
    assert_eq!(row[4], row[5]);
    assert_eq!(row[6], "0");
}

#[test]
fn repnum_scan_has_zero_difference() {
    let o = petersson(&["repnum", "--lattice", "e8", "--det-max", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 72);
    assert!(rows.iter().all(|r| r.split(',').nth(6) == Some("0")));
}

#[test]
fn repnum_lattice_file() {
    let good = scratch("e8.json");
    let e8 = petersson_core::lattice::LatticeGram::e8();
    std::fs::write(&good, serde_json::json!({"dim": 8, "gram": e8.gram()}).to_string()).unwrap();
    let o = petersson(&["repnum", "--lattice", good.to_str().unwrap(), "--t", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(",13440,13440,0,"));

    let bad = scratch("odd.json");
    std::fs::write(&bad, r#"{"dim": 2, "gram": [[1, 0], [0, 2]]}"#).unwrap();
    assert_eq!(petersson(&["repnum", "--lattice", bad.to_str().unwrap(), "--t", "1,0,1"]).status.code(), Some(2));
    let bad_det = scratch("det.json");
    std::fs::write(&bad_det, r#"{"dim": 2, "gram": [[2, 1], [1, 2]]}"#).unwrap();
    assert_eq!(petersson(&["repnum", "--lattice", bad_det.to_str().unwrap(), "--t", "1,0,1"]).status.code(), Some(2));
    for p in [good, bad, bad_det] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn saha_lists() {
    let o = petersson(&["saha", "5", "6", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let ds: Vec<i64> = v.iter().map(|x| x["D"].as_i64().unwrap()).collect();
    assert_eq!(ds.len(), 3);
    assert!(ds.windows(2).all(|w| w[0] < w[1]));

    let o = petersson(&["saha"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[]");

    let o = petersson(&["saha", "2", "5", "--cap", "1"]);
    assert_eq!(o.status.code(), Some(4));
    let v: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0]["D"], 23);
}

#[test]
fn output_is_deterministic_and_sorted() {
    let a = petersson(&["verify", "saha"]);
    let b = petersson(&["--jobs", "1", "verify", "saha"]);
    assert_eq!(a.stdout, b.stdout);
    // serde_json's default map is ordered, so a round trip through Value is a no-op on sorted output
    let text = stdout(&a);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(petersson_cli::to_sorted_json(&v).unwrap(), text);
    let first = text.find("\"checks\"").unwrap();
    assert!(first < text.rfind("\"passed\"").unwrap() && text.rfind("\"passed\"").unwrap() < text.rfind("\"suite\"").unwrap());
}

#[test]
fn cache_file_from_environment() {
    let path = scratch("cache.json");
    let _ = std::fs::remove_file(&path);
    let o = Command::new(env!("CARGO_BIN_EXE_petersson"))
        .args(["jacobi-eis", "--k", "6", "--m", "1", "--prec", "4"])
        .env("PETERSSON_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["version"], 1);
    assert!(!v["cohenH"].as_object().unwrap().is_empty());
    // a second run seeded from the cache gives the same answer
    let o2 = Command::new(env!("CARGO_BIN_EXE_petersson"))
        .args(["jacobi-eis", "--k", "6", "--m", "1", "--prec", "4"])
        .env("PETERSSON_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(o.stdout, o2.stdout);
    let _ = std::fs::remove_file(&path);
}
