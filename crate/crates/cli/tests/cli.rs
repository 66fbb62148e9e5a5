use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cleave::doc::{cleavage_json, loops_json};
use cleave::fixtures::{chord, concentric, invader, parallel, Rect};
use serde_json::Value;
use tempfile::TempDir;

fn cleave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cleave"))
        .args(args)
        .env_remove("CLEAVE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_single_leaf() {
    let v = stdout_json(&cleave(&["gen", "--seed", "0", "--n", "1", "--k", "1"]));
    assert_eq!(v["tree"], serde_json::json!({ "leaf": 1 }));
    assert_eq!(v["n"], 1);
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let a = cleave(&["gen", "--seed", "0", "--n", "1", "--k", "3"]);
    let b = cleave(&["gen", "--seed", "0", "--n", "1", "--k", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c.json", &stdout_json(&a));
    let report = stdout_json(&cleave(&["inspect", s(&p)]));
    assert_eq!(report["arity"], 3);
    let c = cleave(&["gen", "--seed", "1", "--n", "2", "--k", "2"]);
    let p = write(&dir, "c2.json", &stdout_json(&c));
    assert_eq!(stdout_json(&cleave(&["inspect", s(&p)]))["arity"], 2);
}

#[test]
fn seed_falls_back_to_environment() {
    let env = Command::new(env!("CARGO_BIN_EXE_cleave"))
        .args(["gen", "--n", "1", "--k", "4"])
        .env("CLEAVE_SEED", "11")
        .output()
        .unwrap();
    let flag = cleave(&["gen", "--seed", "11", "--n", "1", "--k", "4"]);
    assert_eq!(env.stdout, flag.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cleave(&["gen", "--n", "3", "--k", "2"]).status.code(), Some(2));
    assert_eq!(cleave(&["check", "bogus"]).status.code(), Some(2));
}

#[test]
fn inspect_reports() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "chord.json", &cleavage_json(&chord()));
    let r = stdout_json(&cleave(&["inspect", s(&p)]));
    assert_eq!(r["components"], 1);
    let hist = r["preimage_histogram"].as_object().unwrap();
    assert_eq!(hist.keys().collect::<Vec<_>>(), vec!["2"]);

    let p = write(&dir, "par.json", &cleavage_json(&parallel()));
    let r = stdout_json(&cleave(&["inspect", s(&p), "--dim-m", "2"]));
    assert_eq!(r["components"], 2);
    assert_eq!(r["stable_degree"]["degree"], 4);
    assert_eq!(r["stable_degree"]["padding"], 0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = cleave(&["inspect", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid JSON"));
}

#[test]
fn compose_and_permute() {
    let dir = TempDir::new().unwrap();
    let outer = write(&dir, "outer.json", &cleavage_json(&chord()));
    let inner = serde_json::json!({ "n": 1, "tree": {
        "plane": { "normal": [0.0, 1.0], "offset": 0.0 }, "left": { "leaf": 1 }, "right": { "leaf": 2 } } });
    let inner = write(&dir, "inner.json", &inner);
    let v = stdout_json(&cleave(&["compose", s(&outer), "1", s(&inner)]));
    let p = write(&dir, "composed.json", &v);
    assert_eq!(stdout_json(&cleave(&["inspect", s(&p)]))["arity"], 3);
    let v = stdout_json(&cleave(&["permute", s(&p), "3,1,2"]));
    let labels: Vec<u64> = [&v["tree"]["left"]["left"]["leaf"], &v["tree"]["left"]["right"]["leaf"], &v["tree"]["right"]["leaf"]]
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(labels, vec![3, 1, 2]);
    assert_eq!(cleave(&["permute", s(&p), "1,1,2"]).status.code(), Some(1));
    // grafting x = 0 again into the right half does not cleave
    let again = write(&dir, "again.json", &cleavage_json(&chord()));
    assert_eq!(cleave(&["compose", s(&outer), "1", s(&again)]).status.code(), Some(1));
}

#[test]
fn umkehr_fixtures() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "chord.json", &cleavage_json(&chord()));
    let near = write(&dir, "near.json", &loops_json(&concentric(0.5, 0.05, 64)));
    let v = stdout_json(&cleave(&["umkehr", s(&c), s(&near), "--epsilon", "0.2"]));
    let comp = &v["components"][0];
    assert_eq!(comp["status"], "finite");
    let top = comp["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["scale"].as_f64().unwrap())
        .fold(0.0, f64::max);
    assert!((top - 0.25).abs() < 1e-9);

    let far = write(&dir, "far.json", &loops_json(&concentric(0.5, 0.4, 64)));
    let v = stdout_json(&cleave(&["umkehr", s(&c), s(&far)]));
    assert!(v["components"].as_array().unwrap().iter().all(|c| c["status"] == "infinity"));

    let pc = parallel();
    let pcp = write(&dir, "par.json", &cleavage_json(&pc));
    let rect = Rect { x0: 0.2, x1: 0.3, y0: 0.015, y1: 0.035 };
    let inv = write(&dir, "inv.json", &loops_json(&invader(&pc, 0.05, rect, 96).unwrap()));
    let status_12 = |v: &Value| {
        v["components"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["labels"] == serde_json::json!([1, 2]))
            .unwrap()["status"]
            .clone()
    };
    let v = stdout_json(&cleave(&["umkehr", s(&pcp), s(&inv), "--density", "17"]));
    assert_eq!(status_12(&v), "infinity");
    let v = stdout_json(&cleave(&["umkehr", s(&pcp), s(&inv), "--density", "17", "--t", "1"]));
    assert_eq!(status_12(&v), "finite");

    let out = dir.path().join("thom.json");
    let o = cleave(&["umkehr", s(&c), s(&near), "--out", s(&out), "--mapping"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["config"]["mapping"], true);
    assert_eq!(v["run"]["mapping"], true);

    assert_eq!(cleave(&["umkehr", s(&pcp), s(&near)]).status.code(), Some(1));
    assert_eq!(cleave(&["umkehr", s(&c), s(&near), "--t", "2"]).status.code(), Some(1));
}

#[test]
fn checks_pass() {
    let out = cleave(&["check", "symmetry", "--seed", "7"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS symmetry"));
    let out = cleave(&["check", "preimage", "--seed", "7"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let json_start = text.find("\n{").unwrap() + 1;
    let v: Value = serde_json::from_str(&text[json_start..]).unwrap();
    let hist = v["stats"]["histogram"].as_object().unwrap();
    assert!(hist.contains_key("2"));
}

#[test]
fn exports() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "par.json", &cleavage_json(&parallel()));
    let out = cleave(&["export-obj", s(&p)]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 2);
    let v = stdout_json(&cleave(&["export-blueprint", s(&p), "--density", "3"]));
    assert_eq!(v["components"], 2);
    assert!(v["samples"].as_array().unwrap().iter().all(|s| s["participants"].as_array().unwrap().len() == 2));
}
