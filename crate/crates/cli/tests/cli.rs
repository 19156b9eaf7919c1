use std::process::{Command, Output};

use serde_json::Value;

fn pru(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pru"))
        .args(args)
        .env_remove("PRU_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = pru(&all);
    (serde_json::from_slice(&o.stdout).expect("json output"), code(&o))
}

#[test]
fn eval_examples() {
    for (term, input, out) in [
        ("s", "3", "4"),
        ("(comp z (comp (pi 2 1) (pair s s)))", "7", "0"),
        ("(rec (pi 1 1) (comp s (pi 2 2)))", "2,3", "5"),
        ("(tw 1 1)", "3,8", "8,3"),
    ] {
        let o = pru(&["eval", term, "--in", input]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o).trim(), out, "{term}");
    }
}

#[test]
fn eval_errors() {
    assert_eq!(code(&pru(&["eval", "(comp z", "--in", "1"])), 2);
    assert_eq!(code(&pru(&["eval", "(comp z (pair s s))", "--in", "1"])), 2);
    assert_eq!(code(&pru(&["eval", "s", "--in", "1,2"])), 2);
    assert_eq!(code(&pru(&["eval", "s", "--in", "x"])), 2);
    let slow = pru(&["eval", "(rec (pi 1 1) (comp s (pi 2 2)))", "--in", "1,100000", "--steps", "1000"]);
    assert_eq!(code(&slow), 3);
}

#[test]
fn terms_from_files() {
    let dir = std::env::temp_dir().join(format!("pru-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("add.pr");
    std::fs::write(&path, "(rec\n  (pi 1 1)\n  (comp s (pi 2 2)))\n").unwrap();
    let arg = format!("@{}", path.display());
    let o = pru(&["eval", &arg, "--in", "4,5"]);
    assert_eq!(stdout(&o).trim(), "9");
    assert_eq!(code(&pru(&["eval", "@/nonexistent/file", "--in", "1"])), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn check_verdicts_and_exit_codes() {
    let (v, c) = json(&["check", "(comp s (comp s z))", "(comp (comp s s) z)", "-u", "C", "--witness"]);
    assert_eq!((v["verdict"].as_str(), c), (Some("equal"), 0));
    assert_eq!(v["universe"], "C");
    assert_eq!(v["replayed"], true);
    assert_eq!(v["caps"]["size"], 12);
    assert_eq!(v["witness"][0]["rule"], "assoc-comp");

    let (v, c) = json(&["check", "s", "z", "-u", "Func"]);
    assert_eq!((v["verdict"].as_str(), c), (Some("notequal"), 1));

    let args = ["check", "(rec (pi 1 1) (pi 2 2))", "(comp (pi 1 1) (pi 2 1))", "-u", "catn"];
    let (v, c) = json(&args);
    assert_eq!((v["verdict"].as_str(), c), (Some("equal"), 0));
    let mut tight = args.to_vec();
    tight.extend(["--caps-size", "1", "--caps-count", "1"]);
    let (v, c) = json(&tight);
    assert_eq!((v["verdict"].as_str(), c), (Some("unknown"), 4));

    assert_eq!(code(&pru(&["check", "s", "(pi 2 1)", "-u", "C"])), 2);
    assert_eq!(code(&pru(&["check", "s", "s", "-u", "Nope"])), 2);
}

#[test]
fn check_witness_text() {
    let o = pru(&["check", "(comp (tw 1 1) (pair z s))", "(pair s z)", "-u", "CatX", "--witness"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("equal\n"));
    assert!(out.contains("almost-comm backward"));
    assert!(out.ends_with("replay: ok\n"));
}

#[test]
fn normalize_examples() {
    let o = pru(&["normalize", "(comp s (comp s z))", "-u", "C"]);
    assert_eq!(stdout(&o).trim(), "(comp (comp s s) z)");
    let o = pru(&["normalize", "(comp (id 1) s)", "-u", "I"]);
    assert_eq!(stdout(&o).trim(), "s");
    let once = stdout(&pru(&["normalize", "(comp (comp (pi 2 1) (tw 1 1)) (pair z s))", "-u", "CatX"]));
    let twice = stdout(&pru(&["normalize", once.trim(), "-u", "CatX"]));
    assert_eq!(once, twice);
    assert_eq!(once.trim(), "(comp (pi 2 1) (pair s z))");
    let o = pru(&["normalize", "s", "-u", "CatN"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no normal form"));
}

#[test]
fn enum_reports_homsets() {
    let (v, c) = json(&["enum", "--size", "3", "--no-rec", "--terms"]);
    assert_eq!(c, 0);
    assert_eq!(v["size"], 33);
    assert_eq!(v["homsets"]["(1,1)"], 12);
    assert_eq!(v["terms"][0], "(pi 1 1)");
    let (v, _) = json(&["enum"]);
    assert_eq!(v["size"], 374);
    assert_eq!(code(&pru(&["enum", "--capacity", "10"])), 5);
    assert_eq!(code(&pru(&["enum", "--size", "0"])), 2);
}

#[test]
fn galois_chain_and_rigidity() {
    let (v, c) = json(&[
        "galois",
        "--universes",
        "Desc,C,Cat",
        "--ops",
        "comp,rec,pair",
        "--fix-initials",
    ]);
    assert_eq!(c, 0);
    let parts = v["partitions"].as_object().unwrap();
    assert_eq!(parts.len(), 3);
    let blocks = |u: &str| parts[u].as_array().unwrap().len();
    assert!(blocks("Desc") > blocks("C") && blocks("C") > blocks("Cat"));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "antitone-Desc-Cat"));
    assert!(v["groups"]["C"]["order"].is_string());
    assert_eq!(v["preserved"]["order"], "1");
    assert_eq!(v["preserved"]["complete"], true);
}

#[test]
fn lattice_text() {
    let o = pru(&["lattice", "--universes", "Desc,C,I,Cat", "--size", "5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for edge in ["Desc -> C: strict", "Desc -> I: strict", "C -> Cat: strict", "I -> Cat: strict"] {
        assert!(out.contains(edge), "{edge} missing from\n{out}");
    }
    assert!(out.contains("C and I are incomparable"));
}

#[test]
fn fuzz_is_reproducible() {
    let a = json(&["fuzz", "--count", "50", "--seed", "7"]);
    let b = json(&["fuzz", "--count", "50", "--seed", "7"]);
    assert_eq!(a, b);
    assert_eq!(a.0["seed"], 7);
    assert_eq!(a.1, 0);
    let text = stdout(&pru(&["fuzz", "--count", "5"]));
    assert!(text.starts_with("seed 24301 (default)"));
}

#[test]
fn config_file_and_overrides() {
    let dir = std::env::temp_dir().join(format!("pru-config-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("pru.json");
    std::fs::write(&cfg, r#"{"universe": "C", "format": "json"}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pru"))
        .args(["check", "(comp s (comp s z))", "(comp (comp s s) z)"])
        .env("PRU_CONFIG", &cfg)
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["universe"], "C");
    let o = Command::new(env!("CARGO_BIN_EXE_pru"))
        .args(["--format", "text", "eval", "s", "--in", "1"])
        .env("PRU_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "2");
    std::fs::write(&cfg, r#"{"grid": 0}"#).unwrap();
    let arg = cfg.display().to_string();
    assert_eq!(code(&pru(&["--config", &arg, "eval", "s", "--in", "1"])), 2);
    std::fs::remove_dir_all(dir).unwrap();
}
