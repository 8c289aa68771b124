use std::process::{Command, Output};

use serde_json::Value;

fn qpoker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpoker"))
        .args(args)
        .env_remove("QPOKER_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qpoker(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn exact(v: &Value) -> &str {
    assert_eq!(v["kind"], "exact", "{v}");
    v["exact"].as_str().unwrap()
}

#[test]
fn build_simplified() {
    let v = json(&["build", "--variant", "sp"]);
    assert_eq!(v["pure_strategies"], serde_json::json!([4, 4]));
    assert_eq!(
        v["reduced"]["strategies"],
        serde_json::json!([["s1", "s2"], ["t1", "t2"]])
    );
    assert!(v["named_survive"]
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b == true));
    let payoffs: Vec<&Value> = v["reduced"]["payoffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| &p["payoff"][0])
        .collect();
    assert_eq!(
        payoffs,
        ["0", "5/2", "5/4", "0"]
            .map(Value::from)
            .iter()
            .collect::<Vec<_>>()
    );
    assert!(v["full"].is_object());
}

#[test]
fn build_nash_shapley_summarizes_full_table() {
    let v = json(&["build", "--variant", "ns"]);
    assert_eq!(v["pure_strategies"], serde_json::json!([256, 256, 256]));
    assert!(v["full"].is_null());
    assert_eq!(v["reduced"]["players"], 3);
    assert!(v["named_survive"]
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b == true));
    let csv = qpoker(&["build", "--variant", "ns", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("round,player,removed,dominator,mode\n"));
}

#[test]
fn build_zero_stakes_is_all_zero() {
    let v = json(&["build", "--variant", "sp", "--ante", "0", "--bet", "0"]);
    for p in v["reduced"]["payoffs"].as_array().unwrap() {
        assert!(p["payoff"].as_array().unwrap().iter().all(|x| x == "0"));
    }
}

#[test]
fn solve_known_games() {
    let sp = json(&["solve", "--game", "sp"]);
    assert_eq!(exact(&sp["zero_sum"]["value"]), "5/6");
    assert_eq!(exact(&sp["equilibria"][0]["profile"][0][0]), "1/3");
    assert_eq!(exact(&sp["equilibria"][0]["profile"][1][0]), "2/3");

    let ns = json(&["solve", "--game", "ns"]);
    assert_eq!(ns["certified"], true);
    let payoffs: Vec<&str> = ns["payoffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(exact)
        .collect();
    assert_eq!(payoffs, ["-2/5", "-2/5", "4/5"]);
    assert!((ns["p"]["value"].as_f64().unwrap() - 0.183216).abs() < 1e-6);

    let pd = json(&["solve", "--game", "pd"]);
    assert_eq!(pd["equilibria"].as_array().unwrap().len(), 1);
    assert_eq!(exact(&pd["equilibria"][0]["payoffs"][0]), "1");
}

#[test]
fn solve_game_file() {
    let dir = std::env::temp_dir().join(format!("qpoker-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("reduced.json");
    let v = json(&["build", "--variant", "sp"]);
    std::fs::write(&path, serde_json::to_string(&v["reduced"]).unwrap()).unwrap();
    let solved = json(&["solve", "--game", path.to_str().unwrap()]);
    assert_eq!(exact(&solved["zero_sum"]["value"]), "5/6");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn quantize_examples() {
    let v = json(&["quantize", "--game", "pd", "--p1", "q8", "--p2", "identity"]);
    for p in v["payoffs"].as_array().unwrap() {
        assert!((p["value"].as_f64().unwrap() - 2.25).abs() < 1e-12);
    }
    assert_eq!(exact(&v["exact_payoffs"]["values"][0]), "9/4");

    let v = json(&[
        "quantize",
        "--game",
        "sp",
        "--no-entangled",
        "--p1",
        "mix N:1/3,F:2/3",
        "--p2",
        "mix N:2/3,F:1/3",
    ]);
    assert_eq!(exact(&v["exact_payoffs"]["values"][0]), "5/6");

    let v = json(&["quantize", "--game", "ns", "--preset", "discrete-all"]);
    let expected = [0.875, 0.875, -1.75];
    for (p, e) in v["payoffs"].as_array().unwrap().iter().zip(expected) {
        assert!((p["value"].as_f64().unwrap() - e).abs() < 1e-12);
    }

    let v = json(&[
        "quantize",
        "--game",
        "ns",
        "--preset",
        "uniform-all",
        "--seed",
        "11",
        "--samples",
        "20000",
    ]);
    for (p, e) in v["payoffs"].as_array().unwrap().iter().zip(expected) {
        assert_eq!(p["kind"], "estimate");
        let se = p["std_error"].as_f64().unwrap();
        assert!((p["value"].as_f64().unwrap() - e).abs() <= 4.0 * se);
    }
}

#[test]
fn sampled_output_is_deterministic() {
    let args = [
        "quantize",
        "--game",
        "pd",
        "--preset",
        "uniform-all",
        "--seed",
        "5",
        "--samples",
        "5000",
    ];
    assert_eq!(qpoker(&args).stdout, qpoker(&args).stdout);
    let args = ["report", "--seed", "5", "--samples", "2000"];
    assert_eq!(qpoker(&args).stdout, qpoker(&args).stdout);
}

#[test]
fn seed_is_required_for_sampling() {
    let out = qpoker(&["quantize", "--game", "pd", "--preset", "uniform-all"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    assert_eq!(qpoker(&["verify", "tables"]).status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_qpoker"))
        .args([
            "quantize",
            "--game",
            "pd",
            "--preset",
            "uniform-all",
            "--samples",
            "100",
        ])
        .env("QPOKER_SEED", "9")
        .output()
        .unwrap();
    assert!(ok.status.success());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qpoker(&["solve", "--game", "nope"]).status.code(), Some(2));
    assert_eq!(
        qpoker(&["build", "--variant", "holdem"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qpoker(&["quantize", "--game", "pd", "--p1", "oct8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qpoker(&["quantize", "--game", "pd", "--p3", "identity"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qpoker(&["solve", "--game", "sp", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_tables_and_classical() {
    let v = json(&["verify", "tables", "--seed", "7"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    let v = json(&["verify", "classical", "--seed", "7", "--deals", "100000"]);
    assert_eq!(v["pass"], true);
    let out = qpoker(&["verify", "tables", "--seed", "7", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion  1 PASS"));
}
