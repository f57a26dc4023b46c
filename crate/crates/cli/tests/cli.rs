use std::process::{Command, Output};

use serde_json::Value;

fn preclude(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preclude"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn frac(v: &Value) -> (i64, i64) {
    (v["num"].as_i64().unwrap(), v["den"].as_i64().unwrap())
}

#[test]
fn mpf_of_g2_cross_checks() {
    let out = preclude(&["mpf", "--family", "gk", "--k", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(frac(&v["value"]), (2, 1));
    let cross = v["cross_check"].as_object().unwrap();
    assert!(cross.len() >= 2);
    assert!(cross.values().all(|c| frac(c) == (2, 1)));
}

#[test]
fn mp_of_g2_is_three() {
    let out = preclude(&["mp", "--family", "gk", "--k", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(frac(&v["value"]), (3, 1));
    assert_eq!(v["preclusion_set"].as_array().unwrap().len(), 3);
    assert_eq!(frac(&v["cross_check"]["hitting_search"]), (3, 1));
}

#[test]
fn verify_passes() {
    let out = preclude(&["verify", "--max-n", "8"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn output_is_byte_deterministic() {
    let a = preclude(&[
        "mpf",
        "--family",
        "random_bipartite",
        "--n",
        "4",
        "--seed",
        "9",
        "--method",
        "all",
    ]);
    let b = preclude(&[
        "mpf",
        "--family",
        "random_bipartite",
        "--n",
        "4",
        "--seed",
        "9",
        "--method",
        "all",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(
        preclude(&["mpf", "--family", "cycle", "--n", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        preclude(&[
            "mpf",
            "--family",
            "complete",
            "--n",
            "4",
            "--matching-cap",
            "2",
            "--method",
            "enumeration"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        preclude(&["mpf", "--family", "cycle"]).status.code(),
        Some(2)
    );
    assert_eq!(preclude(&["mpf"]).status.code(), Some(2));
    assert_eq!(preclude(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        preclude(&["mpf", "--family", "nope", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        preclude(&["mpf", "--family", "complete", "--n", "4", "--method", "blp"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        preclude(&["mpf", "--family", "path", "--n", "4", "--matching-cap", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_round_trips_through_input() {
    let dir = std::env::temp_dir().join(format!("preclude-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("q3.txt");
    let out = preclude(&[
        "gen",
        "--family",
        "hypercube",
        "--n",
        "3",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("p 8 12\n"));
    let out = preclude(&["mpf", "--input", file.to_str().unwrap(), "--format", "text"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("mp_f = 3 "));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn kfactor_and_product() {
    let out = preclude(&["kfactor", "--family", "gk", "--k", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["max_k_factor"], 2);
    assert_eq!(v["agree"], true);

    let out = preclude(&[
        "product",
        "--family",
        "path",
        "--n",
        "4",
        "--h-family",
        "path",
        "--h-n",
        "2",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(frac(&v["formula"]["value"]), (2, 1));
    assert_eq!(v["formula"]["witness_x"], serde_json::json!([0]));
    assert_eq!(v["formula"]["witness_y"], serde_json::json!([1, 3]));
    assert_eq!(v["bound"]["equality"], true);
    assert!(v["direct"]
        .as_object()
        .unwrap()
        .values()
        .all(|c| frac(c) == (2, 1)));
}
