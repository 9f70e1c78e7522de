use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn gshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gshift")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn check_d_on_golden_mean_holds() {
    let o = gshift(&["check-d", &data("golden.txt"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["holds"], true);
    assert!(v["counterexample"].is_null());
    assert!(!v["certificates"].as_array().unwrap().is_empty());
}

#[test]
fn check_d_failure_exits_one() {
    let o = gshift(&["check-d", &data("burst.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("property (D) fails"));
    let o = gshift(&["build-gd", &data("burst.txt")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inadmissible_word_exits_two() {
    let o = gshift(&["omega", &data("golden.txt"), "11", "--length", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotAdmissible"));
    assert!(o.stdout.is_empty());
}

#[test]
fn load_time_errors() {
    let o = gshift(&["lang", &data("golden.txt"), "--length", "1", "--format", "json"]);
    assert_eq!(json(&o)["words"], serde_json::json!(["0", "1"]));
    let o = gshift(&["gmeasure", &data("golden.txt"), "--weights", &data("golden_bad.weights"), "--depth", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvariantViolation"));
    let o = gshift(&[
        "transport",
        &data("golden.txt"),
        "--weights",
        &data("golden.weights"),
        "--coding",
        &data("golden_bad.coding"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvariantViolation"));
    let o = gshift(&["lang", &data("model.json"), "--length", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1, column 1"), "{}", stderr(&o));
}

#[test]
fn forbidden_word_input_matches_graph_input() {
    let a = gshift(&["lang", &data("golden.txt"), "--length", "6"]);
    let b = gshift(&["lang", &data("golden.forbidden"), "--forbidden", "--length", "6"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 21);
}

#[test]
fn gmeasure_table_feeds_verification() {
    let dir = std::env::temp_dir().join(format!("gshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = gshift(&["gmeasure", &data("golden.txt"), "--weights", &data("golden.weights"), "--depth", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let mut table = json(&o);
    let good = dir.join("good.json");
    std::fs::write(&good, &o.stdout).unwrap();
    let verify = |path: &PathBuf| {
        gshift(&[
            "verify-gmeasure",
            &data("golden.txt"),
            "--weights",
            &data("golden.weights"),
            "--table",
            path.to_str().unwrap(),
            "--format",
            "json",
        ])
    };
    let o = verify(&good);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);

    for pair in table["values"].as_array_mut().unwrap() {
        if pair[0] == "010" {
            pair[1] = "1/5".into();
        }
    }
    let bad = dir.join("bad.json");
    std::fs::write(&bad, table.to_string()).unwrap();
    let o = verify(&bad);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let cylinders: Vec<&str> = v["violations"].as_array().unwrap().iter().map(|x| x["cylinder"].as_str().unwrap()).collect();
    assert!(cylinders.contains(&"010"));

    let o = gshift(&[
        "transport",
        &data("golden.txt"),
        "--weights",
        &data("golden.weights"),
        "--coding",
        &data("golden.coding"),
        "--table",
        good.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["table_verified"], true);
    assert_eq!(v["identity_failures"], serde_json::json!([]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn measure_graph_commands() {
    let g = ["--weights".to_string(), data("golden.weights")];
    let o = gshift(&["mgraph-check", &data("golden.txt"), &g[0], &g[1], "--vertices", &data("golden.vertices")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = gshift(&["g-from-m", &data("golden.txt"), &g[0], &g[1], "--vertices", &data("golden.vertices"), "--format", "json"]);
    assert_eq!(json(&o)["contractive"], true);
    let o = gshift(&["mgraph-check", &data("golden.txt"), &g[0], &g[1], "--vertices", &data("golden_bad.vertices")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotTransitionComplete"));
    let o = gshift(&["m-from-g", &data("even.txt"), "--weights", &data("even.weights")]);
    assert_eq!(stdout(&o), "E E:1/1\nO O:1/1\n");
}

#[test]
fn eta_both_directions() {
    let o = gshift(&["eta", &data("model.json"), "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["chain"]["measures"][0], serde_json::json!({"a": "2/7", "b": "4/7", "c": "1/7"}));
    assert_eq!(v["chain"]["measures"][2], serde_json::json!({"a": "1/1"}));
    let o = gshift(&["eta", &data("chain.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "weights a:1/4 b:1/4 c:1/2\n");
}

#[test]
fn sample_is_seeded() {
    let run = |seed: &str| {
        stdout(&gshift(&[
            "sample",
            &data("golden.txt"),
            "--weights",
            &data("golden.weights"),
            "--seed",
            seed,
            "--length",
            "300",
        ]))
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
    assert!(!run("5").contains("11"));
}
