use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tavforge")).args(args).env_remove("TAVFORGE_CACHE").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn tav_order_of_nine_46() {
    let o = run(&["tav-order", "9_46", "--bound", "24"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("O(9_46) = 24"));
    let o = run(&["tav-order", "9_46", "--bound", "24", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["result"]["tav_order"], 24);
    assert_eq!(v["config"]["bound"], 24);
    assert_eq!(v["config"]["command"], "tav-order");
    assert_eq!(v["result"]["witnesses"][0]["group"], "24.12/S4");
}

#[test]
fn verify_examples() {
    assert_eq!(code(&run(&["verify", "extension", "--knot", "3_1", "--group", "S3", "--n", "2"])), 0);
    let o = run(&["verify", "twobridge-s4", "--bmax", "9", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: "));
    assert_eq!(lines.next().unwrap(), "b,a,epimorphisms,verdicts,mod2_nonzero");
    assert!(lines.all(|l| l.ends_with(",nonvanishing,true")));
    assert_eq!(code(&run(&["verify", "decomposition", "--group", "D15", "--n", "2"])), 0);
    assert_eq!(code(&run(&["verify", "quotient", "--knot", "3_1", "--group", "S3"])), 0);
    assert_eq!(code(&run(&["verify", "cyclic", "--knot", "5_2", "--n", "3"])), 0);
}

#[test]
fn classify_catalogs() {
    let v = json(&run(&["classify", "--format", "json"]));
    let orders: Vec<u64> = v["result"]["tav_orders"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(orders.len(), 35);
    assert_eq!((orders[0], orders[34]), (24, 198));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.catalog");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = run(&["classify", empty.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["tav_orders"], Value::Array(vec![]));

    let bad = dir.path().join("bad.catalog");
    std::fs::write(&bad, "24.12/S4 | 24 | sym | n=4\nno fields here\n").unwrap();
    let o = run(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    std::fs::write(&bad, "5.1/C5 | 5 | cyclic | n=4\n").unwrap();
    let o = run(&["classify", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["result"]["errors"][0]["line"], 1);
}

#[test]
fn exit_codes() {
    // fibered knots have no TAV group
    assert_eq!(code(&run(&["tav-check", "4_1", "S4"])), 1);
    assert_eq!(code(&run(&["tav-check", "9_46", "S4"])), 0);
    assert_eq!(code(&run(&["tav-check", "no_such_knot", "S4"])), 2);
    assert_eq!(code(&run(&["tav-check", "9_46", "Q17"])), 2);
    assert_eq!(code(&run(&["tav-order", "9_46", "--bound", "10"])), 2);
    assert_eq!(code(&run(&["tav-check", "9_46", "S4", "--node-budget", "3"])), 3);
    assert_eq!(code(&run(&["verify", "extension", "--knot", "4_1", "--group", "S3", "--n", "2"])), 2);
}

#[test]
fn reports_are_reproducible() {
    let args = ["tav-check", "9_46", "S4", "--format", "json", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["config"]["policy"]["seed"], 7);
}

#[test]
fn group_spec_strings() {
    let named = json(&run(&["tav-check", "9_35", "S4", "--format", "json"]));
    let perm = json(&run(&["tav-check", "9_35", "perm:(1 2 3 4);(1 2)", "--format", "json"]));
    assert_eq!(named["result"]["is_tav_group"], true);
    assert_eq!(perm["result"]["is_tav_group"], true);
    assert_eq!(named["result"]["epimorphisms"], perm["result"]["epimorphisms"]);
}

#[test]
fn inline_knots() {
    assert!(stdout(&run(&["tav-order", "9_46#3_1", "--bound", "24"])).contains("= 24"));
    assert!(stdout(&run(&["tav-order", "torus=2,5"])).contains("fibered"));
    let o = run(&["verify", "extension", "--knot", "braid=s=2: 1 1 1", "--group", "S3", "--n", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn cache_directory_and_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let flag = dir.path().join("flag");
    let args = ["tav-check", "9_46", "S4", "--format", "json", "--cache", flag.to_str().unwrap()];
    let first = run(&args);
    let stored = std::fs::read_dir(&flag).unwrap().count();
    assert!(stored > 0);
    assert_eq!(run(&args).stdout, first.stdout);
    assert_eq!(std::fs::read_dir(&flag).unwrap().count(), stored);

    let env = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_tavforge")).args(["tav-check", "9_46", "S4"]).env("TAVFORGE_CACHE", &env).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_dir(&env).unwrap().count() > 0);
}

#[test]
fn satellite_rules() {
    let o = run(&["satellite", "--companion-alexander", "t^8 - t^7 + t^5 - t^4 + t^3 - t + 1", "--d", "15", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["verdict"]["rule"], "cyclotomic-root");
    assert_eq!(v["result"]["verdict"]["vanishing"], true);
    let o = run(&["satellite", "--companion-alexander", "t^2 - t + 1", "--d", "2", "--base-vanishing", "false", "--format", "json"]);
    assert_eq!(json(&o)["result"]["verdict"]["rule"], "neither");
    assert_eq!(code(&run(&["satellite", "--companion-alexander", "t^2 - t + 1", "--d", "2"])), 2);
    let o = run(&["satellite", "--knot", "4_1^3_1", "--group", "D5", "--direct"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("predictions match"));
}
