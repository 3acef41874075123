use std::path::PathBuf;
use std::process::{Command, Output};

fn syzcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzcalc")).args(args).output().expect("run syzcalc")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn betti_of_the_residue_field_fixture() {
    let o = syzcalc(&["betti", &fixture("s-mod-xy.mod"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let values: Vec<u64> = json(&o)["entries"].as_array().unwrap().iter().map(|e| e["value"].as_u64().unwrap()).collect();
    assert_eq!(values, [1, 2, 1]);
    let o = syzcalc(&["betti", &fixture("twisted-cubic.mod"), "--format", "csv"]);
    assert_eq!(stdout(&o), "p,q,value\n0,0,1\n1,1,3\n2,1,2\n");
}

#[test]
fn koszul_of_sections() {
    let o = syzcalc(&["koszul", "--b", "0", "--d", "3", "--p", "1", "--q", "1"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "3\n".to_string()));
    let o = syzcalc(&["koszul", "--b", "-2", "--d", "4", "--p", "1", "--q", "1", "--format", "json"]);
    assert_eq!(json(&o)["dimension"], 8);
}

#[test]
fn koszul_matches_betti_on_a_fixture() {
    let path = fixture("two-generators.mod");
    let k = syzcalc(&["koszul", &path, "--q-min", "0", "--q-max", "2", "--format", "csv"]);
    let b = syzcalc(&["betti", &path, "--format", "csv"]);
    let nonzero = |s: String| s.lines().filter(|l| !l.ends_with(",0")).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(nonzero(stdout(&k)), nonzero(stdout(&b)));
}

#[test]
fn polygraph_verdicts_and_guards() {
    let o = syzcalc(&["polygraph", "--n", "1", "--k", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"]["kind"], "ext-zero");
    let o = syzcalc(&["polygraph", "--n", "3", "--k", "1"]);
    assert!(stdout(&o).contains("invariants-zero"), "{}", stdout(&o));
    let o = syzcalc(&["polygraph", "--n", "2", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource guard"));
}

#[test]
fn input_errors_exit_with_one() {
    let o = syzcalc(&["gb", "--vars", "x,y", "--ideal", "x^2 +"]);
    assert_eq!(o.status.code(), Some(1));
    let o = syzcalc(&["betti", "/nonexistent/module.mod"]);
    assert_eq!(o.status.code(), Some(1));
    let o = syzcalc(&["--field", "fp:3", "polygraph", "--n", "3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn basis_guard_exits_with_two() {
    let o = syzcalc(&["gb", "--vars", "x,y,z", "--ideal", "x^3 - y*z, y^3 - x*z, z^3 - x*y", "--max-basis", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gb_orders_and_fields() {
    let o = syzcalc(&["--order", "lex", "gb", "--vars", "x,y", "--ideal", "x^2 + y, x*y - 1", "--format", "json"]);
    let basis = json(&o)["basis"].clone();
    assert_eq!(basis, serde_json::json!(["y^3 + 1", "x + y^2"]));
    let o = syzcalc(&["--field", "fp:5", "gb", "--vars", "x", "--ideal", "5*x + 1"]);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = syzcalc(&["betti", "--vars", "x,y", "--ideal", "x,y", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), "p,q,value\n0,0,1\n1,0,2\n2,0,1\n");
}

#[test]
fn module_json_round_trip() {
    let o = syzcalc(&["sections", "--b", "0", "--d", "3", "--format", "json"]);
    let desc = json(&o)["presentation"].clone();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cubic.json");
    std::fs::write(&path, serde_json::to_string(&desc).unwrap()).unwrap();
    let o = syzcalc(&["betti", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(stdout(&o), "p,q,value\n0,0,1\n1,1,3\n2,1,2\n");
}

#[test]
fn ampleness_from_json() {
    let o = syzcalc(&["ample", "--input", &fixture("points-json-example.json"), "--p-max", "3", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["report"]["order"], 3);
    assert_eq!(v["report"]["evidence"], "proved");
    assert_eq!(v["jets"][0]["surjective"], true);
    let o = syzcalc(&["ample", "--m", "2", "--p-max", "3"]);
    assert!(stdout(&o).contains("very ampleness order 2 (proved)"));
    let o = syzcalc(&["--seed", "7", "ample", "--m", "2", "--strategy", "sampled", "--format", "json"]);
    assert_eq!(json(&o)["report"]["evidence"], "sampled");
}

#[test]
fn curve_and_report() {
    let o = syzcalc(&["curve-bound", "--g", "0", "--d", "3", "--b", "0", "--p", "1", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["verdict"]["verdict"], "certified");
    assert_eq!(v["criterion"]["chi_rr"], "9");
    assert_eq!(v["criterion"]["chi_closed_form"], "6");
    let o = syzcalc(&["report", "--n", "3", "--p", "1", "--vanishing", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["effective_bound"]["d"], 8);
    assert_eq!(v["gonality"]["covering_gonality_at_least"], 3);
}

#[test]
fn seeded_reports_are_reproducible() {
    let args = ["--seed", "11", "ample", "--m", "3", "--strategy", "sampled", "--trials", "12", "--format", "json"];
    let a = syzcalc(&args);
    let b = syzcalc(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.stdout, b.stdout);
}
