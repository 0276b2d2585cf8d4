use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confmod")).args(args).output().expect("spawn confmod")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn verify_neveu_schwarz_passes() {
    let o = run(&["verify", "algebra", "--name", "neveu_schwarz", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn reducibility_certificate_exits_one() {
    let o = run(&[
        "probe", "submodule", "--family", "virasoro_MVD", "--param", "alpha=1/2", "--param", "delta=0",
        "--candidate", "(d+1/2)u",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("closed: reducible certificate"));
}

#[test]
fn irreducible_probe_is_open() {
    let o = run(&[
        "probe", "submodule", "--family", "virasoro_MVD", "--param", "alpha=1/2", "--param", "delta=3",
        "--candidate", "(d+1/2)u", "--contains", "u",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("combination"));
}

#[test]
fn broken_module_has_m1_witness() {
    let o = run(&["verify", "module", "--file", &fixture("broken.json"), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let reports = v.as_array().map(|a| a.to_vec()).unwrap_or_else(|| vec![v.clone()]);
    let axioms = reports.iter().find(|r| r["suite"].as_str().unwrap().starts_with("module axioms")).unwrap();
    let hit = axioms["violations"].as_array().unwrap().iter().any(|w| {
        w["check"] == "M1" && w["location"]["indices"]["m"] == 2 && w["location"]["indices"]["n"] == 1
    });
    assert!(hit, "{axioms}");
}

#[test]
fn family_module_passes_both_suites() {
    let o = run(&["verify", "module", "--family", "ns_MND", "--param", "alpha=2/3", "--param", "delta=-1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("[PASS] module axioms"));
    assert!(text.contains("[PASS] mode compatibility"));
}

#[test]
fn physics_bracket_rendering() {
    let o = run(&["modes", "bracket", "--algebra", "virasoro", "--left", "L:2", "--right", "L:1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("[L_1, L_0] = L_1"));
    let o = run(&["modes", "bracket", "--algebra", "neveu_schwarz", "--left", "G:1", "--right", "G:1"]);
    assert!(stdout(&o).contains("[G_1/2, G_1/2] = 2L_1"));
}

#[test]
fn locality_prints_reliable_window() {
    let o = run(&["locality", "--pair", "L,L", "--window", "-6:10"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("reliable window: [-4, 8]"));
    assert!(text.contains("order: 2"));
    let o = run(&["locality", "--pair", "L,L", "--window", "0:2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn module_locality_and_action() {
    let o = run(&["locality", "--family", "virasoro_MVD", "--param", "alpha=1/3", "--param", "delta=2", "--pair", "2L,u"]);
    assert!(stdout(&o).contains("order: 2"), "{}", stdout(&o));
    let o = run(&[
        "modes", "act", "--family", "virasoro_MVD", "--param", "alpha=1/3", "--param", "delta=2", "--left", "L:2",
        "--right", "u:0", "--window", "-1:2",
    ]);
    assert_eq!(code(&o), 0);
    // (Δ-1)(m+1) - n = 2 and α at m = 1, n = 0
    assert!(stdout(&o).contains("L_(2) u_(0) = 2u_(1) + 1/3u_(2)"), "{}", stdout(&o));
}

#[test]
fn ope_matches_table() {
    let o = run(&["ope", "--algebra", "virasoro", "--pair", "L,L", "--j", "0..4", "--window", "-6:10", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["data"]["j=1 table"], "2L");
    assert_eq!(v["data"]["j=3 table"], "0");
}

#[test]
fn json_is_byte_identical() {
    let args = ["verify", "algebra", "--name", "vir_current", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["verify", "module", "--family", "virasoro_MVD", "--param", "alpha=0.5"])), 2);
    assert_eq!(code(&run(&["verify", "module", "--family", "virasoro_MVD", "--param", "beta=1"])), 2);
    let o = run(&["verify", "algebra", "--file", &fixture("decimal.json")]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-rational literal"));
    assert_eq!(code(&run(&["verify", "algebra", "--file", "/nonexistent.json"])), 2);
}

#[test]
fn spec_file_algebra() {
    let o = run(&["verify", "algebra", "--file", &fixture("sl2_currents.json"), "--window", "-2:2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] mode jacobi"));
}

#[test]
fn singular_probe() {
    let o = run(&[
        "probe", "singular", "--family", "virasoro_MVD", "--param", "alpha=1/2", "--param", "delta=3", "--level", "2",
        "--degree-cap", "3", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["data"]["basis"], serde_json::json!(["u"]));
    assert_eq!(v["data"]["independent"], true);
}

#[test]
fn classify_rank1_json() {
    let o = run(&["classify", "rank1", "--algebra", "virasoro", "--nmax", "2", "--deg", "1", "--branch-report", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["data"]["verdict"], "match");
    assert_eq!(v["data"]["branches"].as_array().unwrap().len(), 2);
    let o = run(&["classify", "rank1", "--algebra", "neveu_schwarz", "--nmax", "2", "--deg", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("experimental"));
}
