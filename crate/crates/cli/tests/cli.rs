use std::process::{Command, Output};

use serde_json::Value;

const TREFOIL: &str = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]";
const FIGURE_EIGHT: &str = "PD[X(4,2,5,1),X(2,7,3,8),X(8,6,1,5),X(6,3,7,4)]";
const HOPF: &str = "PD[X(4,2,3,1),X(2,4,1,3)]";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khf2")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn kh_table_for_trefoil() {
    let o = run(&["kh", "--pd", TREFOIL]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("q^-1 + q^-3 + t^-2 q^-5 + t^-2 q^-7 + t^-3 q^-7 + t^-3 q^-9"), "{s}");
    let v = json(&["kh", "--pd", TREFOIL, "--format", "json"]);
    assert_eq!(v["theory"], "khovanov");
    let table = v["table"].as_object().unwrap();
    assert_eq!(table.len(), 6);
    for key in ["(0,-1)", "(0,-3)", "(-2,-5)", "(-2,-7)", "(-3,-7)", "(-3,-9)"] {
        assert_eq!(table[key], 1, "{key}");
    }
}

#[test]
fn secondary_json() {
    let v = json(&["secondary", "--pd", TREFOIL, "--format", "json"]);
    assert_eq!(v["polynomial"], "q^-1 + q^-3");
    assert_eq!(v["table"], serde_json::json!({"(0,-1)": 1, "(0,-3)": 1}));
    assert_eq!(v["diagram"], TREFOIL);
}

#[test]
fn bn_marks_stable_row() {
    let o = run(&["bn", "--pd", TREFOIL]);
    assert!(stdout(&o).contains("j <= -9"));
    let v = json(&["bn", "--pd", TREFOIL, "--format", "json", "--jmin", "-13", "--jmax", "-1"]);
    assert_eq!(v["j_s"], -9);
    assert_eq!(v["window"], serde_json::json!([-13, -1]));
    assert_eq!(v["stable_column"], serde_json::json!({"0": 2}));
    assert_eq!(v["table"]["(0,-13)"], 2);
}

#[test]
fn filtered_and_reduced() {
    let v = json(&["filtered", "--pd", HOPF, "--format", "json"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["dims"], serde_json::json!({"0": 2, "2": 2}));
    let v = json(&["reduced", "--pd", TREFOIL, "--format", "json"]);
    assert_eq!(v["polynomial"], "q^-2 + t^-2 q^-6 + t^-3 q^-8");
    assert_eq!(v["filtered"], serde_json::json!({"0": 1}));
    let v = json(&["kh", "--pd", TREFOIL, "--reduced", "--basepoint", "4", "--format", "json"]);
    assert_eq!(v["theory"], "reduced khovanov");
    assert_eq!(v["polynomial"], "q^-2 + t^-2 q^-6 + t^-3 q^-8");
}

#[test]
fn thin_figure_eight() {
    let v = json(&["thin", "--pd", FIGURE_EIGHT, "--format", "json"]);
    assert_eq!(v["s"], 0);
    assert_eq!(v["reconstructs"], true);
    assert_eq!(v["kh_prime"], "t q^2 + t^-2 q^-4");
}

#[test]
fn ss_pages() {
    let v = json(&["ss", "--pd", TREFOIL, "--format", "json"]);
    assert_eq!(v["collapse_page"], 2);
    assert_eq!(v["stabilized"], true);
    assert_eq!(v["abutment"], serde_json::json!({"0": 2}));
    assert_eq!(v["e1_e2_check"]["passed"], true);
    let v = json(&["ss", "--pd", TREFOIL, "--flavor", "graded", "--j", "-5", "--format", "json"]);
    assert_eq!(v["flavor"], serde_json::json!({"graded": -5}));
    assert_eq!(v["e1_e2_check"]["passed"], true);
    let v = json(&["ss", "--pd", TREFOIL, "--rmax", "1", "--format", "json"]);
    assert_eq!(v["pages"].as_array().unwrap().len(), 2);
    assert_eq!(v["stabilized"], false);
    assert!(v["e1_e2_check"].is_null());
    let o = run(&["ss", "--pd", TREFOIL, "--flavor", "graded"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    for cmd in ["kh", "beta", "secondary", "bn", "filtered", "ss", "check"] {
        let a = run(&[cmd, "--pd", TREFOIL, "--format", "json"]);
        let b = run(&[cmd, "--pd", TREFOIL, "--format", "json"]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v, "{cmd}");
    }
    let v = json(&["kh", "--pd", TREFOIL, "--format", "json", "--timing"]);
    assert!(v["timing_ms"].is_number());
}

#[test]
fn latex_output() {
    let o = run(&["kh", "--pd", TREFOIL, "--format", "latex"]);
    let s = stdout(&o);
    assert!(s.starts_with("\\begin{tabular}"), "{s}");
    assert!(s.contains("$\\mathbb{F}_2$"));
}

#[test]
fn file_input() {
    let dir = std::env::temp_dir().join(format!("khf2-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trefoil.pd");
    std::fs::write(&path, format!("# left trefoil\n{TREFOIL}\n")).unwrap();
    let v = json(&["secondary", "--file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(v["polynomial"], "q^-1 + q^-3");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["kh", "--pd", "PD[X(1,2,3)]"],
        vec!["kh", "--pd", "PD[X(1,2,1,2)]"],
        vec!["kh"],
        vec!["reduced", "--pd", HOPF],
        vec!["kh", "--pd", TREFOIL, "--reduced", "--basepoint", "99"],
        vec!["bn", "--pd", TREFOIL, "--jmin", "0", "--jmax", "-4"],
        vec!["nonsense"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_equivalent_and_inequivalent() {
    let kinked = "PD[X(1,4,2,5),X(3,8,4,1),X(5,2,6,3),X(6,8,7,7)]";
    let o = run(&["check", "--pd", TREFOIL, "--pd2", kinked]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = run(&["check", "--pd", TREFOIL, "--pd2", FIGURE_EIGHT]);
    assert_eq!(o.status.code(), Some(2));
    let witness: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(witness["passed"], false);
    assert!(witness["mismatches"].as_object().unwrap().contains_key("kh"));
}

#[test]
fn check_reports_harmonic_without_failing() {
    let v = json(&["check", "--pd", HOPF, "--format", "json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["harmonic"]["equals_filtered"], false);
}
