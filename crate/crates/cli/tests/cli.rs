//! End-to-end tests driving the compiled binary.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .env_remove("WORKBENCH_BUDGET")
        .output()
        .expect("spawn workbench")
}

fn workbench_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .env_remove("WORKBENCH_BUDGET")
        .env(key, value)
        .output()
        .expect("spawn workbench")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).expect("utf8 stdout");
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"))
}

#[test]
fn lcm_of_braid_generators() {
    let out = workbench(&["lcm", "--presentation", "braid3", "a", "b"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["status"], "join");
    assert_eq!(v["join"], "aba");
    assert_eq!(v["complement_x"], "ba");
    assert_eq!(v["complement_y"], "ab");
}

#[test]
fn divides_yes_and_no() {
    let yes = workbench(&["divides", "--presentation", "braid3", "a", "aba"]);
    assert_eq!(code(&yes), 0);
    let v = json(&yes);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["complement"], "ba");

    let no = workbench(&["divides", "--presentation", "braid3", "aa", "aba"]);
    assert_eq!(code(&no), 0);
    assert_eq!(json(&no)["verdict"], "no");
}

#[test]
fn word_equality_in_the_trefoil_monoid() {
    let out = workbench(&["word", "equal", "--presentation", "torus(2,3)", "aa", "bbb"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["status"], "equal");

    let out = workbench(&["word", "equal", "--presentation", "torus(2,3)", "a", "b"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["status"], "distinct");
}

#[test]
fn reverse_reports_a_trace() {
    let out = workbench(&[
        "reverse",
        "--presentation",
        "braid3",
        "--word",
        "a^-1 b",
        "--trace",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["outcome"], "terminated");
    assert_eq!(v["positive_part"], "ba");
    assert_eq!(v["negative_part"], "ab");
    let trace = v["trace"].as_array().expect("trace array");
    assert_eq!(trace.len(), 1);
    assert_eq!(trace[0], "pos 0: a^-1 b → ba ab^-1");
}

#[test]
fn reverse_gets_stuck_without_common_multiples() {
    // three generators, relation on a and b only: a and c have no
    // common right multiple
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "generators: a b c").unwrap();
    writeln!(f, "relation: aba = bab").unwrap();
    let out = workbench(&[
        "reverse",
        "--presentation",
        f.path().to_str().unwrap(),
        "--word",
        "a^-1 c",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["outcome"].as_str().unwrap().starts_with("stuck"));
}

#[test]
fn cube_condition_on_braid_presentations() {
    let out = workbench(&["cube", "--presentation", "braid3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "holds");
}

#[test]
fn homogeneity_certificates() {
    let out = workbench(&["homog", "--presentation", "ex-u-bj(1,2)"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["certified"], true);
    assert_eq!(v["certificate"]["weights"]["a"], 1);
    assert_eq!(v["certificate"]["weights"]["b"], 2);

    // b^2 a b = a admits no weight assignment
    let out = workbench(&["homog", "--presentation", "remstillLCM"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["certified"], false);
}

#[test]
fn reversibility_closure_of_braid3() {
    let out = workbench(&["reversible", "--presentation", "braid3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "yes");
    let closure: Vec<&str> = v["closure"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(closure, ["1", "a", "ab", "b", "ba"]);
}

#[test]
fn garside_element_search() {
    let out = workbench(&["garside-w", "--presentation", "braid3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["w"], "aba");
    assert_eq!(v["coverage"]["all_hold"], true);
}

#[test]
fn graph_model_exports() {
    let out = workbench(&[
        "graph-model",
        "--family",
        "dihedral",
        "--m",
        "3",
        "--out",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let vertices: Vec<&str> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["label"].as_str().unwrap())
        .collect();
    assert!(vertices.contains(&"a^2"));

    let out = workbench(&[
        "graph-model",
        "--family",
        "dihedral",
        "--m",
        "3",
        "--out",
        "dot",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
}

#[test]
fn graph_k_theory_values() {
    let out = workbench(&["graph-k", "--family", "torus", "--p", "2", "--q", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["k0"], "0");
    assert_eq!(v["k1"], "0");

    let out = workbench(&["graph-k", "--family", "dihedral", "--m", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["k0"], "Z");
    assert_eq!(v["k1"], "Z");
}

#[test]
fn artin_normal_form() {
    let out = workbench(&["artin", "nf", "--type", "A3", "--word", "s1 s1 s2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["normal_form"], "s1 | s1 s2");
    assert_eq!(v["order"], 24);
}

#[test]
fn artin_equiv_witness() {
    let out = workbench(&[
        "artin", "equiv", "--type", "A3", "--from", "{s2}", "--to", "{s1,s3}",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["found"], true);
    assert!(v["witness"].as_str().is_some());
}

#[test]
fn artin_normal_form_counts() {
    let out = workbench(&["artin", "count-nf", "--type", "A2", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["count"], "8");
    assert_eq!(v["per_length"][0], "4");
    assert_eq!(v["per_length"][1], "8");
}

#[test]
fn artin_delta_and_parabolic_delta() {
    let out = workbench(&["artin", "delta", "--type", "A2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["element"], "s1 s2 s1");

    let out = workbench(&["artin", "delta", "--type", "A3", "--subset", "{s1,s3}"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["element"], "s1 s3");
}

#[test]
fn artin_accepts_a_matrix_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "1 3").unwrap();
    writeln!(f, "3 1").unwrap();
    let path = f.path().to_str().unwrap();
    let out = workbench(&["artin", "delta", "--matrix", path]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["element"], "s1 s2 s1");
}

#[test]
fn pipeline_with_trivial_coefficients() {
    let out = workbench(&[
        "ktheory", "pipeline", "--case", "torus", "--p", "2", "--q", "3",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["determined"], true);
    assert_eq!(v["report"]["k_crossed"][0]["group"], "Z");
    assert_eq!(v["report"]["k_crossed"][1]["group"], "Z");
}

#[test]
fn pipeline_needs_the_unit_hint_for_braid_coefficients() {
    let bare = workbench(&[
        "ktheory", "pipeline", "--case", "dihedral", "--m", "3", "--coeff", "b4-coeff",
    ]);
    assert_eq!(code(&bare), 2);
    let v = json(&bare);
    assert_eq!(v["determined"], false);
    let candidates = v["report"]["k_crossed"][0]["candidates"].as_array().unwrap();
    assert_eq!(candidates.len(), 2);

    let hinted = workbench(&[
        "ktheory", "pipeline", "--case", "dihedral", "--m", "3", "--coeff", "b4-coeff",
        "--hint", "unit-summand",
    ]);
    assert_eq!(code(&hinted), 0);
    let v = json(&hinted);
    assert_eq!(v["determined"], true);
    assert_eq!(v["report"]["k_crossed"][0]["group"], "Z + Z/2");
    assert_eq!(v["report"]["k_crossed"][1]["group"], "Z");
    assert_eq!(v["report"]["k_ideal"][0], "Z");
    assert_eq!(v["report"]["k_ideal"][1], "Z^2 + Z/2");
}

#[test]
fn pipeline_reads_coefficients_from_a_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"rank0":1,"rank1":2,"alpha0":[[1]],"beta0":[[1]],"alpha1":[[1,1],[0,1]],"beta1":[[2,1],[-1,0]]}}"#
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let out = workbench(&[
        "ktheory", "pipeline", "--case", "dihedral", "--m", "3", "--coeff", path,
        "--hint", "unit-summand",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["report"]["k_crossed"][0]["group"], "Z + Z/2");
}

#[test]
fn pipeline_reports_are_byte_identical() {
    let args = [
        "ktheory", "pipeline", "--case", "dihedral", "--m", "5",
    ];
    let a = workbench(&args);
    let b = workbench(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with(b"{\"schema_version\":1,"));
}

#[test]
fn pipeline_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = workbench(&[
        "ktheory", "pipeline", "--case", "torus", "--p", "3", "--q", "3",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["k_crossed"][0]["group"], "Z");
    assert_eq!(v["report"]["k_crossed"][1]["group"], "Z + Z/3");
}

#[test]
fn boundary_quotient_k_theory() {
    let out = workbench(&["ktheory", "boundary", "--presentation", "braid4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["k0"], "0");
    assert_eq!(v["unit_image"], 1);
    assert_eq!(v["k1"], "0");

    // five generators: Z/3 with the unit class as a generator
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "generators: a b c d e").unwrap();
    writeln!(f, "relation: ab = ba").unwrap();
    let out = workbench(&["ktheory", "boundary", "--presentation", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["k0"], "Z/3");

    let out = workbench(&["ktheory", "boundary", "--presentation", "braid3", "--infinite"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["k0"], "Z");
    assert_eq!(v["k1"], "0");

    // two generators and a finite alphabet is out of range
    let out = workbench(&["ktheory", "boundary", "--presentation", "braid3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn presentation_files_load() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "generators: a b").unwrap();
    writeln!(f, "relation: aba = bab").unwrap();
    let out = workbench(&["lcm", "--presentation", f.path().to_str().unwrap(), "a", "b"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["join"], "aba");
}

#[test]
fn presentation_check_reports_structure() {
    let out = workbench(&["presentation", "check", "--presentation", "braid3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["one_relator"], true);
    assert_eq!(v["complemented"], true);
    assert_eq!(v["first_letters_differ"], true);
}

#[test]
fn budget_exhaustion_is_undetermined() {
    let out = workbench_env(
        &["lcm", "--presentation", "remstillLCM", "a", "ba"],
        "WORKBENCH_BUDGET",
        "200",
    );
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["status"], "undetermined");

    // the --budget flag takes precedence over the environment
    let out = workbench_env(
        &["lcm", "--budget", "200", "--presentation", "remstillLCM", "a", "ba"],
        "WORKBENCH_BUDGET",
        "1000000",
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_input_exits_1() {
    let out = workbench(&["lcm", "--presentation", "nosuchfixture", "a", "b"]);
    assert_eq!(code(&out), 1);

    // missing required positional arguments
    let out = workbench(&["lcm", "--presentation", "braid3"]);
    assert_eq!(code(&out), 1);

    // word with a letter outside a..z
    let out = workbench(&["lcm", "--presentation", "braid3", "a!", "b"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_exits_0() {
    let out = workbench(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = workbench(&["ktheory", "pipeline", "--help"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn pretty_output_is_valid_json() {
    let out = workbench(&["--pretty", "cube", "--presentation", "braid3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("{\n"));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "holds");
}
