use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn somass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_somass"))
        .args(args)
        .env_remove("SOMASS_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn somass_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_somass"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn mass_of_the_length_four_ternary_family() {
    let o = somass(&["mass", "--family", "so", "-p", "3", "-n", "4", "--k1", "1", "--k2", "1"]);
    assert_eq!(status(&o), 0);
    assert_eq!(stdout(&o).trim(), "192");
}

#[test]
fn mass_json_keeps_integers_as_strings() {
    let o = somass(&["mass", "--family", "self-dual", "-p", "3", "-n", "2", "--format", "json"]);
    assert_eq!(status(&o), 0);
    let v = json(&o);
    assert_eq!(v["value"], "1");
    assert_eq!(v["family"], "self-dual");
}

#[test]
fn type2_mass_matches_classification_total() {
    let m = somass(&["mass", "--family", "type2-pm1", "-n", "8"]);
    assert_eq!(status(&m), 0);
    let c = somass(&["classify", "-p", "2", "-n", "8", "--family", "type2-pm1"]);
    assert_eq!(status(&c), 0);
    let v = json(&c);
    assert_eq!(v["certified"], true);
    // Text output starts with the total, then the per-type breakdown.
    let total = stdout(&m).lines().next().unwrap().to_string();
    assert_eq!(v["expected_mass"].as_str().unwrap(), total);
}

#[test]
fn lifts_of_the_worked_example_residue() {
    let r = write_tmp("residue.txt", "3 4\n1 1 1 0\n");
    let t = write_tmp("torsion.txt", "3 4\n1 1 1 0\n0 1 2 0\n");
    let o = somass(&[
        "enumerate",
        "--lifts",
        "--residue",
        r.to_str().unwrap(),
        "--torsion",
        t.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0);
    let text = stdout(&o);
    assert!(text.ends_with("# count 3\n"), "{text}");
    assert_eq!(text.matches("3 4\n").count(), 3);
}

#[test]
fn residue_can_come_from_stdin() {
    let o = somass_stdin(&["enumerate", "--lifts", "--residue", "-"], "# C1\n3 4\n1 1 1 0\n");
    assert_eq!(status(&o), 0);
    // Free lifts: 3^(1 * (8 - 3 - 1) / 2) = 9.
    assert!(stdout(&o).ends_with("# count 9\n"));
}

#[test]
fn oracle_lists_the_small_binary_family() {
    let o = somass(&["enumerate", "--oracle", "-p", "2", "-n", "2", "--family", "so"]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).ends_with("# count 5\n"), "{}", stdout(&o));
}

#[test]
fn empty_family_counts_zero() {
    // Type {2, 0} needs a self-orthogonal plane inside F_3^2, which does not exist.
    let o = somass(&["enumerate", "--oracle", "-p", "3", "-n", "2", "--k1", "2", "--k2", "0"]);
    assert_eq!(status(&o), 0);
    assert_eq!(stdout(&o), "# count 0\n");
}

#[test]
fn oracle_refuses_over_budget() {
    let o = somass(&["enumerate", "--oracle", "-p", "5", "-n", "4"]);
    assert_eq!(status(&o), 69);
    assert!(o.stdout.is_empty());
}

#[test]
fn classify_worked_example_is_certified() {
    let o = somass(&["classify", "-p", "3", "-n", "4", "--k1", "1", "--k2", "1", "--family", "so"]);
    assert_eq!(status(&o), 0);
    let v = json(&o);
    assert_eq!(v["certified"], true);
    assert_eq!(v["mass_sum"], "192");
    let mut auts: Vec<u64> = v["representatives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["aut_order"].as_str().unwrap().parse().unwrap())
        .collect();
    auts.sort_unstable();
    assert_eq!(auts, vec![4, 8, 12, 24]);
}

#[test]
fn classify_zero_code() {
    let o = somass(&["classify", "-p", "2", "-n", "4", "--k1", "0", "--k2", "0", "--format", "tsv"]);
    assert_eq!(status(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2, "{text}");
    assert!(text.contains("certified true"));
}

#[test]
fn oracle_classification_agrees() {
    let a = somass(&["classify", "-p", "2", "-n", "4", "--family", "sd"]);
    let b = somass(&["classify", "-p", "2", "-n", "4", "--family", "sd", "--oracle"]);
    assert_eq!((status(&a), status(&b)), (0, 0));
    let (a, b) = (json(&a), json(&b));
    assert_eq!(a["representatives"], b["representatives"]);
    assert_eq!(a["mass_sum"], "3");
}

#[test]
fn verify_worked_example() {
    let o = somass(&["verify", "--worked-example"]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).starts_with("[PASS] criterion 1"));
}

#[test]
fn verify_map_images() {
    for map in ["psi", "phi", "phi-alpha"] {
        let p = if map == "psi" { "5" } else { "2" };
        let o = somass(&["verify", "--map", map, "-p", p, "-m", "2", "-n", "5", "--trials", "50"]);
        assert_eq!(status(&o), 0, "{map}: {}", stdout(&o));
        // phi-alpha only applies to trials whose row space avoids the all-one vector.
        assert!(stdout(&o).contains(" checks, 0 failures"), "{map}: {}", stdout(&o));
    }
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(status(&somass(&["mass", "-p", "4", "-n", "3"])), 64);
    assert_eq!(status(&somass(&["mass", "--family", "nonsense", "-n", "3"])), 64);
    assert_eq!(status(&somass(&["frobnicate"])), 64);
    assert_eq!(status(&somass(&["mass"])), 64);
}

#[test]
fn malformed_matrix_exits_65() {
    let o = somass_stdin(&["enumerate", "--lifts", "--residue", "-"], "3 4\n1 1 x 0\n");
    assert_eq!(status(&o), 65);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn reruns_are_byte_identical() {
    let runs: [&[&str]; 3] = [
        &["classify", "-p", "3", "-n", "4", "--k1", "1", "--k2", "1"],
        &["verify", "--map", "phi-alpha", "-p", "2", "-m", "3", "-n", "6", "--seed", "7"],
        &["enumerate", "--oracle", "-p", "3", "-n", "3", "--family", "so"],
    ];
    for args in runs {
        let a = somass(args);
        let b = somass(args);
        let mut with_workers: Vec<&str> = vec!["--workers", "1"];
        with_workers.extend_from_slice(args);
        let c = somass(&with_workers);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?} with one worker");
    }
}
