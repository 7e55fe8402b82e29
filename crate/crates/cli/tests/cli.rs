use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hrqss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrqss")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn deal(dir: &Path, name: &str, args: &[&str]) -> (Output, String) {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut full = vec!["deal"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    (hrqss(&full), path)
}

#[test]
fn n1n_deal_has_one_qubit_and_two_bits_per_player() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = deal(dir.path(), "a.json", &["--scheme", "n1n", "--n", "4", "--secret", "0", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let bundle: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let players = bundle["players"].as_array().unwrap();
    assert_eq!(players.len(), 4);
    for p in players {
        assert_eq!(p["quantum_dims"], serde_json::json!([2]));
        assert_eq!(p["classical"].as_array().unwrap().len(), 2);
    }
    assert_eq!(bundle["seed"], 7);
    assert!(stdout(&out).contains("bound saturated"));
}

#[test]
fn same_seed_same_file() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--scheme", "hrqss", "--k", "3", "--n", "4", "--nqr", "4", "--d", "5", "--secret", "7", "--seed", "42"];
    let (_, a) = deal(dir.path(), "a.json", &args);
    let (_, b) = deal(dir.path(), "b.json", &args);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let mut other = args;
    other[13] = "43";
    let (_, c) = deal(dir.path(), "c.json", &other);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn hqss_reports_three_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let (out, _) = deal(dir.path(), "h.json", &["--scheme", "hqss", "--k", "6", "--n", "7", "--d", "2", "--secret", "1", "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("Q formula 3 qubits"), "{}", stdout(&out));
}

#[test]
fn reconstruct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (_, n1n) = deal(dir.path(), "a.json", &["--scheme", "n1n", "--n", "4", "--secret", "2", "--seed", "3"]);
    let ok = hrqss(&["reconstruct", "--in", &n1n, "--subset", "1,2,3"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("fidelity 1.000000000000"));
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &n1n, "--subset", "4,2,1"])), 0);
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &n1n, "--subset", "1,2"])), 4);
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &n1n, "--subset", "1,two"])), 2);
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &n1n, "--subset", "1,2,7"])), 2);

    let (_, hq) = deal(dir.path(), "h.json", &["--scheme", "hqss", "--k", "6", "--n", "7", "--d", "2", "--secret", "0", "--seed", "5"]);
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &hq, "--subset", "2,3,4,5,6,7"])), 0);
    // every quantum share but too few key shares
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &hq, "--subset", "1,2,3"])), 4);
    // only one of the three quantum shares
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &hq, "--subset", "3,4,5,6"])), 5);
}

#[test]
fn amplitude_file_secret_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let secret = dir.path().join("secret.json");
    std::fs::write(&secret, "[[0.6, 0], [0, 0.8]]").unwrap();
    let s = secret.to_string_lossy().into_owned();
    let (out, bundle) = deal(dir.path(), "b.json", &["--scheme", "nn", "--n", "2", "--d", "2", "--secret", &s, "--seed", "0"]);
    assert_ne!(code(&out), 0, "two qubits need four amplitudes");
    std::fs::write(&secret, "[[0.6, 0], [0, 0.8], [0, 0], [0, 0]]").unwrap();
    let (out, _) = deal(dir.path(), "b.json", &["--scheme", "nn", "--n", "2", "--d", "2", "--secret", &s, "--seed", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &bundle, "--subset", "1,2"])), 0);
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &bundle, "--subset", "2"])), 4);
}

#[test]
fn tampered_bundle_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let (_, path) = deal(dir.path(), "a.json", &["--scheme", "n1n", "--n", "4", "--secret", "1", "--seed", "9"]);
    let mut bundle: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let bit = &mut bundle["players"][0]["classical"][0]["value"];
    *bit = Value::from(1 - bit.as_u64().unwrap());
    std::fs::write(&path, bundle.to_string()).unwrap();
    // player 1's flipped bit changes the decoded key
    assert_ne!(code(&hrqss(&["reconstruct", "--in", &path, "--subset", "1,2,3"])), 0);
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &path, "--subset", "2,3,4"])), 0);
    std::fs::write(&path, "{").unwrap();
    assert_eq!(code(&hrqss(&["reconstruct", "--in", &path, "--subset", "2,3,4"])), 2);
}

#[test]
fn parameter_errors_name_the_constraint() {
    let out = hrqss(&["deal", "--scheme", "hqss", "--k", "2", "--n", "4", "--secret", "0", "--seed", "1", "--out", "/dev/null"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no-cloning: n ≤ 2k−1"), "{}", stderr(&out));
    let out = hrqss(&["verify", "--scheme", "n1n", "--n", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n ∈ {4, 6}"));
    assert_eq!(code(&hrqss(&["verify", "--scheme", "bb84", "--n", "3"])), 2);
    assert_eq!(code(&hrqss(&["verify", "--scheme", "nn", "--n", "2", "--sabotage", "overclaim"])), 2);
    assert_eq!(code(&hrqss(&["cost", "--k", "1", "--n", "3"])), 2);
}

#[test]
fn verify_passes_and_sabotage_fails() {
    let pass = hrqss(&["verify", "--scheme", "n1n", "--n", "6"]);
    assert_eq!(code(&pass), 0, "{}", stdout(&pass));
    assert!(stdout(&pass).contains("result: PASS"));
    let fail = hrqss(&["verify", "--scheme", "n1n", "--n", "4", "--sabotage", "direct-key"]);
    assert_eq!(code(&fail), 1);
    assert!(stdout(&fail).contains("MISMATCH"));
}

#[test]
fn structured_report_lists_every_subset() {
    let out = hrqss(&["verify", "--scheme", "n1n", "--n", "4", "--tolerance", "1e-9", "--report", "structured"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let subsets = v["subsets"].as_array().unwrap();
    assert_eq!(subsets.len(), 16);
    assert_eq!(v["pass"], true);
    for s in subsets {
        let size = s["subset"].as_array().unwrap().len();
        if size >= 3 {
            assert!(s["min_fidelity"].as_f64().unwrap() > 1.0 - 1e-9);
        } else {
            assert!(s["max_trace_distance"].as_f64().unwrap() < 1e-9);
        }
    }
    // one subset per line
    assert_eq!(stdout(&out).lines().filter(|l| l.contains("\"subset\"")).count(), 16);
}

#[test]
fn naive_route_is_guarded() {
    let out = hrqss(&["verify", "--scheme", "n1n", "--n", "6", "--route", "naive"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn cost_tables() {
    let out = hrqss(&["cost", "--k", "6", "--n", "7", "--d", "2", "--sweep-nqr"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|w| w.first().is_some_and(|f| f.parse::<usize>().is_ok()))
        .collect();
    assert_eq!(rows.len(), 5);
    assert_eq!((rows[0][0], rows[0][4]), ("3", "3"));
    assert_eq!((rows[4][0], rows[4][4]), ("7", "1.4"));

    let boundary = stdout(&hrqss(&["cost", "--k", "2", "--n", "3", "--sweep-nqr"]));
    assert_eq!(boundary.lines().filter(|l| l.trim_start().starts_with('3')).count(), 1);

    let nn = stdout(&hrqss(&["cost", "--k", "3", "--n", "3", "--d", "4"]));
    let row: Vec<&str> = nn.lines().nth(2).unwrap().split_whitespace().collect();
    assert_eq!(row[4], "2");
}
