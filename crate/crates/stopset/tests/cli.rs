//! End-to-end tests of the `stopset` binary: golden output bytes for
//! every subcommand and format, the exit-code contract (0 success,
//! 2 domain/usage, 3 input format, 4 resource cap), and determinism
//! across repeat runs and worker counts.

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

/// The running example: a 3 x 7 matrix whose columns are a permutation of
/// the Hamming matrix with m = 3.
const EXAMPLE: &str = "1010101\n1100110\n1111000";

const HAMMING_M3_TEXT: &str = "0 1\n1 0\n2 0\n3 10\n4 23\n5 21\n6 7\n7 1\n";
const HAMMING_M3_JSON: &str =
    "{\"n\":7,\"coeffs\":[\"1\",\"0\",\"0\",\"10\",\"23\",\"21\",\"7\",\"1\"]}\n";
const HAMMING_M3_CSV: &str = "0,1\n1,0\n2,0\n3,10\n4,23\n5,21\n6,7\n7,1\n";

const HAMMING_M4: [i64; 16] = [
    1, 0, 0, 69, 526, 1979, 4333, 6211, 6403, 5005, 3003, 1365, 455, 105, 15, 1,
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stopset"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn binary")
}

/// Runs the binary expecting success and returns stdout as UTF-8.
fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout is not UTF-8")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("no exit code")
}

fn stderr_of(args: &[&str]) -> String {
    String::from_utf8_lossy(&run(args).stderr).into_owned()
}

/// Writes a matrix file into `dir` and returns its path.
fn matrix_file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

// ---------------------------------------------------------------------------
// hamming
// ---------------------------------------------------------------------------

#[test]
fn hamming_m3_golden_all_formats() {
    assert_eq!(stdout_of(&["hamming", "--m", "3"]), HAMMING_M3_TEXT);
    assert_eq!(
        stdout_of(&["--format", "json", "hamming", "--m", "3"]),
        HAMMING_M3_JSON
    );
    assert_eq!(
        stdout_of(&["--format", "csv", "hamming", "--m", "3"]),
        HAMMING_M3_CSV
    );
    // The default format is text.
    assert_eq!(
        stdout_of(&["--format", "text", "hamming", "--m", "3"]),
        stdout_of(&["hamming", "--m", "3"])
    );
}

#[test]
fn hamming_m4_all_methods_byte_identical() {
    let expected: String = HAMMING_M4
        .iter()
        .enumerate()
        .map(|(l, c)| format!("{l} {c}\n"))
        .collect();
    for method in ["theorem2", "doublesum", "inclusion-exclusion", "brute"] {
        assert_eq!(
            stdout_of(&["hamming", "--m", "4", "--method", method]),
            expected,
            "method {method}"
        );
    }
}

#[test]
fn hamming_upto_truncates_but_json_keeps_n() {
    assert_eq!(
        stdout_of(&["hamming", "--m", "4", "--upto", "3"]),
        "0 1\n1 0\n2 0\n3 69\n"
    );
    assert_eq!(
        stdout_of(&["--format", "json", "hamming", "--m", "4", "--upto", "3"]),
        "{\"n\":15,\"coeffs\":[\"1\",\"0\",\"0\",\"69\"]}\n"
    );
    // Large m works once the output is bounded; S_3 = (5^9 - 3^10 + 2^10)/6.
    assert_eq!(
        stdout_of(&["hamming", "--m", "9", "--upto", "3"]),
        "0 1\n1 0\n2 0\n3 315850\n"
    );
    // Without --upto the 512-entry default span is refused.
    assert_eq!(exit_code(&["hamming", "--m", "9"]), 2);
    assert!(stderr_of(&["hamming", "--m", "9"]).contains("--upto"));
}

#[test]
fn hamming_rejects_bad_parameters() {
    assert_eq!(exit_code(&["hamming", "--m", "0"]), 2);
    assert_eq!(exit_code(&["hamming", "--m", "1"]), 2);
    assert_eq!(exit_code(&["hamming", "--m", "32"]), 2);
    assert_eq!(exit_code(&["hamming", "--m", "3", "--upto", "8"]), 2);
    // Unknown method names are usage errors (clap exits 2).
    assert_eq!(exit_code(&["hamming", "--m", "3", "--method", "magic"]), 2);
}

#[test]
fn hamming_resource_caps() {
    // Brute force at m = 6 would enumerate 2^63 subsets.
    assert_eq!(exit_code(&["hamming", "--m", "6", "--method", "brute"]), 4);
    // Inclusion-exclusion is capped at 20 rows and must refuse before
    // materializing the 2^21 - 1 column matrix.
    assert_eq!(
        exit_code(&["hamming", "--m", "21", "--method", "inclusion-exclusion"]),
        4
    );
}

#[test]
fn brute_force_cap_is_tunable_via_environment() {
    let args = ["hamming", "--m", "4", "--method", "brute"];
    // Untouched, m = 4 (n = 15) is within the built-in cap.
    assert_eq!(exit_code(&args), 0);
    // Lowering the cap below 15 turns the same run into a resource error.
    let out = bin()
        .env("STOPSET_MAX_BRUTE_N", "10")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("STOPSET_MAX_BRUTE_N"),
        "stderr should name the variable"
    );
    // A malformed value is a domain error, not silently ignored.
    let out = bin()
        .env("STOPSET_MAX_BRUTE_N", "lots")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

#[test]
fn enumerate_stopping_matches_hamming_golden() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();
    // The example is a column permutation of the m = 3 Hamming matrix, so
    // both methods must reproduce the same golden vector.
    assert_eq!(stdout_of(&["enumerate", p]), HAMMING_M3_TEXT);
    assert_eq!(
        stdout_of(&["enumerate", p, "--method", "inclusion-exclusion"]),
        HAMMING_M3_TEXT
    );
    assert_eq!(
        stdout_of(&["--format", "json", "enumerate", p]),
        HAMMING_M3_JSON
    );
}

#[test]
fn enumerate_weight_golden() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();
    assert_eq!(
        stdout_of(&["enumerate", p, "--kind", "weight"]),
        "0 1\n1 0\n2 0\n3 7\n4 7\n5 0\n6 0\n7 1\n"
    );
    // Weight counting has no inclusion-exclusion route.
    let args = [
        "enumerate",
        p,
        "--kind",
        "weight",
        "--method",
        "inclusion-exclusion",
    ];
    assert_eq!(exit_code(&args), 2);
    assert!(stderr_of(&args).contains("only --method brute"));
}

#[test]
fn enumerate_input_errors() {
    let dir = TempDir::new().unwrap();
    let ragged = matrix_file(&dir, "ragged.txt", "101\n10");
    let args = ["enumerate", ragged.to_str().unwrap()];
    assert_eq!(exit_code(&args), 3);
    assert!(stderr_of(&args).contains("line 2"));

    let empty = matrix_file(&dir, "empty.txt", "");
    assert_eq!(exit_code(&["enumerate", empty.to_str().unwrap()]), 3);

    let missing = dir.path().join("missing.txt");
    let args = ["enumerate", missing.to_str().unwrap()];
    assert_eq!(exit_code(&args), 3);
    assert!(stderr_of(&args).contains("cannot read"));
}

// ---------------------------------------------------------------------------
// btable
// ---------------------------------------------------------------------------

#[test]
fn btable_csv_spot_values() {
    let out = stdout_of(&["--format", "csv", "btable"]);
    assert!(out.starts_with("0,0,1\n"), "got {out:?}");
    assert!(out.contains("\n2,3,-5\n"));
    assert!(out.contains("\n5,7,3304\n"));
    assert!(out.contains("\n7,7,5040\n"));
    assert_eq!(out.lines().count(), 64, "default table is 8 x 8");
}

#[test]
fn btable_text_grid_shape() {
    let out = stdout_of(&["btable", "--qmax", "3", "--vmax", "6"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5, "header plus four rows");
    let header = lines[0].trim_start();
    assert!(header.starts_with("v=0") && header.ends_with("v=6"));
    assert!(lines[1].starts_with("q=0"));
    assert!(lines[3].contains("-5"), "row q=2 holds b(2,3) = -5");
    assert!(lines[4].contains("-26"), "row q=3 holds b(3,4) = -26");
}

#[test]
fn btable_json_structure() {
    let out = stdout_of(&["--format", "json", "btable", "--qmax", "5", "--vmax", "7"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["qmax"], 5);
    assert_eq!(v["vmax"], 7);
    assert_eq!(v["values"][2][3], "-5");
    assert_eq!(v["values"][5][7], "3304");
    assert_eq!(v["values"][0][0], "1");
}

#[test]
fn btable_rejects_oversized_indices() {
    assert_eq!(exit_code(&["btable", "--qmax", "65"]), 2);
    assert_eq!(exit_code(&["btable", "--vmax", "65"]), 2);
}

// ---------------------------------------------------------------------------
// peel
// ---------------------------------------------------------------------------

#[test]
fn peel_outcomes_all_formats() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();

    // {2, 3, 5} is a minimum stopping set of the example: stuck at once.
    assert_eq!(
        stdout_of(&["peel", p, "--erase", "2,3,5"]),
        "stuck steps=0 residual=2,3,5\n"
    );
    assert_eq!(
        stdout_of(&["--format", "csv", "peel", p, "--erase", "2,3,5"]),
        "stuck,0,2;3;5\n"
    );
    assert_eq!(
        stdout_of(&["--format", "json", "peel", p, "--erase", "2,3,5"]),
        "{\"status\":\"stuck\",\"steps\":0,\"residual\":[2,3,5]}\n"
    );

    // A single erasure is always recoverable here.
    assert_eq!(
        stdout_of(&["peel", p, "--erase", "4"]),
        "recovered steps=1\n"
    );
    assert_eq!(
        stdout_of(&["--format", "csv", "peel", p, "--erase", "4"]),
        "recovered,1,\n"
    );
    assert_eq!(
        stdout_of(&["--format", "json", "peel", p, "--erase", "4"]),
        "{\"status\":\"recovered\",\"steps\":1,\"residual\":[]}\n"
    );

    // Duplicates and stray whitespace in the list are tolerated.
    assert_eq!(
        stdout_of(&["peel", p, "--erase", " 4 ,4,"]),
        "recovered steps=1\n"
    );
    // The empty pattern is trivially recovered in zero steps.
    assert_eq!(stdout_of(&["peel", p, "--erase", ""]), "recovered steps=0\n");
}

#[test]
fn peel_erasure_list_errors() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();
    // Junk tokens are input format errors.
    assert_eq!(exit_code(&["peel", p, "--erase", "2,x"]), 3);
    // Out-of-range indices are domain errors.
    assert_eq!(exit_code(&["peel", p, "--erase", "9"]), 2);
    assert_eq!(exit_code(&["peel", p, "--erase", "0"]), 2);
}

// ---------------------------------------------------------------------------
// bec
// ---------------------------------------------------------------------------

#[test]
fn bec_exact_endpoints_and_frozen_value() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();
    assert_eq!(
        stdout_of(&["bec", p, "--epsilon", "0", "--exact"]),
        "epsilon=0 exact=0\n"
    );
    assert_eq!(
        stdout_of(&["bec", p, "--epsilon", "1", "--exact"]),
        "epsilon=1 exact=1\n"
    );
    // Frozen from the exhaustive failure census of the example.
    assert_eq!(
        stdout_of(&["bec", p, "--epsilon", "0.3", "--exact"]),
        "epsilon=0.3 exact=0.19086299999999992\n"
    );
    let json = stdout_of(&["--format", "json", "bec", p, "--epsilon", "0.3", "--exact"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["epsilon"], 0.3);
    assert_eq!(v["exact"], 0.19086299999999992);
}

#[test]
fn bec_exact_respects_column_cap() {
    let dir = TempDir::new().unwrap();
    let wide = matrix_file(&dir, "wide.txt", &"1".repeat(21));
    assert_eq!(
        exit_code(&["bec", wide.to_str().unwrap(), "--epsilon", "0.5", "--exact"]),
        4
    );
}

#[test]
fn bec_usage_and_domain_errors() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();
    // A mode must be chosen.
    let args = ["bec", p, "--epsilon", "0.3"];
    assert_eq!(exit_code(&args), 2);
    assert!(stderr_of(&args).contains("--exact or --trials"));
    // --exact and --trials conflict; --seed requires --trials (clap).
    assert_eq!(
        exit_code(&["bec", p, "--epsilon", "0.3", "--exact", "--trials", "5"]),
        2
    );
    assert_eq!(
        exit_code(&["bec", p, "--epsilon", "0.3", "--exact", "--seed", "1"]),
        2
    );
    // Probabilities outside [0, 1] are rejected.
    assert_eq!(exit_code(&["bec", p, "--epsilon", "1.5", "--exact"]), 2);
    assert_eq!(exit_code(&["bec", p, "--epsilon", "-0.1", "--exact"]), 2);
    assert_eq!(
        exit_code(&["bec", p, "--epsilon", "1.5", "--trials", "10"]),
        2
    );
}

#[test]
fn bec_monte_carlo_is_deterministic_and_worker_invariant() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();
    let base = [
        "bec", p, "--epsilon", "0.3", "--trials", "20000", "--seed", "42",
    ];
    let first = stdout_of(&base);
    // Repeat runs are byte-identical.
    assert_eq!(stdout_of(&base), first);
    // So are runs with different worker counts.
    let mut w1 = vec!["--workers", "1"];
    w1.extend_from_slice(&base);
    let mut w3 = vec!["--workers", "3"];
    w3.extend_from_slice(&base);
    assert_eq!(stdout_of(&w1), first);
    assert_eq!(stdout_of(&w3), first);
    // The default seed is 0.
    let implicit = stdout_of(&["bec", p, "--epsilon", "0.3", "--trials", "5000"]);
    let explicit = stdout_of(&[
        "bec", p, "--epsilon", "0.3", "--trials", "5000", "--seed", "0",
    ]);
    assert_eq!(implicit, explicit);
    assert!(implicit.contains("seed=0"));
}

// ---------------------------------------------------------------------------
// Cross-cutting.
// ---------------------------------------------------------------------------

#[test]
fn workers_flag_does_not_change_enumeration_output() {
    let dir = TempDir::new().unwrap();
    let path = matrix_file(&dir, "example.txt", EXAMPLE);
    let p = path.to_str().unwrap();
    let reference = stdout_of(&["enumerate", p]);
    assert_eq!(stdout_of(&["--workers", "1", "enumerate", p]), reference);
    assert_eq!(stdout_of(&["--workers", "3", "enumerate", p]), reference);
}

#[test]
fn json_output_round_trips_through_the_library() {
    let printed = stdout_of(&["--format", "json", "hamming", "--m", "4"]);
    let parsed = stopset::enumerator::Enumerator::from_json_str(printed.trim_end()).unwrap();
    assert_eq!(parsed.n(), 15);
    assert_eq!(format!("{}\n", parsed.to_json_string()), printed);
}

#[test]
fn unknown_subcommands_are_usage_errors() {
    assert_eq!(exit_code(&["frobnicate"]), 2);
    assert_eq!(exit_code(&[]), 2);
}
