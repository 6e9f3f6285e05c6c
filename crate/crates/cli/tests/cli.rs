//! End-to-end tests of the `murmur` binary: exit codes, reproducible
//! output bytes, and the published preset scores.

use std::path::Path;
use std::process::{Command, Output};

const ALLCURVES: &str = "\
11 a 1 [0,-1,1,-10,-20] 0 5
11 a 2 [0,-1,1,-7820,-263580] 0 1
11 a 3 [0,-1,1,0,0] 0 5
14 a 1 [1,0,1,4,-6] 0 6
37 a 1 [0,0,1,-1,0] 1 1
37 b 1 [0,1,1,-23,-50] 0 3
389 a 1 [0,1,1,-2,0] 2 1
5077 a 1 [0,0,1,-7,6] 3 1
";

fn murmur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_murmur"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ingest_fixture(dir: &Path) -> String {
    let input = dir.join("allcurves.txt");
    let cache = dir.join("curves.apmx");
    std::fs::write(&input, ALLCURVES).unwrap();
    let out = murmur(&[
        "ingest",
        "--input",
        input.to_str().unwrap(),
        "--num-primes",
        "25",
        "--out",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    cache.to_str().unwrap().to_string()
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = murmur(&["slice", "--frobnicate"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_succeeds() {
    let out = murmur(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ingest"));
}

#[test]
fn missing_cache_is_data_error() {
    let out = murmur(&[
        "slice", "--cache", "/nonexistent.apmx", "--rank", "0", "--min", "1", "--max", "100",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn score_matches_published_examples() {
    let out = murmur(&["score", "--preset", "cond-10k-20k", "--ap", "1,1,1,1,-1,1,2,-4,-4,6"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0.00011 rank<2\n");

    let out = murmur(&["score", "--preset", "cond-10k-20k", "--ap", "0,-2,-1,-4,0,1,0,-8,0,-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0.97456 rank>=2\n");
}

#[test]
fn unknown_preset_is_usage_error() {
    let out = murmur(&["score", "--preset", "nope", "--ap", "1,2,3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn ingest_reports_counts_and_cache_info_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ingest_fixture(dir.path());
    let out = murmur(&["cache-info", "--cache", &cache]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("curves: 6"), "{text}");
    assert!(text.contains("primes per curve: 25"), "{text}");
    assert!(text.contains("rank 0: 3"), "{text}");
}

#[test]
fn empty_slice_is_data_error_with_bounds_in_message() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ingest_fixture(dir.path());
    let out = murmur(&["slice", "--cache", &cache, "--rank", "5", "--min", "1", "--max", "100"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("empty slice r=5, [1,100]"), "{err}");
}

#[test]
fn inverted_bounds_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ingest_fixture(dir.path());
    let out = murmur(&["slice", "--cache", &cache, "--rank", "0", "--min", "100", "--max", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn average_output_is_byte_reproducible_and_headed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ingest_fixture(dir.path());
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let run = murmur(&[
            "average", "--cache", &cache, "--rank", "0", "--min", "1", "--max", "100",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&run), 0);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("# murmur average "), "{text}");
    assert!(text.contains("seed=0"), "{text}");
}

#[test]
fn fit_writes_parameter_table() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ingest_fixture(dir.path());
    let out_path = dir.path().join("fit.csv");
    let run = murmur(&[
        "fit", "--cache", &cache, "--rank", "0", "--min", "1", "--max", "100",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("rank,N1,N2,A,alpha,B,beta,mse,iterations,converged"), "{text}");
    assert!(text.lines().count() >= 3, "{text}");
}

#[test]
fn histogram_rejects_uncached_prime() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ingest_fixture(dir.path());
    let out_path = dir.path().join("h.csv");
    let run = murmur(&[
        "histogram", "--cache", &cache, "--rank", "0", "--min", "1", "--max", "100",
        "--prime", "101", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 1);
}

#[test]
fn svg_format_emits_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ingest_fixture(dir.path());
    let out_path = dir.path().join("avg.svg");
    let run = murmur(&[
        "average", "--cache", &cache, "--rank", "0", "--rank", "1",
        "--min", "1", "--max", "100",
        "--format", "svg", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("<svg "), "{text}");
    assert!(text.contains("rank 1"), "{text}");
}
