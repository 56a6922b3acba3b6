use std::path::Path;
use std::process::{Command, Output};

fn sdirng(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdirng"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("SDIRNG_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn simulate(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    simulate_n(dir, name, "200000", extra)
}

fn simulate_n(dir: &Path, name: &str, n: &str, extra: &[&str]) -> std::path::PathBuf {
    let mut args = vec!["simulate", "--output", name, "--n", n, "--seed", "4"];
    args.extend_from_slice(extra);
    let o = sdirng(dir, &args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir.join(name)
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulate(dir.path(), "a.csv", &[]);
    let b = simulate(dir.path(), "b.csv", &["--threads", "1"]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn missing_seed_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = sdirng(dir.path(), &["simulate", "--n", "10"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(!dir.path().join("rounds.csv").exists());
}

#[test]
fn out_of_range_parameter_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = sdirng(dir.path(), &["simulate", "--n", "10", "--seed", "1", "--lambda", "1.5"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn unknown_figure_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&sdirng(dir.path(), &["figures", "histogram"])), 2);
}

#[test]
fn config_echo_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulate(dir.path(), "a.csv", &["--lambda", "0.9", "--eta", "0.3"]);
    let echo = dir.path().join("a.csv.config");
    let o = sdirng(dir.path(), &["--config", echo.to_str().unwrap(), "simulate", "--output", "b.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let b = dir.path().join("b.csv");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read_to_string(echo).unwrap(),
        std::fs::read_to_string(dir.path().join("b.csv.config")).unwrap()
    );
}

#[test]
fn truncated_log_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let log = simulate(dir.path(), "rounds.csv", &[]);
    let text = std::fs::read_to_string(&log).unwrap();
    let cut: String = text.lines().take(1000).collect::<Vec<_>>().join("\n") + "\n17,0";
    std::fs::write(&log, cut).unwrap();
    let o = sdirng(dir.path(), &["estimate", "--log", log.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("line 1001"), "{}", stderr(&o));
}

#[test]
fn sync_attack_log_aborts_certification() {
    let dir = tempfile::tempdir().unwrap();
    let log = simulate_n(dir.path(), "sync.csv", "1000000", &["--strategy", "sync"]);
    let o = sdirng(dir.path(), &["certify", "--log", log.to_str().unwrap(), "--restarts", "8"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    let report = std::fs::read_to_string(dir.path().join("certify_report.txt")).unwrap();
    assert!(report.contains("aborted"));
    assert!(!report.contains("bits_per_round"), "{report}");
}

#[test]
fn honest_log_certifies_positive_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let log = simulate_n(dir.path(), "honest.csv", "1000000", &[]);
    let o = sdirng(dir.path(), &["certify", "--log", log.to_str().unwrap(), "--aggregate", "uniform_average"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = std::fs::read_to_string(dir.path().join("certify_report.txt")).unwrap();
    assert!(report.contains("pass = true"), "{report}");
    let rate: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("uniform_average.bits_per_round = "))
        .expect("rate line")
        .parse()
        .unwrap();
    assert!(rate > 0.0, "{report}");
}

#[test]
fn empty_log_extracts_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("empty.csv");
    std::fs::write(&log, "").unwrap();
    let o = sdirng(dir.path(), &["extract", "--log", log.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read(dir.path().join("extracted.bin")).unwrap(), Vec::<u8>::new());
    assert_eq!(
        std::fs::read_to_string(dir.path().join("extracted.bin.meta")).unwrap().trim(),
        "n_bits=0"
    );
}

#[test]
fn threshold_figure_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = sdirng(dir.path(), &["figures", "thresholds", "--etas", "0.06,0.5", "--beta-step", "0.1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("thresholds.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("beta,eta,threshold"));
    for line in lines {
        let t: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((0.5..=1.0).contains(&t) || t.is_nan(), "{line}");
    }
}

#[test]
fn indicator_certification_reports_both_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let o = sdirng(
        dir.path(),
        &["certify", "--mode", "vector", "--alpha", "0.8535", "--delta", "1e-4", "--restarts", "16"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("worst_event") && out.contains("uniform_average"), "{out}");
}
