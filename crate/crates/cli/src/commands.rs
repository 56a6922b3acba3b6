//! Subcommand implementations.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use sdirng_core::certification::scan::{alpha_grid, write_curve_csv, write_threshold_csv};
use sdirng_core::certification::{
    certify_min_entropy, indicator_scan, privacy_threshold, shared_randomness_test, zero_crossing,
    Aggregate, CertificationResult, CertifyOptions, ConstraintSet, IndicatorMode,
};
use sdirng_core::estimation::{
    conditional_tables, observed_efficiency, p_prime_average, probability_bounds, probability_bounds_with,
    ConditionalTable, IntervalMethod, Tally,
};
use sdirng_core::extraction::{build_bit_string, von_neumann, write_packed};
use sdirng_core::sim::{cell_inputs, read_log, write_log_iter, Outcome, RoundIter, RoundRecord};
use sdirng_core::Error;

use crate::config::RunConfig;
use crate::report::Report;
use crate::CliError;

fn out_path(cfg: &RunConfig, name: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    Ok(cfg.out_dir.join(name))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

fn load_log(path: &Path) -> Result<Vec<RoundRecord>, CliError> {
    let f = File::open(path)?;
    Ok(read_log(BufReader::new(f))?)
}

fn options(cfg: &RunConfig, aggregate: Aggregate, eta: f64) -> CertifyOptions {
    CertifyOptions {
        aggregate,
        restarts: cfg.restarts,
        seed: cfg.seed.unwrap_or(0),
        efficiency: eta,
        ..Default::default()
    }
}

/// Certify under both aggregates, primary first.
fn certify_both(cfg: &RunConfig, c: &ConstraintSet, eta: f64) -> Result<Vec<CertificationResult>, CliError> {
    let other = match cfg.aggregate {
        Aggregate::WorstEvent => Aggregate::UniformAverage,
        Aggregate::UniformAverage => Aggregate::WorstEvent,
    };
    [cfg.aggregate, other]
        .into_iter()
        .map(|a| certify_min_entropy(c, &options(cfg, a, eta)).map_err(CliError::from))
        .collect()
}

fn emit(report: &Report, path: &Path) -> Result<(), CliError> {
    print!("{}", report.finish());
    std::fs::write(path, report.finish())?;
    println!("\nreport written to {}", path.display());
    Ok(())
}

pub fn simulate(cfg: &RunConfig, output: &str) -> Result<(), CliError> {
    let protocol = cfg.protocol()?;
    let device = cfg.device()?;
    let path = out_path(cfg, output)?;
    let mut t = Tally::default();
    let rounds = RoundIter::new(protocol, device)?.inspect(|r| t.add(r));
    let mut w = create(&path)?;
    write_log_iter(rounds, &mut w)?;
    w.flush()?;
    let echo = PathBuf::from(format!("{}.config", path.display()));
    std::fs::write(&echo, cfg.echo())?;
    println!(
        "wrote {} ({} rounds, {} unblocked, {} detected); config echo {}",
        path.display(),
        t.total(),
        t.unblocked,
        t.detected(),
        echo.display()
    );
    Ok(())
}

fn print_table(name: &str, table: &ConditionalTable) {
    println!("{name}: x z p(0) p(1) p(-)");
    for cell in 0..8 {
        let (x, z) = cell_inputs(cell);
        println!(
            "  {x} {} {:.6} {:.6} {:.6}",
            z.index(),
            table.get(x, z, Outcome::Zero),
            table.get(x, z, Outcome::One),
            table.get(x, z, Outcome::Empty)
        );
    }
}

pub fn estimate(cfg: &RunConfig, log: &Path, method: &str) -> Result<(), CliError> {
    let method = match method {
        "clopper-pearson" | "clopper_pearson" => IntervalMethod::ClopperPearson,
        "poisson" => IntervalMethod::Poisson,
        other => return Err(CliError::Usage(format!("unknown interval method {other:?} (clopper-pearson, poisson)"))),
    };
    let records = load_log(log)?;
    let t = sdirng_core::estimation::tally(&records)?;
    let (raw, detected) = conditional_tables(&t)?;
    print_table("raw (unblocked rounds)", &raw);
    print_table("detected only", &detected);
    println!("p'_av = {:.6}", p_prime_average(&detected)?);
    println!("observed eta = {:.6}", observed_efficiency(&t)?);
    let bounds = probability_bounds_with(&t, cfg.confidence, method)?;
    let path = out_path(cfg, "bounds.csv")?;
    let mut w = create(&path)?;
    bounds.write_csv(&mut w)?;
    w.flush()?;
    println!("bounds written to {}", path.display());
    Ok(())
}

/// The blocker acts iff `y ≤ λ`; a log that disagrees was produced with a
/// different λ.
fn check_lambda(records: &[RoundRecord], lambda: f64) -> Result<(), CliError> {
    match records.iter().find(|r| r.blocked != (r.y <= lambda)) {
        Some(r) => Err(CliError::Core(Error::Parse {
            line: r.round_id as usize + 2,
            message: format!(
                "round {} has y = {} and blocked = {}, inconsistent with lambda = {lambda}",
                r.round_id, r.y, r.blocked
            ),
        })),
        None => Ok(()),
    }
}

pub fn certify_log(cfg: &RunConfig, log: &Path) -> Result<(), CliError> {
    let records = load_log(log)?;
    check_lambda(&records, cfg.lambda)?;
    let t = sdirng_core::estimation::tally(&records)?;
    let (_, detected) = conditional_tables(&t)?;
    let p_av = p_prime_average(&detected)?;
    let eta = observed_efficiency(&t)?;
    let bounds = probability_bounds(&t, cfg.confidence)?;

    let mut report = Report::default();
    report.inputs(cfg, &log.display().to_string()).estimation(&t, p_av, eta, Some(&bounds));

    let threshold = privacy_threshold(cfg.lambda, eta, cfg.confidence, t.detected(), cfg.sync_model)?;
    let verdict = shared_randomness_test(p_av, &threshold);
    report.privacy(&verdict);
    let path = out_path(cfg, "certify_report.txt")?;
    if !verdict.pass {
        report.section("certification").kv("status", "aborted: privacy test failed, no bits certified");
        emit(&report, &path)?;
        return Err(CliError::PrivacyFail(verdict.reason.unwrap_or_default()));
    }

    let constraints = ConstraintSet::from_bounds(&bounds);
    let results = certify_both(cfg, &constraints, eta)?;
    report.constraints(&constraints).certification(cfg.aggregate, &results);
    emit(&report, &path)
}

pub fn certify_indicator(cfg: &RunConfig, mode: &str, alpha: f64, delta: f64) -> Result<(), CliError> {
    let mode: IndicatorMode = mode.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let constraints = ConstraintSet::uniform(mode, alpha, delta);
    constraints.validate()?;
    let mut report = Report::default();
    report.inputs(cfg, "uniform indicator").kv("eta", cfg.eta).constraints(&constraints);
    let results = certify_both(cfg, &constraints, cfg.eta)?;
    report.certification(cfg.aggregate, &results);
    emit(&report, &out_path(cfg, "certify_report.txt")?)
}

pub fn extract(cfg: &RunConfig, log: &Path) -> Result<(), CliError> {
    let records = if std::fs::metadata(log)?.len() == 0 {
        Vec::new()
    } else {
        load_log(log)?
    };
    let raw = build_bit_string(&records);
    if raw.bits.is_empty() && !records.is_empty() {
        eprintln!("warning: every round was blocked; the raw string is empty");
    }
    let extracted = von_neumann(&raw.bits);
    for (name, bits) in [("raw.bin", &raw.bits), ("extracted.bin", &extracted)] {
        let data = out_path(cfg, name)?;
        let meta = out_path(cfg, &format!("{name}.meta"))?;
        let mut d = create(&data)?;
        let mut m = create(&meta)?;
        write_packed(bits, &mut d, &mut m)?;
        d.flush()?;
        m.flush()?;
    }
    let ones = extracted.iter().filter(|b| **b).count();
    let p = &raw.provenance;
    println!("raw bits = {}", raw.bits.len());
    println!(
        "raw provenance: detected_zero = {}, detected_one = {}, empty_as_zero = {}",
        p.detected_zero, p.detected_one, p.empty_as_zero
    );
    println!("extracted bits = {}", extracted.len());
    if !extracted.is_empty() {
        println!("extracted fraction of ones = {:.6}", ones as f64 / extracted.len() as f64);
    }
    println!("outputs in {}", cfg.out_dir.display());
    Ok(())
}

pub fn figure_indicators(cfg: &RunConfig, delta: f64, lo: f64, hi: f64, step: f64) -> Result<(), CliError> {
    let grid = alpha_grid(lo, hi, step).map_err(|e| CliError::Usage(e.to_string()))?;
    for mode in [IndicatorMode::Vector, IndicatorMode::WorstCase, IndicatorMode::Average] {
        for aggregate in [Aggregate::WorstEvent, Aggregate::UniformAverage] {
            let curve = indicator_scan(mode, &grid, delta, &options(cfg, aggregate, 1.0))?;
            let path = out_path(cfg, &format!("indicators_{}_{}.csv", mode.name(), aggregate.name()))?;
            let mut w = create(&path)?;
            write_curve_csv(&mut w, &curve)?;
            w.flush()?;
            let crossing = zero_crossing(&curve, 1e-6).map_or("none".to_string(), |c| format!("{c:.4}"));
            println!("{} [{}]: zero crossing {crossing} -> {}", mode.name(), aggregate.name(), path.display());
        }
    }
    Ok(())
}

pub fn figure_thresholds(cfg: &RunConfig, etas: &[f64], beta_step: f64) -> Result<(), CliError> {
    if !(beta_step > 0.0 && beta_step < 1.0) {
        return Err(CliError::Usage(format!("beta step must lie in (0,1), got {beta_step}")));
    }
    let mut betas: Vec<f64> = (0..).map(|i| i as f64 * beta_step).take_while(|b| *b < 1.0 - 1e-12).collect();
    betas.extend([0.995, 0.999, 0.9999, 0.99999]);
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    let mut rows = Vec::new();
    for &eta in etas {
        for &beta in &betas {
            let t = privacy_threshold(beta, eta, cfg.confidence, 1, cfg.sync_model)?;
            rows.push((beta, eta, t.threshold));
        }
    }
    let path = out_path(cfg, "thresholds.csv")?;
    let mut w = create(&path)?;
    write_threshold_csv(&mut w, &rows)?;
    w.flush()?;
    println!("{} rows ({} model) -> {}", rows.len(), cfg.sync_model, path.display());
    Ok(())
}

pub fn figure_probabilities(cfg: &RunConfig, log: &Path) -> Result<(), CliError> {
    let records = load_log(log)?;
    let t = sdirng_core::estimation::tally(&records)?;
    let bounds = probability_bounds(&t, cfg.confidence)?;
    let path = out_path(cfg, "probabilities.csv")?;
    let mut w = create(&path)?;
    bounds.write_csv(&mut w)?;
    w.flush()?;
    bounds.write_csv(std::io::stdout().lock())?;
    println!("-> {}", path.display());
    Ok(())
}
