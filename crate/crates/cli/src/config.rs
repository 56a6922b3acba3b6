//! Flat `key = value` run configuration, shared by the config file, the
//! command-line flags and the echo sidecar.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sdirng_core::certification::Aggregate;
use sdirng_core::sim::{DeviceStrategy, ProtocolConfig, SyncModel};
use sdirng_core::sim::ClassicalAssignment;

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SDIRNG_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyId {
    Honest,
    Prng,
    Classical,
    Sync,
}

impl StrategyId {
    pub fn name(self) -> &'static str {
        match self {
            StrategyId::Honest => "honest",
            StrategyId::Prng => "prng",
            StrategyId::Classical => "classical",
            StrategyId::Sync => "sync",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "honest" => StrategyId::Honest,
            "prng" => StrategyId::Prng,
            "classical" => StrategyId::Classical,
            "sync" => StrategyId::Sync,
            _ => return None,
        })
    }
}

/// Every setting a command may need. All fields except `seed` have defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lambda: f64,
    pub eta: f64,
    pub n_rounds: u64,
    pub seed: Option<u64>,
    pub strategy: StrategyId,
    pub sync_model: SyncModel,
    pub hide: bool,
    pub confidence: f64,
    pub aggregate: Aggregate,
    pub restarts: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: 0.99,
            eta: 0.06,
            n_rounds: 1_000_000,
            seed: None,
            strategy: StrategyId::Honest,
            sync_model: SyncModel::PerBlock,
            hide: true,
            confidence: 0.99,
            aggregate: Aggregate::WorstEvent,
            restarts: 64,
            out_dir: std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from),
        }
    }
}

/// Optional overrides; `None` leaves the current value alone.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ConfigFlags {
    /// key=value configuration file; flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Blocking threshold λ (the blocker acts iff y ≤ λ).
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Channel detection efficiency η.
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    /// Number of rounds to simulate.
    #[arg(long = "n", global = true)]
    pub n_rounds: Option<u64>,
    /// Master seed; required for simulation, also seeds optimizer restarts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Device strategy: honest, prng, classical or sync.
    #[arg(long, global = true)]
    pub strategy: Option<String>,
    /// Synchronisation accounting: per_block or per_run.
    #[arg(long = "sync-model", global = true)]
    pub sync_model: Option<String>,
    /// Whether the sync attack hides its sync rounds as no-detections.
    #[arg(long, global = true)]
    pub hide: Option<bool>,
    /// Confidence level for the interval bounds and the privacy margin.
    #[arg(long, global = true)]
    pub confidence: Option<f64>,
    /// worst_event or uniform_average.
    #[arg(long, global = true)]
    pub aggregate: Option<String>,
    /// Optimizer restarts.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Output directory (default: $SDIRNG_OUT_DIR or the current directory).
    #[arg(long = "out-dir", global = true)]
    pub out_dir: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num = |v: &str| v.parse::<f64>().map_err(|e| usage(format!("{key}: {e}")));
        match key {
            "lambda" => self.lambda = num(value)?,
            "eta" => self.eta = num(value)?,
            "n_rounds" => self.n_rounds = value.parse().map_err(|e| usage(format!("{key}: {e}")))?,
            "seed" => self.seed = Some(value.parse().map_err(|e| usage(format!("{key}: {e}")))?),
            "strategy" => {
                self.strategy = StrategyId::parse(value)
                    .ok_or_else(|| usage(format!("unknown strategy {value:?} (honest, prng, classical, sync)")))?
            }
            "sync_model" => self.sync_model = value.parse().map_err(|e| usage(format!("{e}")))?,
            "hide" => self.hide = value.parse().map_err(|e| usage(format!("{key}: {e}")))?,
            "confidence" => self.confidence = num(value)?,
            "aggregate" => self.aggregate = value.parse().map_err(|e| usage(format!("{e}")))?,
            "restarts" => self.restarts = value.parse().map_err(|e| usage(format!("{key}: {e}")))?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            other => return Err(usage(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Apply a `key = value` document. Blank lines and `#` comments are
    /// ignored.
    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("{}:{}: expected key = value", origin.display(), i + 1)))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| usage(format!("{}:{}: {e}", origin.display(), i + 1)))?;
        }
        Ok(())
    }

    /// Defaults, then the config file, then explicit flags.
    pub fn resolve(flags: &ConfigFlags) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        if let Some(path) = &flags.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            c.apply_text(&text, path)?;
        }
        let f = flags;
        if let Some(v) = f.lambda {
            c.lambda = v;
        }
        if let Some(v) = f.eta {
            c.eta = v;
        }
        if let Some(v) = f.n_rounds {
            c.n_rounds = v;
        }
        if let Some(v) = f.seed {
            c.seed = Some(v);
        }
        if let Some(v) = &f.strategy {
            c.set("strategy", v)?;
        }
        if let Some(v) = &f.sync_model {
            c.set("sync_model", v)?;
        }
        if let Some(v) = f.hide {
            c.hide = v;
        }
        if let Some(v) = f.confidence {
            c.confidence = v;
        }
        if let Some(v) = &f.aggregate {
            c.set("aggregate", v)?;
        }
        if let Some(v) = f.restarts {
            c.restarts = v;
        }
        if let Some(v) = &f.out_dir {
            c.out_dir = v.clone();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        ProtocolConfig::new(self.lambda, self.eta, self.n_rounds, 0).map_err(|e| usage(e.to_string()))?;
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(usage(format!("confidence must lie in (0,1), got {}", self.confidence)));
        }
        if self.restarts == 0 {
            return Err(usage("restarts must be positive"));
        }
        Ok(())
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| usage("--seed is required (or seed = … in the config file)"))
    }

    pub fn protocol(&self) -> Result<ProtocolConfig, CliError> {
        ProtocolConfig::new(self.lambda, self.eta, self.n_rounds, self.require_seed()?).map_err(|e| usage(e.to_string()))
    }

    pub fn device(&self) -> Result<DeviceStrategy, CliError> {
        Ok(match self.strategy {
            StrategyId::Honest => DeviceStrategy::HonestQrac,
            StrategyId::Prng => DeviceStrategy::prng_only([0.5, 0.5]).map_err(|e| usage(e.to_string()))?,
            StrategyId::Classical => DeviceStrategy::ClassicalDeterministic(ClassicalAssignment::send_first_bit()),
            StrategyId::Sync => sdirng_core::sim::sync_attack_strategy(self.sync_model, self.hide),
        })
    }

    /// The effective configuration as a config document. Feeding it back
    /// through `--config` reproduces this configuration exactly.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "lambda = {:?}", self.lambda);
        let _ = writeln!(s, "eta = {:?}", self.eta);
        let _ = writeln!(s, "n_rounds = {}", self.n_rounds);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed = {seed}");
        }
        let _ = writeln!(s, "strategy = {}", self.strategy.name());
        let _ = writeln!(s, "sync_model = {}", self.sync_model);
        let _ = writeln!(s, "hide = {}", self.hide);
        let _ = writeln!(s, "confidence = {:?}", self.confidence);
        let _ = writeln!(s, "aggregate = {}", self.aggregate);
        let _ = writeln!(s, "restarts = {}", self.restarts);
        let _ = writeln!(s, "out_dir = {}", self.out_dir.display());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips() {
        let mut c = RunConfig {
            lambda: 0.3,
            eta: 0.1 + 0.2,
            seed: Some(9),
            strategy: StrategyId::Sync,
            sync_model: SyncModel::PerRun,
            hide: false,
            aggregate: Aggregate::UniformAverage,
            out_dir: PathBuf::from("/tmp/x y"),
            ..Default::default()
        };
        c.n_rounds = 17;
        let mut d = RunConfig::default();
        d.apply_text(&c.echo(), Path::new("echo")).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn comments_and_errors() {
        let mut c = RunConfig::default();
        c.apply_text("# header\n\nlambda = 0.5 # inline\n", Path::new("f")).unwrap();
        assert_eq!(c.lambda, 0.5);
        let err = c.apply_text("lambda 0.5\n", Path::new("f")).unwrap_err();
        assert!(err.to_string().contains("f:1"));
        assert!(c.apply_text("colour = red\n", Path::new("f")).is_err());
        assert!(c.apply_text("strategy = quantum\n", Path::new("f")).is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "lambda = 0.5\nseed = 3\n").unwrap();
        let flags = ConfigFlags {
            config: Some(path),
            lambda: Some(0.7),
            ..Default::default()
        };
        let c = RunConfig::resolve(&flags).unwrap();
        assert_eq!(c.lambda, 0.7);
        assert_eq!(c.seed, Some(3));
    }

    #[test]
    fn seed_has_no_default() {
        assert!(RunConfig::default().require_seed().is_err());
    }
}
