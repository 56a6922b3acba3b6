//! Monte-Carlo engine for the prepare / block / measure round structure.
//!
//! Each round draws a two-bit input `x` for the preparation device, a real
//! `y ∈ [0,1]` for the blocker and a setting bit `z` for the measurement
//! device. The blocker absorbs the system iff `y ≤ λ`; otherwise the
//! measurement device answers `0`, `1`, or nothing (`∅`).

mod log_format;
mod strategy;

pub use log_format::{read_log, write_log, write_log_iter, LOG_HEADER};
pub use strategy::{
    honest_basis, honest_preparation, sync_attack_strategy, ClassicalAssignment, DeviceState,
    DeviceStrategy, SyncModel,
};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::bloch::Bit;
use crate::error::{domain, Error, Result};
use crate::rng::{Stream, StreamSet};

/// Preparation input `x = x₀x₁`, stored as `2·x₀ + x₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Input(u8);

impl Input {
    pub const ALL: [Input; 4] = [Input(0), Input(1), Input(2), Input(3)];

    pub fn new(v: u8) -> Result<Self> {
        if v < 4 {
            Ok(Input(v))
        } else {
            domain(format!("preparation input must be in 0..4, got {v}"))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The bit the measurement device should recover under setting `z`.
    pub fn target(self, z: Bit) -> Bit {
        match z {
            Bit::Zero => Bit::from_bool(self.0 & 2 != 0),
            Bit::One => Bit::from_bool(self.0 & 1 != 0),
        }
    }

    pub fn label(self) -> &'static str {
        ["00", "01", "10", "11"][self.index()]
    }
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Input {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" => Ok(Input(0)),
            "01" => Ok(Input(1)),
            "10" => Ok(Input(2)),
            "11" => Ok(Input(3)),
            other => domain(format!("preparation input must be 00, 01, 10 or 11, got {other:?}")),
        }
    }
}

/// Index of the `(x, z)` cell in the 8-entry tables used throughout.
pub fn cell_index(x: Input, z: Bit) -> usize {
    x.index() * 2 + z.index()
}

/// Inverse of [`cell_index`].
pub fn cell_inputs(cell: usize) -> (Input, Bit) {
    (Input((cell / 2) as u8), Bit::from_bool(cell % 2 == 1))
}

/// Measurement outcome, including "no detection".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Zero,
    One,
    Empty,
}

impl Outcome {
    pub fn index(self) -> usize {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
            Outcome::Empty => 2,
        }
    }

    pub fn bit(self) -> Option<Bit> {
        match self {
            Outcome::Zero => Some(Bit::Zero),
            Outcome::One => Some(Bit::One),
            Outcome::Empty => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Zero => '0',
            Outcome::One => '1',
            Outcome::Empty => '-',
        }
    }
}

impl From<Bit> for Outcome {
    fn from(b: Bit) -> Self {
        match b {
            Bit::Zero => Outcome::Zero,
            Bit::One => Outcome::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    /// Blocking threshold; the blocker acts iff `y ≤ lambda`.
    pub lambda: f64,
    /// Detection probability of an unblocked system (honest devices), or the
    /// detection rate an adversary must reproduce.
    pub channel_efficiency: f64,
    pub n_rounds: u64,
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn new(lambda: f64, channel_efficiency: f64, n_rounds: u64, seed: u64) -> Result<Self> {
        let c = Self {
            lambda,
            channel_efficiency,
            n_rounds,
            seed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.lambda) {
            return domain(format!("lambda must lie in [0,1), got {}", self.lambda));
        }
        if !(self.channel_efficiency > 0.0 && self.channel_efficiency <= 1.0) {
            return domain(format!(
                "channel efficiency must lie in (0,1], got {}",
                self.channel_efficiency
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub round_id: u64,
    pub x: Input,
    pub y: f64,
    pub z: Bit,
    pub blocked: bool,
    pub b: Outcome,
}

impl RoundRecord {
    /// Whether the measurement device answered the bit it was asked for.
    pub fn success(&self) -> Option<bool> {
        self.b.bit().map(|b| b == self.x.target(self.z))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundLog {
    pub config: ProtocolConfig,
    pub records: Vec<RoundRecord>,
}

/// Draw the apparently-random inputs for a round.
pub fn draw_inputs(streams: &StreamSet, round_id: u64) -> (Input, f64, Bit) {
    let mut rng = streams.rng(Stream::Inputs, round_id);
    let x = Input(rng.random_range(0..4u8));
    let y: f64 = rng.random();
    let z = Bit::from_bool(rng.random::<bool>());
    (x, y, z)
}

/// Play one round with the given inputs. Deterministic in
/// `(config.seed, round_id)` and, for stateful strategies, the device state.
pub fn simulate_round(
    config: &ProtocolConfig,
    devices: &mut DeviceState,
    streams: &StreamSet,
    round_id: u64,
    x: Input,
    y: f64,
    z: Bit,
) -> RoundRecord {
    let blocked = y <= config.lambda;
    let b = devices.respond(config, streams, round_id, x, z, blocked);
    RoundRecord {
        round_id,
        x,
        y,
        z,
        blocked,
        b,
    }
}

/// Iterator over the rounds of a protocol run, for streaming consumers that
/// should not hold the whole log in memory.
pub struct RoundIter {
    config: ProtocolConfig,
    streams: StreamSet,
    devices: DeviceState,
    next: u64,
}

impl RoundIter {
    pub fn new(config: ProtocolConfig, strategy: DeviceStrategy) -> Result<Self> {
        config.validate()?;
        strategy.validate()?;
        Ok(Self {
            streams: StreamSet::new(config.seed),
            devices: DeviceState::new(strategy),
            config,
            next: 0,
        })
    }

    pub fn devices(&self) -> &DeviceState {
        &self.devices
    }
}

impl Iterator for RoundIter {
    type Item = RoundRecord;

    fn next(&mut self) -> Option<RoundRecord> {
        if self.next >= self.config.n_rounds {
            return None;
        }
        let id = self.next;
        self.next += 1;
        let (x, y, z) = draw_inputs(&self.streams, id);
        Some(simulate_round(&self.config, &mut self.devices, &self.streams, id, x, y, z))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.config.n_rounds - self.next) as usize;
        (n, Some(n))
    }
}

/// Run the full protocol. Stateless strategies are evaluated in parallel;
/// stateful ones (the synchronisation attack) sequentially.
pub fn run_protocol(config: &ProtocolConfig, strategy: &DeviceStrategy) -> Result<RoundLog> {
    config.validate()?;
    strategy.validate()?;
    if config.n_rounds == 0 {
        return Err(Error::InsufficientData("protocol run with zero rounds".into()));
    }
    let records = if strategy.is_stateful() {
        RoundIter::new(*config, *strategy)?.collect()
    } else {
        let streams = StreamSet::new(config.seed);
        (0..config.n_rounds)
            .into_par_iter()
            .map_init(
                || DeviceState::new(*strategy),
                |devices, id| {
                    let (x, y, z) = draw_inputs(&streams, id);
                    simulate_round(config, devices, &streams, id, x, y, z)
                },
            )
            .collect()
    };
    Ok(RoundLog {
        config: *config,
        records,
    })
}
