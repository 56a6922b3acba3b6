//! Device strategies: the honest QRAC devices and the adversarial models.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{Input, Outcome, ProtocolConfig};
use crate::bloch::{born_probability, Bit, EquatorialState, LemmaStrategy, MeasurementBasis};
use crate::error::{domain, Error, Result};
use crate::rng::{Stream, StreamSet};

/// Preparation angle used by honest devices: the four states sit at the
/// diagonals so that each is `π/4` away from both of its target projectors.
pub fn honest_preparation(x: Input) -> EquatorialState {
    let theta = match x.index() {
        0 => FRAC_PI_4,
        1 => 7.0 * FRAC_PI_4,
        2 => 3.0 * FRAC_PI_4,
        _ => 5.0 * FRAC_PI_4,
    };
    EquatorialState::new(theta).expect("finite angle")
}

/// Honest measurement basis for setting `z`: `0` for `z = 0`, `π/2` for `z = 1`.
pub fn honest_basis(z: Bit) -> MeasurementBasis {
    MeasurementBasis::new(match z {
        Bit::Zero => 0.0,
        Bit::One => FRAC_PI_2,
    })
    .expect("finite angle")
}

/// How blocked qubits desynchronise the adversary's round counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SyncModel {
    /// Each blocked qubit costs one synchronisation round.
    #[default]
    PerBlock,
    /// Each maximal run of consecutive blocked rounds costs one.
    PerRun,
}

impl SyncModel {
    pub fn name(self) -> &'static str {
        match self {
            SyncModel::PerBlock => "per_block",
            SyncModel::PerRun => "per_run",
        }
    }
}

impl fmt::Display for SyncModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SyncModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_block" | "per-block" => Ok(SyncModel::PerBlock),
            "per_run" | "per-run" => Ok(SyncModel::PerRun),
            other => domain(format!("unknown sync model {other:?} (per_block, per_run)")),
        }
    }
}

/// Classical strategy: `P` sends a single bit `encode[x]` (as a basis state)
/// and `M` answers `decode[z][bit]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalAssignment {
    pub encode: [Bit; 4],
    pub decode: [[Bit; 2]; 2],
}

impl ClassicalAssignment {
    /// Send `x₀`, answer the received bit for both settings. Wins every
    /// `z = 0` round and half of the `z = 1` rounds.
    pub fn send_first_bit() -> Self {
        Self {
            encode: [Bit::Zero, Bit::Zero, Bit::One, Bit::One],
            decode: [[Bit::Zero, Bit::One], [Bit::Zero, Bit::One]],
        }
    }

    pub fn answer(&self, x: Input, z: Bit) -> Bit {
        self.decode[z.index()][self.encode[x.index()].index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeviceStrategy {
    /// Honest 2→1 QRAC devices behind a lossy channel.
    HonestQrac,
    /// Forced outcomes drawn from a PRNG with per-setting probabilities; any
    /// remaining weight `p` measures the honest preparation projectively in
    /// the strategy's basis. With `p = 0` the answer ignores `x` entirely.
    PrngOnly([LemmaStrategy; 2]),
    ClassicalDeterministic(ClassicalAssignment),
    /// Agents in `P` and `M` share a seed and know `x`; after blocked rounds
    /// they must spend rounds re-synchronising their counters.
    SharedSeedSync {
        model: SyncModel,
        hide_in_no_detection: bool,
    },
}

impl DeviceStrategy {
    /// PRNG device answering 0 with probability `prob_zero[z]`.
    pub fn prng_only(prob_zero: [f64; 2]) -> Result<Self> {
        let mk = |p0: f64, phi: f64| LemmaStrategy::new(p0, 1.0 - p0, MeasurementBasis::new(phi)?);
        Ok(DeviceStrategy::PrngOnly([mk(prob_zero[0], 0.0)?, mk(prob_zero[1], FRAC_PI_2)?]))
    }

    pub fn is_stateful(&self) -> bool {
        matches!(self, DeviceStrategy::SharedSeedSync { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if let DeviceStrategy::PrngOnly(s) = self {
            for l in s {
                LemmaStrategy::new(l.q0(), l.q1(), l.basis())?;
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            DeviceStrategy::HonestQrac => "honest",
            DeviceStrategy::PrngOnly(_) => "prng",
            DeviceStrategy::ClassicalDeterministic(_) => "classical",
            DeviceStrategy::SharedSeedSync { .. } => "sync",
        }
    }
}

/// Build the synchronisation attack.
pub fn sync_attack_strategy(model: SyncModel, hide_in_no_detection: bool) -> DeviceStrategy {
    DeviceStrategy::SharedSeedSync {
        model,
        hide_in_no_detection,
    }
}

/// A strategy together with whatever history it carries between rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceState {
    strategy: DeviceStrategy,
    /// Synchronisation rounds still owed.
    debt: u64,
    unblocked: u64,
    empties: u64,
    sync_rounds: u64,
}

impl DeviceState {
    pub fn new(strategy: DeviceStrategy) -> Self {
        Self {
            strategy,
            debt: 0,
            unblocked: 0,
            empties: 0,
            sync_rounds: 0,
        }
    }

    pub fn strategy(&self) -> &DeviceStrategy {
        &self.strategy
    }

    /// Unblocked rounds the sync attack spent re-synchronising.
    pub fn sync_rounds(&self) -> u64 {
        self.sync_rounds
    }

    pub(super) fn respond(
        &mut self,
        config: &ProtocolConfig,
        streams: &StreamSet,
        round_id: u64,
        x: Input,
        z: Bit,
        blocked: bool,
    ) -> Outcome {
        if let DeviceStrategy::SharedSeedSync {
            model,
            hide_in_no_detection,
        } = self.strategy
        {
            return self.sync_respond(config, streams, round_id, x, z, blocked, model, hide_in_no_detection);
        }
        if blocked {
            return Outcome::Empty;
        }
        let lost = {
            let mut ch = streams.rng(Stream::Channel, round_id);
            ch.random::<f64>() >= config.channel_efficiency
        };
        if lost {
            return Outcome::Empty;
        }
        let mut rng = streams.rng(Stream::Strategy, round_id);
        match self.strategy {
            DeviceStrategy::HonestQrac => {
                let p0 = born_probability(honest_preparation(x), honest_basis(z), Bit::Zero);
                Outcome::from(Bit::from_bool(rng.random::<f64>() >= p0))
            }
            DeviceStrategy::PrngOnly(ref s) => {
                let s = &s[z.index()];
                let u: f64 = rng.random();
                if u < s.q0() {
                    Outcome::Zero
                } else if u < s.q0() + s.q1() {
                    Outcome::One
                } else {
                    let p0 = born_probability(honest_preparation(x), s.basis(), Bit::Zero);
                    Outcome::from(Bit::from_bool(rng.random::<f64>() >= p0))
                }
            }
            DeviceStrategy::ClassicalDeterministic(a) => Outcome::from(a.answer(x, z)),
            DeviceStrategy::SharedSeedSync { .. } => unreachable!(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn sync_respond(
        &mut self,
        config: &ProtocolConfig,
        streams: &StreamSet,
        round_id: u64,
        x: Input,
        z: Bit,
        blocked: bool,
        model: SyncModel,
        hide: bool,
    ) -> Outcome {
        if blocked {
            match model {
                SyncModel::PerBlock => self.debt += 1,
                SyncModel::PerRun => self.debt = 1,
            }
            return Outcome::Empty;
        }
        self.unblocked += 1;
        let syncing = self.debt > 0;
        if syncing {
            self.debt -= 1;
            self.sync_rounds += 1;
        }

        let eta = config.channel_efficiency;
        let empty = if hide {
            // Track the target no-detection rate, spending it on sync rounds
            // first; sync rounds may run one ahead of the budget.
            let budget = (1.0 - eta) * self.unblocked as f64;
            let slack = if eta < 1.0 { 1.0 } else { 0.0 };
            let e = self.empties as f64;
            if syncing {
                e + 1.0 <= budget + slack
            } else {
                e + 1.0 <= budget
            }
        } else {
            let mut ch = streams.rng(Stream::Channel, round_id);
            ch.random::<f64>() >= eta
        };
        if empty {
            self.empties += 1;
            return Outcome::Empty;
        }
        if syncing {
            // Counters disagree: the answer carries no information about x.
            let mut rng = streams.rng(Stream::Strategy, round_id);
            Outcome::from(Bit::from_bool(rng.random::<bool>()))
        } else {
            Outcome::from(x.target(z))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::bloch::overlap;
    use approx::assert_abs_diff_eq;

    const QRAC: f64 = 0.853_553_390_593_273_7;

    #[test]
    fn honest_angles() {
        let x00: Input = "00".parse().unwrap();
        let x11: Input = "11".parse().unwrap();
        assert_abs_diff_eq!(honest_preparation(x00).theta(), FRAC_PI_4);
        let p = born_probability(honest_preparation(x00), honest_basis(Bit::Zero), Bit::Zero);
        assert_abs_diff_eq!(p, QRAC, epsilon = 1e-12);
        // x = 11, z = 1: target projector at 3π/2
        let p = born_probability(honest_preparation(x11), honest_basis(Bit::One), Bit::One);
        assert_abs_diff_eq!(p, QRAC, epsilon = 1e-12);
        let o = overlap(honest_preparation(x00).theta(), honest_preparation(x11).theta()).unwrap();
        assert_abs_diff_eq!(o, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (honest_preparation(x00).theta() - honest_preparation(x11).theta()).abs(),
            PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn all_honest_targets_equal_qrac() {
        for x in Input::ALL {
            for z in [Bit::Zero, Bit::One] {
                let p = born_probability(honest_preparation(x), honest_basis(z), x.target(z));
                assert_abs_diff_eq!(p, QRAC, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn classical_assignment_scores() {
        let a = ClassicalAssignment::send_first_bit();
        let mut wins = 0;
        for x in Input::ALL {
            for z in [Bit::Zero, Bit::One] {
                if a.answer(x, z) == x.target(z) {
                    wins += 1;
                }
            }
        }
        assert_eq!(wins, 6);
    }

    #[test]
    fn sync_model_parse() {
        assert_eq!("per_run".parse::<SyncModel>().unwrap(), SyncModel::PerRun);
        assert_eq!("per-block".parse::<SyncModel>().unwrap(), SyncModel::PerBlock);
        assert!("sometimes".parse::<SyncModel>().is_err());
    }
}
