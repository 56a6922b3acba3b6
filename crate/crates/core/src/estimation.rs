//! Conditional statistics of a round log: counts, the raw and detected-only
//! conditional tables, observed efficiency, the detected-only average success
//! probability, and per-cell confidence intervals.
//!
//! Throughout, the "success" probability of cell `(x, z)` is
//! `Pr[b = x_z | x, z]`: the outcome is relabelled so that answering the
//! requested bit counts as outcome 0.

use std::io::Write;

use crate::bloch::Bit;
use crate::error::{Error, Result};
use crate::sim::{cell_index, cell_inputs, Input, Outcome, RoundRecord};
use crate::stats::{clopper_pearson, poisson_interval};

/// Outcome counts over unblocked rounds, per `(x, z)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    /// `counts[cell][outcome]` with outcomes ordered `0, 1, ∅`.
    pub counts: [[u64; 3]; 8],
    pub unblocked: u64,
    pub blocked: u64,
}

impl Tally {
    pub fn add(&mut self, r: &RoundRecord) {
        if r.blocked {
            self.blocked += 1;
        } else {
            self.unblocked += 1;
            self.counts[cell_index(r.x, r.z)][r.b.index()] += 1;
        }
    }

    /// Tallies merge associatively.
    pub fn merge(mut self, other: &Tally) -> Tally {
        for c in 0..8 {
            for o in 0..3 {
                self.counts[c][o] += other.counts[c][o];
            }
        }
        self.unblocked += other.unblocked;
        self.blocked += other.blocked;
        self
    }

    pub fn detected(&self) -> u64 {
        self.counts.iter().map(|c| c[0] + c[1]).sum()
    }

    pub fn detected_in(&self, cell: usize) -> u64 {
        self.counts[cell][0] + self.counts[cell][1]
    }

    /// Detected rounds in `cell` whose outcome equals the requested bit.
    pub fn successes_in(&self, cell: usize) -> u64 {
        let (x, z) = cell_inputs(cell);
        self.counts[cell][x.target(z).index()]
    }

    pub fn total(&self) -> u64 {
        self.unblocked + self.blocked
    }
}

fn cell_name(cell: usize) -> String {
    let (x, z) = cell_inputs(cell);
    format!("(x={x}, z={})", z.index())
}

/// Count a stream of records. Fails when no round was unblocked.
pub fn tally_iter<'a, I: IntoIterator<Item = &'a RoundRecord>>(records: I) -> Result<Tally> {
    let mut t = Tally::default();
    for r in records {
        t.add(r);
    }
    if t.unblocked == 0 {
        return Err(Error::InsufficientData(format!(
            "no unblocked rounds among {} records",
            t.blocked
        )));
    }
    Ok(t)
}

pub fn tally(records: &[RoundRecord]) -> Result<Tally> {
    tally_iter(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableVariant {
    Raw,
    DetectedOnly,
}

impl TableVariant {
    fn name(self) -> &'static str {
        match self {
            TableVariant::Raw => "raw",
            TableVariant::DetectedOnly => "detected_only",
        }
    }
}

/// `p(b | x, y > λ, z)` for `b ∈ {0, 1, ∅}`, one row per cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalTable {
    pub probs: [[f64; 3]; 8],
    pub variant: TableVariant,
}

impl ConditionalTable {
    pub fn get(&self, x: Input, z: Bit, b: Outcome) -> f64 {
        self.probs[cell_index(x, z)][b.index()]
    }
}

/// Normalise the counts over `{0, 1, ∅}` (raw) and over `{0, 1}` after
/// dropping no-detections (detected-only).
pub fn conditional_tables(t: &Tally) -> Result<(ConditionalTable, ConditionalTable)> {
    let mut raw = [[0.0; 3]; 8];
    let mut det = [[0.0; 3]; 8];
    for cell in 0..8 {
        let c = t.counts[cell];
        let n = c[0] + c[1] + c[2];
        if n == 0 {
            return Err(Error::InsufficientData(format!(
                "no unblocked rounds in cell {}",
                cell_name(cell)
            )));
        }
        let d = c[0] + c[1];
        if d == 0 {
            return Err(Error::InsufficientData(format!(
                "no detected rounds in cell {}",
                cell_name(cell)
            )));
        }
        for o in 0..3 {
            raw[cell][o] = c[o] as f64 / n as f64;
        }
        det[cell][0] = c[0] as f64 / d as f64;
        det[cell][1] = c[1] as f64 / d as f64;
    }
    Ok((
        ConditionalTable {
            probs: raw,
            variant: TableVariant::Raw,
        },
        ConditionalTable {
            probs: det,
            variant: TableVariant::DetectedOnly,
        },
    ))
}

fn require_detected(table: &ConditionalTable) -> Result<()> {
    if table.variant != TableVariant::DetectedOnly {
        return Err(Error::WrongVariant {
            expected: TableVariant::DetectedOnly.name(),
            got: table.variant.name(),
        });
    }
    Ok(())
}

/// `Pr[b = x_z | x, z]` from a detected-only table.
pub fn success_probability(table: &ConditionalTable, x: Input, z: Bit) -> Result<f64> {
    require_detected(table)?;
    Ok(table.probs[cell_index(x, z)][x.target(z).index()])
}

/// Mean of the eight detected-only success probabilities.
pub fn p_prime_average(table: &ConditionalTable) -> Result<f64> {
    require_detected(table)?;
    let mut s = 0.0;
    for cell in 0..8 {
        let (x, z) = cell_inputs(cell);
        s += success_probability(table, x, z)?;
    }
    Ok(s / 8.0)
}

/// Detected unblocked rounds over all unblocked rounds.
pub fn observed_efficiency(t: &Tally) -> Result<f64> {
    if t.unblocked == 0 {
        return Err(Error::InsufficientData("no unblocked rounds".into()));
    }
    Ok(t.detected() as f64 / t.unblocked as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalMethod {
    /// Exact Clopper–Pearson, Bonferroni-split across the eight cells.
    #[default]
    ClopperPearson,
    /// `± z√k/n` counting error bars; for figures only, never certification.
    Poisson,
}

/// Confidence intervals on the eight success probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityBounds {
    pub intervals: [Interval; 8],
    pub point: [f64; 8],
    pub n_detected: [u64; 8],
    pub confidence: f64,
}

impl ProbabilityBounds {
    /// Bounds that carry no sample information, e.g. for indicator scans.
    pub fn from_intervals(intervals: [Interval; 8]) -> Self {
        let point = intervals.map(|i| 0.5 * (i.lo + i.hi));
        Self {
            intervals,
            point,
            n_detected: [0; 8],
            confidence: 1.0,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,z,p_lo,p_hat,p_hi,n_detected")?;
        for cell in 0..8 {
            let (x, z) = cell_inputs(cell);
            let i = self.intervals[cell];
            writeln!(
                out,
                "{x},{},{:.12},{:.12},{:.12},{}",
                z.index(),
                i.lo,
                self.point[cell],
                i.hi,
                self.n_detected[cell]
            )?;
        }
        Ok(())
    }
}

pub fn probability_bounds(t: &Tally, confidence: f64) -> Result<ProbabilityBounds> {
    probability_bounds_with(t, confidence, IntervalMethod::ClopperPearson)
}

pub fn probability_bounds_with(t: &Tally, confidence: f64, method: IntervalMethod) -> Result<ProbabilityBounds> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!("confidence must lie in (0,1), got {confidence}")));
    }
    let alpha = match method {
        IntervalMethod::ClopperPearson => (1.0 - confidence) / 8.0,
        IntervalMethod::Poisson => 1.0 - confidence,
    };
    let mut intervals = [Interval::new(0.0, 1.0); 8];
    let mut point = [0.0; 8];
    let mut n_detected = [0; 8];
    for cell in 0..8 {
        let n = t.detected_in(cell);
        if n == 0 {
            return Err(Error::InsufficientData(format!(
                "no detected rounds in cell {}",
                cell_name(cell)
            )));
        }
        let k = t.successes_in(cell);
        let (lo, hi) = match method {
            IntervalMethod::ClopperPearson => clopper_pearson(k, n, alpha),
            IntervalMethod::Poisson => poisson_interval(k, n, alpha),
        };
        intervals[cell] = Interval::new(lo, hi);
        point[cell] = k as f64 / n as f64;
        n_detected[cell] = n;
    }
    Ok(ProbabilityBounds {
        intervals,
        point,
        n_detected,
        confidence,
    })
}
