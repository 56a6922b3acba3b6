//! Randomness certification.
//!
//! Given constraints on the eight success probabilities, find the adversary
//! strategy (four equatorial preparations, two forced-outcome + projective
//! measurements) that reproduces them with the least min-entropy. The search
//! is a multistart Nelder–Mead over the five gauge-fixed angles; the
//! forced-outcome probabilities are solved exactly for each angle set (see
//! [`objective`]). Every reported minimiser is re-checked for strict
//! feasibility through the plain probability formulas in [`crate::bloch`].

pub mod nelder_mead;
mod objective;
pub mod oracle;
pub mod privacy;
pub mod scan;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::bloch::{event_min_entropy, response_probability, Bit, EquatorialState, LemmaStrategy, MeasurementBasis};
use crate::error::{domain, Error, Result};
use crate::estimation::{Interval, ProbabilityBounds};
use crate::rng::{Stream, StreamSet};
use crate::sim::cell_inputs;

use nelder_mead::{minimize_with_restarts, NelderMeadOptions};
use objective::{solve_inner, CellData, Geometry, Target};

pub use oracle::{brute_force_oracle, OracleResult};
pub use privacy::{privacy_threshold, shared_randomness_test, sync_overhead, PrivacyThreshold, PrivacyVerdict};
pub use scan::{indicator_scan, zero_crossing, ScanPoint};

/// Weight on constraint violation in the search merit function.
pub(crate) const INFEASIBILITY_PENALTY: f64 = 1e4;

/// Largest average (hence worst-case) success probability reachable with a
/// qubit and no shared randomness: `cos²(π/8)`.
pub const QRAC_BOUND: f64 = 0.853_553_390_593_273_7;

/// Tolerance of the final feasibility check on success probabilities.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Which scalar or vector indicator the user has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndicatorMode {
    /// All eight success probabilities, each in its own interval.
    Vector,
    /// Only the smallest success probability.
    WorstCase,
    /// Only the mean success probability.
    Average,
}

impl IndicatorMode {
    pub fn name(self) -> &'static str {
        match self {
            IndicatorMode::Vector => "vector",
            IndicatorMode::WorstCase => "worst_case",
            IndicatorMode::Average => "average",
        }
    }
}

impl FromStr for IndicatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vector" => Ok(IndicatorMode::Vector),
            "worst_case" | "worst-case" => Ok(IndicatorMode::WorstCase),
            "average" => Ok(IndicatorMode::Average),
            other => domain(format!("unknown indicator mode {other:?}")),
        }
    }
}

/// Constraints the adversary's success probabilities must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstraintSet {
    Vector([Interval; 8]),
    /// `min_{x,z} p ∈ [α − δ/2, α + δ/2]`.
    WorstCase { alpha: f64, delta: f64 },
    /// `mean_{x,z} p ∈ [α − δ/2, α + δ/2]`.
    Average { alpha: f64, delta: f64 },
}

impl ConstraintSet {
    pub fn from_bounds(b: &ProbabilityBounds) -> Self {
        ConstraintSet::Vector(b.intervals)
    }

    /// The set used for indicator comparisons: every constrained quantity
    /// pinned to `[α − δ/2, α + δ/2]`, clipped to `[0, 1]`.
    pub fn uniform(mode: IndicatorMode, alpha: f64, delta: f64) -> Self {
        match mode {
            IndicatorMode::Vector => {
                let i = Interval::new((alpha - delta / 2.0).max(0.0), (alpha + delta / 2.0).min(1.0));
                ConstraintSet::Vector([i; 8])
            }
            IndicatorMode::WorstCase => ConstraintSet::WorstCase { alpha, delta },
            IndicatorMode::Average => ConstraintSet::Average { alpha, delta },
        }
    }

    pub fn mode(&self) -> IndicatorMode {
        match self {
            ConstraintSet::Vector(_) => IndicatorMode::Vector,
            ConstraintSet::WorstCase { .. } => IndicatorMode::WorstCase,
            ConstraintSet::Average { .. } => IndicatorMode::Average,
        }
    }

    pub(crate) fn scalar_bounds(&self) -> (f64, f64) {
        match *self {
            ConstraintSet::WorstCase { alpha, delta } | ConstraintSet::Average { alpha, delta } => {
                ((alpha - delta / 2.0).max(0.0), (alpha + delta / 2.0).min(1.0))
            }
            ConstraintSet::Vector(_) => (0.0, 1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConstraintSet::Vector(iv) => {
                for (cell, i) in iv.iter().enumerate() {
                    if !(0.0 <= i.lo && i.lo <= i.hi && i.hi <= 1.0) {
                        return domain(format!("interval {cell} = [{}, {}] not inside [0,1]", i.lo, i.hi));
                    }
                }
            }
            ConstraintSet::WorstCase { alpha, delta } | ConstraintSet::Average { alpha, delta } => {
                if !(0.0..=1.0).contains(alpha) || !(*delta >= 0.0) {
                    return domain(format!("need α ∈ [0,1] and δ ≥ 0, got α={alpha}, δ={delta}"));
                }
            }
        }
        Ok(())
    }

    /// Necessary conditions for feasibility, checked before searching.
    pub fn precheck(&self) -> Result<()> {
        self.validate()?;
        let tol = 1e-12;
        match self {
            ConstraintSet::Vector(iv) => {
                let mean_lo = iv.iter().map(|i| i.lo).sum::<f64>() / 8.0;
                if mean_lo > QRAC_BOUND + tol {
                    return Err(Error::Infeasible(format!(
                        "mean lower bound {mean_lo} exceeds the qubit limit {QRAC_BOUND}"
                    )));
                }
            }
            _ => {
                let (lo, _) = self.scalar_bounds();
                if lo > QRAC_BOUND + tol {
                    return Err(Error::Infeasible(format!(
                        "lower bound {lo} exceeds the qubit limit {QRAC_BOUND}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same constraints pulled inward by `margin` on every side, so that
    /// penalty methods converging from outside still land strictly inside.
    pub(crate) fn shrunk(&self, margin: f64) -> Self {
        match *self {
            ConstraintSet::Vector(iv) => ConstraintSet::Vector(iv.map(|i| {
                if i.hi - i.lo > 2.0 * margin {
                    Interval::new(i.lo + margin, i.hi - margin)
                } else {
                    let mid = 0.5 * (i.lo + i.hi);
                    Interval::new(mid, mid)
                }
            })),
            ConstraintSet::WorstCase { alpha, delta } => ConstraintSet::WorstCase {
                alpha,
                delta: (delta - 2.0 * margin).max(0.0),
            },
            ConstraintSet::Average { alpha, delta } => ConstraintSet::Average {
                alpha,
                delta: (delta - 2.0 * margin).max(0.0),
            },
        }
    }

    /// Largest amount by which `success` misses the constraints.
    pub fn violation(&self, success: &[f64; 8]) -> f64 {
        match self {
            ConstraintSet::Vector(iv) => iv
                .iter()
                .zip(success)
                .map(|(i, &s)| (i.lo - s).max(s - i.hi).max(0.0))
                .fold(0.0, f64::max),
            ConstraintSet::WorstCase { .. } => {
                let (lo, hi) = self.scalar_bounds();
                let m = success.iter().copied().fold(f64::INFINITY, f64::min);
                (lo - m).max(m - hi).max(0.0)
            }
            ConstraintSet::Average { .. } => {
                let (lo, hi) = self.scalar_bounds();
                let m = success.iter().sum::<f64>() / 8.0;
                (lo - m).max(m - hi).max(0.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Aggregate {
    /// Entropy of the least random of the eight events.
    #[default]
    WorstEvent,
    /// Mean entropy over the eight events.
    UniformAverage,
}

impl Aggregate {
    pub fn name(self) -> &'static str {
        match self {
            Aggregate::WorstEvent => "worst_event",
            Aggregate::UniformAverage => "uniform_average",
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Aggregate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "worst_event" | "worst-event" => Ok(Aggregate::WorstEvent),
            "uniform_average" | "uniform-average" => Ok(Aggregate::UniformAverage),
            other => domain(format!("unknown aggregate {other:?} (worst_event, uniform_average)")),
        }
    }
}

/// A full adversary strategy: preparations `theta[x]`, and per setting `z` a
/// basis angle `phi[z]` with forced-outcome probabilities `q[z] = [q0, q1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryParams {
    pub theta: [f64; 4],
    pub phi: [f64; 2],
    pub q: [[f64; 2]; 2],
}

impl AdversaryParams {
    fn state(&self, x: usize) -> EquatorialState {
        EquatorialState::new(self.theta[x]).expect("finite angle")
    }

    pub fn strategy(&self, z: Bit) -> Result<LemmaStrategy> {
        let q = self.q[z.index()];
        LemmaStrategy::new(q[0], q[1], MeasurementBasis::new(self.phi[z.index()])?)
    }

    pub fn p(&self, z: Bit) -> f64 {
        let q = self.q[z.index()];
        (1.0 - q[0] - q[1]).max(0.0)
    }

    /// Success probability `Pr[b = x_z]` of every cell.
    pub fn success(&self) -> Result<[f64; 8]> {
        let strategies = [self.strategy(Bit::Zero)?, self.strategy(Bit::One)?];
        let mut s = [0.0; 8];
        for (cell, v) in s.iter_mut().enumerate() {
            let (x, z) = cell_inputs(cell);
            *v = response_probability(&strategies[z.index()], self.state(x.index()), x.target(z));
        }
        Ok(s)
    }

    /// Min-entropy of every success event; infinite values are saturated at
    /// `cap`.
    pub fn event_entropies(&self, cap: f64) -> Result<[f64; 8]> {
        let strategies = [self.strategy(Bit::Zero)?, self.strategy(Bit::One)?];
        let mut h = [0.0; 8];
        for (cell, v) in h.iter_mut().enumerate() {
            let (x, z) = cell_inputs(cell);
            *v = event_min_entropy(&strategies[z.index()], self.state(x.index()), x.target(z)).min(cap);
        }
        Ok(h)
    }

    pub fn aggregate_entropy(&self, aggregate: Aggregate, cap: f64) -> Result<f64> {
        let h = self.event_entropies(cap)?;
        Ok(match aggregate {
            Aggregate::WorstEvent => h.iter().copied().fold(f64::INFINITY, f64::min),
            Aggregate::UniformAverage => h.iter().sum::<f64>() / 8.0,
        })
    }

    /// Rotate every angle by a common offset.
    pub fn rotated(&self, by: f64) -> Self {
        let mut r = *self;
        r.theta.iter_mut().for_each(|t| *t += by);
        r.phi.iter_mut().for_each(|p| *p += by);
        r
    }

    /// Whether the projective branch is used with a zero-overlap outcome in
    /// an event that carries weight in the objective.
    fn cap_binds(&self, aggregate: Aggregate, value: f64, cap: f64) -> Result<bool> {
        Ok(match aggregate {
            Aggregate::WorstEvent => value >= cap,
            Aggregate::UniformAverage => self.event_entropies(f64::INFINITY)?.iter().any(|v| *v >= cap),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub aggregate: Aggregate,
    pub restarts: usize,
    pub seed: u64,
    /// Saturation value for infinite event entropies during the search.
    pub entropy_cap: f64,
    /// Observed detection efficiency, for the per-round figure.
    pub efficiency: f64,
    /// Restarts must agree with the best value within this many bits.
    pub agreement_tol: f64,
    pub max_evals: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            aggregate: Aggregate::WorstEvent,
            restarts: 64,
            seed: 0,
            entropy_cap: 20.0,
            efficiency: 1.0,
            agreement_tol: 1e-4,
            max_evals: 3000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub restarts: usize,
    pub feasible_restarts: usize,
    /// Restarts whose value lies within the agreement tolerance of the best.
    pub agreeing_restarts: usize,
    pub evaluations: usize,
    /// Best value found so far, after each restart in index order.
    pub best_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationResult {
    pub certified_bits_per_event: f64,
    pub certified_bits_per_round: f64,
    pub minimizer: AdversaryParams,
    pub feasible: bool,
    pub aggregate: Aggregate,
    pub diagnostics: Diagnostics,
}

/// Min-entropy per round when no-detections are recorded as a fixed symbol:
/// `−log₂((1 − η) + η·2^(−H))`.
pub fn per_round_rate(per_event_bits: f64, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return domain(format!("efficiency must lie in (0,1], got {eta}"));
    }
    if per_event_bits.is_nan() || per_event_bits < 0.0 {
        return domain(format!("per-event entropy must be ≥ 0, got {per_event_bits}"));
    }
    let guess = (1.0 - eta) + eta * (-per_event_bits).exp2();
    Ok((-guess.log2()).max(0.0))
}

#[derive(Debug, Clone)]
struct RestartOutcome {
    index: usize,
    params: Option<AdversaryParams>,
    value: f64,
    evals: usize,
}

fn params_from(g: &Geometry, sol: &objective::InnerSolution) -> AdversaryParams {
    let mut q = [[0.0; 2]; 2];
    for z in 0..2 {
        let s = sol.settings[z];
        let q0 = (s.u - s.w).max(0.0);
        let q1 = (1.0 - s.u - s.w).max(0.0);
        q[z] = [q0, q1];
    }
    AdversaryParams {
        theta: g.theta.map(|t| t.rem_euclid(TAU)),
        phi: [0.0, g.phi1.rem_euclid(TAU)],
        q,
    }
}

/// Check a candidate with the plain formulas and score it.
fn verify(constraints: &ConstraintSet, params: &AdversaryParams, aggregate: Aggregate, cap: f64) -> Option<f64> {
    let s = params.success().ok()?;
    if constraints.violation(&s) > FEASIBILITY_TOL {
        return None;
    }
    params.aggregate_entropy(aggregate, cap).ok()
}

fn evaluate(constraints: &ConstraintSet, target: Target, cap: f64, x: &[f64]) -> (Geometry, objective::InnerSolution) {
    let g = Geometry::from_slice(x);
    let d = CellData::new(&g, cap);
    (g, solve_inner(constraints, target, &d))
}

fn run_restart(constraints: &ConstraintSet, opts: &CertifyOptions, index: usize, start: [f64; 5]) -> RestartOutcome {
    let target = Target::for_restart(opts.aggregate, index);
    let cap = opts.entropy_cap;
    let nm = NelderMeadOptions {
        max_evals: opts.max_evals,
        initial_step: 0.6,
        ..Default::default()
    };
    let res = minimize_with_restarts(|x| evaluate(constraints, target, cap, x).1.merit(), &start, &nm, 6);
    let (g, sol) = evaluate(constraints, target, cap, &res.x);
    let mut best: Option<(AdversaryParams, f64)> = None;
    let params = params_from(&g, &sol);
    if let Some(v) = verify(constraints, &params, opts.aggregate, cap) {
        best = Some((params, v));
    }

    // An event entropy only reaches zero exactly when the state sits on the
    // target projector; try snapping there.
    if let Target::Event(cell) = target {
        if best.as_ref().map_or(true, |(_, v)| *v > 0.0 && *v < 1e-5) {
            let (x, z) = cell_inputs(cell);
            let mut snapped = g;
            let t = if x.target(z) == Bit::Zero { 0.0 } else { PI };
            snapped.theta[x.index()] = g.phi(z) + t;
            let d = CellData::new(&snapped, cap);
            let s2 = solve_inner(constraints, target, &d);
            if s2.violation == 0.0 {
                let p2 = params_from(&snapped, &s2);
                if let Some(v2) = verify(constraints, &p2, opts.aggregate, cap) {
                    if best.as_ref().map_or(true, |(_, v)| v2 < *v) {
                        best = Some((p2, v2));
                    }
                }
            }
        }
    }

    match best {
        Some((p, v)) => RestartOutcome {
            index,
            params: Some(p),
            value: v,
            evals: res.evals,
        },
        None => RestartOutcome {
            index,
            params: None,
            value: f64::INFINITY,
            evals: res.evals,
        },
    }
}

fn random_start(streams: &StreamSet, index: u64) -> [f64; 5] {
    let mut rng = streams.rng(Stream::Auxiliary, index);
    std::array::from_fn(|_| rng.random::<f64>() * TAU)
}

/// Minimise the aggregated min-entropy over all adversary strategies meeting
/// `constraints`.
pub fn certify_min_entropy(constraints: &ConstraintSet, opts: &CertifyOptions) -> Result<CertificationResult> {
    constraints.precheck()?;
    if opts.restarts == 0 {
        return domain("at least one restart is required");
    }
    let streams = StreamSet::new(opts.seed);
    let mut outcomes: Vec<RestartOutcome> = (0..opts.restarts)
        .into_par_iter()
        .map(|i| run_restart(constraints, opts, i, random_start(&streams, i as u64)))
        .collect();

    let best_of = |outcomes: &[RestartOutcome]| {
        outcomes
            .iter()
            .filter(|o| o.params.is_some())
            .min_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)))
            .cloned()
    };

    let Some(mut best) = best_of(&outcomes) else {
        return Err(Error::Infeasible(format!(
            "no strictly feasible strategy found in {} restarts",
            opts.restarts
        )));
    };

    let agreeing = |outcomes: &[RestartOutcome], v: f64| {
        outcomes
            .iter()
            .filter(|o| o.params.is_some() && o.value <= v + opts.agreement_tol)
            .count()
    };

    // Confirm an isolated best value from perturbed copies of its minimiser.
    let mut extra = 0;
    while best.value > 0.0 && agreeing(&outcomes, best.value) < 2 && extra < 16 {
        let p = best.params.expect("feasible");
        let mut rng = streams.rng(Stream::Auxiliary, (1 << 32) + extra as u64);
        let mut start = [p.theta[0], p.theta[1], p.theta[2], p.theta[3], p.phi[1]];
        for v in start.iter_mut() {
            *v += (rng.random::<f64>() - 0.5) * 0.1;
        }
        let index = opts.restarts + extra;
        // keep the restart's target aligned with the best one
        let target_index = match opts.aggregate {
            Aggregate::WorstEvent => best.index % 8 + 8 * index,
            Aggregate::UniformAverage => index,
        };
        outcomes.push(run_restart(constraints, opts, target_index, start));
        best = best_of(&outcomes).expect("still feasible");
        extra += 1;
    }

    let n_agree = agreeing(&outcomes, best.value);
    let mut trace = Vec::with_capacity(outcomes.len());
    let mut running = f64::INFINITY;
    for o in &outcomes {
        running = running.min(o.value);
        trace.push(running);
    }
    if best.value > 0.0 && n_agree < 2 {
        return Err(Error::NonConvergence {
            message: format!(
                "best value {:.6} bits found by a single restart; others disagree beyond {}",
                best.value, opts.agreement_tol
            ),
            trace,
        });
    }

    let minimizer = best.params.expect("feasible");
    if minimizer.cap_binds(opts.aggregate, best.value, opts.entropy_cap)? {
        return Err(Error::Invariant(format!(
            "entropy cap {} binds at the reported minimiser",
            opts.entropy_cap
        )));
    }
    let per_event = best.value.max(0.0);
    Ok(CertificationResult {
        certified_bits_per_event: per_event,
        certified_bits_per_round: per_round_rate(per_event, opts.efficiency)?,
        minimizer,
        feasible: true,
        aggregate: opts.aggregate,
        diagnostics: Diagnostics {
            restarts: outcomes.len(),
            feasible_restarts: outcomes.iter().filter(|o| o.params.is_some()).count(),
            agreeing_restarts: n_agree,
            evaluations: outcomes.iter().map(|o| o.evals).sum(),
            best_trace: trace,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn qrac_params() -> AdversaryParams {
        AdversaryParams {
            theta: [FRAC_PI_4, 7.0 * FRAC_PI_4, 3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4],
            phi: [0.0, FRAC_PI_2],
            q: [[0.0; 2]; 2],
        }
    }

    #[test]
    fn per_round_examples() {
        assert_abs_diff_eq!(per_round_rate(0.3, 1.0).unwrap(), 0.3, epsilon = 1e-15);
        assert_eq!(per_round_rate(0.0, 0.06).unwrap(), 0.0);
        // -log2(0.94 + 0.06·cos²(π/8)), evaluated independently
        assert_abs_diff_eq!(
            per_round_rate(0.228_446_696_836_388, 0.06).unwrap(),
            0.012_732_689_890_497,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(per_round_rate(f64::INFINITY, 0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert!(per_round_rate(0.1, 0.0).is_err());
    }

    #[test]
    fn qrac_point_values() {
        let p = qrac_params();
        for s in p.success().unwrap() {
            assert_abs_diff_eq!(s, QRAC_BOUND, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            p.aggregate_entropy(Aggregate::WorstEvent, 20.0).unwrap(),
            0.228_446_696_836_388,
            epsilon = 1e-12
        );
    }

    #[test]
    fn gauge_invariance() {
        let mut p = qrac_params();
        p.q = [[0.1, 0.05], [0.2, 0.0]];
        p.theta[2] += 0.3;
        let h = p.event_entropies(20.0).unwrap();
        let s = p.success().unwrap();
        for by in [0.1, 1.0, -2.5, 10.0] {
            let r = p.rotated(by);
            let hr = r.event_entropies(20.0).unwrap();
            let sr = r.success().unwrap();
            for i in 0..8 {
                assert_abs_diff_eq!(h[i], hr[i], epsilon = 1e-12);
                assert_abs_diff_eq!(s[i], sr[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn precheck_rejects_beyond_qubit_limit() {
        let c = ConstraintSet::uniform(IndicatorMode::Vector, 0.9, 1e-4);
        assert!(matches!(certify_min_entropy(&c, &CertifyOptions::default()), Err(Error::Infeasible(_))));
        let c = ConstraintSet::Average { alpha: 0.95, delta: 0.0 };
        assert!(c.precheck().is_err());
        let bad = ConstraintSet::WorstCase { alpha: 0.5, delta: -1.0 };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn prng_point_gives_zero() {
        let c = ConstraintSet::uniform(IndicatorMode::Vector, 0.5, 1e-4);
        let r = certify_min_entropy(&c, &CertifyOptions::default()).unwrap();
        assert_eq!(r.certified_bits_per_event, 0.0);
        assert!(r.feasible);
    }

    #[test]
    fn tight_qrac_point() {
        let c = ConstraintSet::Vector([Interval::new(0.85355, 0.85365); 8]);
        let r = certify_min_entropy(&c, &CertifyOptions::default()).unwrap();
        assert!((r.certified_bits_per_event - 0.228_446_696_836_388).abs() < 1e-3, "{:?}", r.certified_bits_per_event);
        let s = r.minimizer.success().unwrap();
        assert!(c.violation(&s) <= FEASIBILITY_TOL);
    }

    #[test]
    fn aggregate_parse() {
        assert_eq!("worst_event".parse::<Aggregate>().unwrap(), Aggregate::WorstEvent);
        assert!("median".parse::<Aggregate>().is_err());
        assert_eq!("worst-case".parse::<IndicatorMode>().unwrap(), IndicatorMode::WorstCase);
    }
}
