//! Independent grid-search upper bound on the certified min-entropy.
//!
//! Works directly on the nine raw parameters (four preparation angles, the
//! setting-1 basis angle, and `(q0, q1)` per setting) with every probability
//! taken from [`crate::bloch`]. A coarse grid is scanned exhaustively, the
//! best cells are refined by penalised local search, and only strictly
//! feasible refined points count. The result is therefore always achievable,
//! i.e. an upper bound on the true minimum.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use rayon::prelude::*;

use super::nelder_mead::{minimize_with_restarts, NelderMeadOptions};
use super::{AdversaryParams, Aggregate, CertificationResult, ConstraintSet, FEASIBILITY_TOL};
use crate::bloch::{event_min_entropy, response_probability, Bit, EquatorialState, LemmaStrategy, MeasurementBasis};
use crate::error::{domain, Error, Result};
use crate::sim::cell_inputs;

/// Cells refined after the grid scan.
pub const REFINED_CELLS: usize = 100;

const ENTROPY_CAP: f64 = 20.0;
const PENALTIES: [f64; 4] = [1e4, 1e6, 1e8, 1e11];
/// Grid penalties: one ranks cells by penalised objective, the other puts
/// feasibility first so narrow constraint bands still seed the refinement.
const GRID_PENALTIES: [f64; 2] = [1e2, 1e6];
/// Inward margin for refinement; costs O(1e-7) bits, far below any tolerance.
const REFINE_MARGIN: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub bits: f64,
    pub params: AdversaryParams,
    pub grid_resolution: usize,
    /// Refined cells that ended strictly feasible.
    pub feasible_cells: usize,
}

/// Summary of one setting's four cells for one `(q0, q1)` choice.
#[derive(Debug, Clone, Copy)]
struct SettingSummary {
    q: [f64; 2],
    success: [f64; 4],
    h_min: f64,
    h_sum: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    merit: f64,
    index: usize,
    params: AdversaryParams,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.merit.total_cmp(&other.merit).then(self.index.cmp(&other.index))
    }
}

fn objective(aggregate: Aggregate, h: &[f64; 8]) -> f64 {
    match aggregate {
        Aggregate::WorstEvent => h.iter().copied().fold(f64::INFINITY, f64::min),
        Aggregate::UniformAverage => h.iter().sum::<f64>() / 8.0,
    }
}

/// Project `(q0, q1)` onto `{q ≥ 0, q0 + q1 ≤ 1}`.
fn project_q(q0: f64, q1: f64) -> [f64; 2] {
    let q0 = q0.clamp(0.0, 1.0);
    let q1 = q1.clamp(0.0, 1.0 - q0);
    [q0, q1]
}

fn params_from_vec(v: &[f64]) -> AdversaryParams {
    AdversaryParams {
        theta: [v[0], v[1], v[2], v[3]],
        phi: [0.0, v[4]],
        q: [project_q(v[5], v[6]), project_q(v[7], v[8])],
    }
}

fn params_to_vec(p: &AdversaryParams) -> [f64; 9] {
    [
        p.theta[0], p.theta[1], p.theta[2], p.theta[3], p.phi[1], p.q[0][0], p.q[0][1], p.q[1][0], p.q[1][1],
    ]
}

/// Smooth penalised objective: squared hinge on every constraint.
fn penalised(constraints: &ConstraintSet, aggregate: Aggregate, m: f64, v: &[f64]) -> f64 {
    let p = params_from_vec(v);
    let (Ok(s), Ok(h)) = (p.success(), p.event_entropies(ENTROPY_CAP)) else {
        return f64::INFINITY;
    };
    let mut pen = 0.0;
    let hinge = |a: f64| a.max(0.0).powi(2);
    match constraints {
        ConstraintSet::Vector(iv) => {
            for (i, &si) in iv.iter().zip(&s) {
                pen += hinge(i.lo - si) + hinge(si - i.hi);
            }
        }
        ConstraintSet::WorstCase { .. } => {
            let (lo, hi) = constraints.scalar_bounds();
            let mn = s.iter().copied().fold(f64::INFINITY, f64::min);
            pen += s.iter().map(|&si| hinge(lo - si)).sum::<f64>() + hinge(mn - hi);
        }
        ConstraintSet::Average { .. } => {
            let (lo, hi) = constraints.scalar_bounds();
            let mean = s.iter().sum::<f64>() / 8.0;
            pen += hinge(lo - mean) + hinge(mean - hi);
        }
    }
    objective(aggregate, &h) + m * pen
}

fn grid_violation(constraints: &ConstraintSet, a: &SettingSummary, b: &SettingSummary) -> f64 {
    let mut s = [0.0; 8];
    for k in 0..4 {
        // cells are ordered x·2 + z
        s[2 * k] = a.success[k];
        s[2 * k + 1] = b.success[k];
    }
    constraints.violation(&s)
}

fn summarise(states: &[EquatorialState; 4], basis: MeasurementBasis, z: Bit, triangle: &[[f64; 2]]) -> Result<Vec<SettingSummary>> {
    let mut out = Vec::with_capacity(triangle.len());
    for &q in triangle {
        let strat = LemmaStrategy::new(q[0], q[1], basis)?;
        let mut success = [0.0; 4];
        let (mut h_min, mut h_sum) = (f64::INFINITY, 0.0);
        for x in 0..4 {
            let cell = 2 * x + z.index();
            let (input, _) = cell_inputs(cell);
            let b = input.target(z);
            success[x] = response_probability(&strat, states[x], b);
            let h = event_min_entropy(&strat, states[x], b).min(ENTROPY_CAP);
            h_min = h_min.min(h);
            h_sum += h;
        }
        out.push(SettingSummary { q, success, h_min, h_sum });
    }
    Ok(out)
}

/// Grid search plus local refinement; returns the lowest strictly feasible
/// aggregated min-entropy found.
pub fn brute_force_oracle(constraints: &ConstraintSet, aggregate: Aggregate, grid_resolution: usize) -> Result<OracleResult> {
    constraints.validate()?;
    let r = grid_resolution;
    if r < 8 {
        return domain(format!("grid resolution must be at least 8, got {r}"));
    }
    let angles: Vec<f64> = (0..r).map(|i| TAU * i as f64 / r as f64).collect();
    let mut triangle = Vec::new();
    for i in 0..r {
        for j in 0..r - i {
            triangle.push([i as f64 / (r - 1) as f64, j as f64 / (r - 1) as f64]);
        }
    }
    let n_cells = r.pow(5);
    let per_heap = REFINED_CELLS / GRID_PENALTIES.len();
    let push = |heap: &mut BinaryHeap<Candidate>, c: Candidate| {
        heap.push(c);
        if heap.len() > per_heap {
            heap.pop();
        }
    };

    // Best q-choice per angle cell under each grid penalty; each heap keeps
    // its share of the best cells.
    let heaps = (0..n_cells)
        .into_par_iter()
        .try_fold(
            || [BinaryHeap::new(), BinaryHeap::new()],
            |mut heaps: [BinaryHeap<Candidate>; 2], idx| -> Result<_> {
                let mut rest = idx;
                let mut digit = || {
                    let d = rest % r;
                    rest /= r;
                    angles[d]
                };
                let theta = [digit(), digit(), digit(), digit()];
                let phi1 = digit();
                let states = theta.map(|t| EquatorialState::new(t).expect("finite"));
                let s0 = summarise(&states, MeasurementBasis::new(0.0)?, Bit::Zero, &triangle)?;
                let s1 = summarise(&states, MeasurementBasis::new(phi1)?, Bit::One, &triangle)?;
                let mut best: [Option<(f64, [f64; 2], [f64; 2])>; 2] = [None; 2];
                for a in &s0 {
                    for b in &s1 {
                        let obj = match aggregate {
                            Aggregate::WorstEvent => a.h_min.min(b.h_min),
                            Aggregate::UniformAverage => (a.h_sum + b.h_sum) / 8.0,
                        };
                        let violation = grid_violation(constraints, a, b);
                        for (slot, penalty) in best.iter_mut().zip(GRID_PENALTIES) {
                            let merit = obj + penalty * violation;
                            if slot.map_or(true, |(m, _, _)| merit < m) {
                                *slot = Some((merit, a.q, b.q));
                            }
                        }
                    }
                }
                for (heap, slot) in heaps.iter_mut().zip(best) {
                    let (merit, q0, q1) = slot.expect("triangle is nonempty");
                    let params = AdversaryParams {
                        theta,
                        phi: [0.0, phi1],
                        q: [q0, q1],
                    };
                    push(heap, Candidate { merit, index: idx, params });
                }
                Ok(heaps)
            },
        )
        .try_reduce(
            || [BinaryHeap::new(), BinaryHeap::new()],
            |mut a, b| {
                for (ha, hb) in a.iter_mut().zip(b) {
                    for c in hb {
                        push(ha, c);
                    }
                }
                Ok(a)
            },
        )?;

    let cells: Vec<Candidate> = heaps.into_iter().flat_map(BinaryHeap::into_sorted_vec).collect();
    let step = TAU / r as f64;
    let inner = constraints.shrunk(REFINE_MARGIN);
    let refined: Vec<Option<(f64, AdversaryParams)>> = cells
        .par_iter()
        .map(|c| {
            // Strictly feasible and scored, or None.
            let score = |p: &AdversaryParams| -> Option<f64> {
                let s = p.success().ok()?;
                if constraints.violation(&s) > FEASIBILITY_TOL {
                    return None;
                }
                p.aggregate_entropy(aggregate, ENTROPY_CAP).ok()
            };
            let mut best = score(&c.params).map(|h| (h, c.params));
            let mut v = params_to_vec(&c.params).to_vec();
            for &m in &PENALTIES {
                let opts = NelderMeadOptions {
                    max_evals: 3000,
                    initial_step: if m == PENALTIES[0] { step / 2.0 } else { 0.01 },
                    ..Default::default()
                };
                v = minimize_with_restarts(|x| penalised(&inner, aggregate, m, x), &v, &opts, 4).x;
                let p = params_from_vec(&v);
                if let Some(h) = score(&p) {
                    if best.map_or(true, |(b, _)| h < b) {
                        best = Some((h, p));
                    }
                }
            }
            best
        })
        .collect();

    let feasible_cells = refined.iter().flatten().count();
    let best = refined
        .into_iter()
        .flatten()
        .min_by(|a, b| a.0.total_cmp(&b.0));
    match best {
        Some((bits, params)) => Ok(OracleResult {
            bits,
            params,
            grid_resolution: r,
            feasible_cells,
        }),
        None => Err(Error::Infeasible(format!(
            "no strictly feasible point among the {REFINED_CELLS} refined cells at resolution {r}"
        ))),
    }
}

/// Cross-check an optimiser result against the oracle: the optimiser must
/// not exceed the oracle by more than `tol` bits, and the oracle must find
/// a feasible point whenever the optimiser did.
pub fn check_consistency(
    optimizer: &Result<CertificationResult>,
    oracle: &Result<OracleResult>,
    tol: f64,
) -> Result<()> {
    match (optimizer, oracle) {
        (Ok(c), Ok(o)) => {
            if c.certified_bits_per_event > o.bits + tol {
                Err(Error::Inconsistent(format!(
                    "optimiser {} bits exceeds oracle {} bits by more than {tol}",
                    c.certified_bits_per_event, o.bits
                )))
            } else {
                Ok(())
            }
        }
        (Ok(_), Err(e)) => Err(Error::Inconsistent(format!(
            "optimiser found a feasible strategy but the oracle did not: {e}"
        ))),
        (Err(Error::Infeasible(_)), Ok(o)) => Err(Error::Inconsistent(format!(
            "optimiser reported infeasible but the oracle found {} bits",
            o.bits
        ))),
        _ => Ok(()),
    }
}
