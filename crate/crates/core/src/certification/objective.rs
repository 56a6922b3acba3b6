//! Min-entropy objective with the forced-outcome probabilities solved out.
//!
//! Write the outcome-0 element of the setting-`z` measurement as
//! `E = u·I + w·(m·σ)`, so that `p = 2w`, `q0 = u − w`, `q1 = 1 − u − w` and
//! `p(0|x,z) = u + w·cos(θ_x − φ_z)`. For fixed angles every constraint is
//! linear in `(u, w)` and the entropy of each event is `2w · h(θ, φ)`, so the
//! best `(u, w)` per setting is a two-variable LP solved exactly here. The
//! outer search then only sees the five gauge-fixed angles.

use super::{Aggregate, ConstraintSet, INFEASIBILITY_PENALTY};
use crate::bloch::Bit;
use crate::sim::cell_inputs;

/// Straight line `c0 + c1·w`.
#[derive(Debug, Clone, Copy)]
struct Line {
    c0: f64,
    c1: f64,
}

impl Line {
    #[inline]
    fn at(self, w: f64) -> f64 {
        self.c0 + self.c1 * w
    }

    fn crossing(self, other: Line) -> Option<f64> {
        let d = self.c1 - other.c1;
        if d.abs() < 1e-300 {
            None
        } else {
            Some((other.c0 - self.c0) / d)
        }
    }
}

const W_MAX: f64 = 0.5;

/// Bounds on `u` as functions of `w` for one setting.
#[derive(Debug, Clone, Default)]
pub(crate) struct SettingLp {
    lower: Vec<Line>,
    upper: Vec<Line>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SettingSolution {
    /// Chosen `w` (half the projective frequency).
    pub w: f64,
    /// Chosen `u`.
    pub u: f64,
    /// Half the gap between the tightest lower and upper bound on `u`; zero
    /// when feasible.
    pub violation: f64,
}

impl SettingLp {
    fn new() -> Self {
        Self {
            // u ≥ w and u ≤ 1 − w keep q0, q1 ≥ 0
            lower: vec![Line { c0: 0.0, c1: 1.0 }],
            upper: vec![Line { c0: 1.0, c1: -1.0 }],
        }
    }

    /// Require `lo ≤ u + w·c ≤ hi`.
    fn push(&mut self, c: f64, lo: f64, hi: f64) {
        if lo > 0.0 {
            self.lower.push(Line { c0: lo, c1: -c });
        }
        if hi < 1.0 {
            self.upper.push(Line { c0: hi, c1: -c });
        }
    }

    fn gap(&self, w: f64) -> (f64, f64) {
        let a = self.lower.iter().map(|l| l.at(w)).fold(f64::NEG_INFINITY, f64::max);
        let b = self.upper.iter().map(|l| l.at(w)).fold(f64::INFINITY, f64::min);
        (a, b)
    }

    /// Feasible range of `w`, if any.
    fn feasible_w(&self) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (0.0f64, W_MAX);
        for l in &self.lower {
            for u in &self.upper {
                // l(w) ≤ u(w)  ⇔  k0 + k1·w ≤ 0
                let k0 = l.c0 - u.c0;
                let k1 = l.c1 - u.c1;
                if k1 > 0.0 {
                    hi = hi.min(-k0 / k1);
                } else if k1 < 0.0 {
                    lo = lo.max(-k0 / k1);
                } else if k0 > 0.0 {
                    return None;
                }
                if lo > hi {
                    return None;
                }
            }
        }
        Some((lo, hi))
    }

    /// Minimise `coef·w` subject to the constraints; when infeasible, return
    /// the point of least violation instead.
    pub fn solve(&self, coef: f64) -> SettingSolution {
        if let Some((lo, hi)) = self.feasible_w() {
            let w = if coef >= 0.0 { lo } else { hi };
            let (a, b) = self.gap(w);
            return SettingSolution {
                w,
                u: 0.5 * (a + b),
                violation: 0.0,
            };
        }
        // max(lower) − min(upper) is convex piecewise linear; its kinks sit
        // where two lower lines or two upper lines cross.
        let mut best = (f64::INFINITY, 0.0);
        let mut consider = |w: f64| {
            if (0.0..=W_MAX).contains(&w) {
                let (a, b) = self.gap(w);
                let g = a - b;
                if g < best.0 {
                    best = (g, w);
                }
            }
        };
        consider(0.0);
        consider(W_MAX);
        for set in [&self.lower, &self.upper] {
            for i in 0..set.len() {
                for j in i + 1..set.len() {
                    if let Some(w) = set[i].crossing(set[j]) {
                        consider(w);
                    }
                }
            }
        }
        let (g, w) = best;
        let (a, b) = self.gap(w);
        SettingSolution {
            w,
            u: 0.5 * (a + b),
            violation: (0.5 * g).max(0.0),
        }
    }
}

/// Angles of the four preparations and the setting-1 basis; the setting-0
/// basis is fixed at angle 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Geometry {
    pub theta: [f64; 4],
    pub phi1: f64,
}

impl Geometry {
    pub fn from_slice(v: &[f64]) -> Self {
        Self {
            theta: [v[0], v[1], v[2], v[3]],
            phi1: v[4],
        }
    }

    pub fn phi(&self, z: Bit) -> f64 {
        match z {
            Bit::Zero => 0.0,
            Bit::One => self.phi1,
        }
    }
}

/// Per-cell quantities that only depend on the angles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellData {
    /// `cos(θ_x − φ_z)`.
    pub cos: [f64; 8],
    /// `−log₂` of the overlap with the target projector, capped.
    pub h: [f64; 8],
    /// +1 when the target bit is 0, −1 otherwise.
    pub sign: [f64; 8],
}

impl CellData {
    pub fn new(g: &Geometry, cap: f64) -> Self {
        let mut cos = [0.0; 8];
        let mut h = [0.0; 8];
        let mut sign = [0.0; 8];
        for cell in 0..8 {
            let (x, z) = cell_inputs(cell);
            let c = (g.theta[x.index()] - g.phi(z)).cos();
            let s = if x.target(z) == Bit::Zero { 1.0 } else { -1.0 };
            let ov = 0.5 * (1.0 + s * c);
            cos[cell] = c;
            sign[cell] = s;
            h[cell] = if ov <= 0.0 { cap } else { (-ov.log2()).clamp(0.0, cap) };
        }
        Self { cos, h, sign }
    }

    /// Literal `p(0|x,z)` interval for a success interval.
    fn literal(&self, cell: usize, lo: f64, hi: f64) -> (f64, f64) {
        if self.sign[cell] > 0.0 {
            (lo, hi)
        } else {
            (1.0 - hi, 1.0 - lo)
        }
    }
}

/// What the outer search is minimising in one restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Target {
    /// Entropy of a single event (cell index).
    Event(usize),
    /// Mean entropy of the eight events.
    Average,
}

impl Target {
    pub fn for_restart(aggregate: Aggregate, restart: usize) -> Self {
        match aggregate {
            Aggregate::WorstEvent => Target::Event(restart % 8),
            Aggregate::UniformAverage => Target::Average,
        }
    }

    /// Objective coefficient on `w_z` for each setting.
    fn coefficients(self, d: &CellData) -> [f64; 2] {
        match self {
            Target::Event(cell) => {
                let mut k = [0.0; 2];
                k[cell % 2] = 2.0 * d.h[cell];
                k
            }
            Target::Average => {
                let mut k = [0.0; 2];
                for cell in 0..8 {
                    k[cell % 2] += 0.25 * d.h[cell];
                }
                k
            }
        }
    }
}

/// Best `(u, w)` per setting for given angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InnerSolution {
    pub settings: [SettingSolution; 2],
    pub value: f64,
    pub violation: f64,
}

impl InnerSolution {
    pub fn merit(&self) -> f64 {
        self.value + INFEASIBILITY_PENALTY * self.violation
    }
}

fn combine(k: [f64; 2], s: [SettingSolution; 2]) -> InnerSolution {
    InnerSolution {
        settings: s,
        value: k[0] * s[0].w + k[1] * s[1].w,
        violation: s[0].violation + s[1].violation,
    }
}

fn better(a: InnerSolution, b: InnerSolution) -> InnerSolution {
    if b.merit() < a.merit() {
        b
    } else {
        a
    }
}

/// Solve the inner problem for one set of angles.
pub(crate) fn solve_inner(constraints: &ConstraintSet, target: Target, d: &CellData) -> InnerSolution {
    let k = target.coefficients(d);
    match constraints {
        ConstraintSet::Vector(intervals) => {
            let mut lps = [SettingLp::new(), SettingLp::new()];
            for cell in 0..8 {
                let (lo, hi) = d.literal(cell, intervals[cell].lo, intervals[cell].hi);
                lps[cell % 2].push(d.cos[cell], lo, hi);
            }
            combine(k, [lps[0].solve(k[0]), lps[1].solve(k[1])])
        }
        ConstraintSet::WorstCase { .. } => {
            let (lo, hi) = constraints.scalar_bounds();
            // every success ≥ lo, and some witness cell ≤ hi
            let mut base = [SettingLp::new(), SettingLp::new()];
            for cell in 0..8 {
                let (a, b) = d.literal(cell, lo, 1.0);
                base[cell % 2].push(d.cos[cell], a, b);
            }
            let base_sol = [base[0].solve(k[0]), base[1].solve(k[1])];
            let mut best: Option<InnerSolution> = None;
            for witness in 0..8 {
                let z = witness % 2;
                let mut lp = base[z].clone();
                let (a, b) = d.literal(witness, lo, hi);
                lp.push(d.cos[witness], a, b);
                let mut s = base_sol;
                s[z] = lp.solve(k[z]);
                let cand = combine(k, s);
                best = Some(match best {
                    None => cand,
                    Some(b) => better(b, cand),
                });
            }
            best.expect("eight witnesses")
        }
        ConstraintSet::Average { .. } => {
            let (lo, hi) = constraints.scalar_bounds();
            solve_average(k, d, lo, hi)
        }
    }
}

/// Average mode: the mean success is `½ + (w₀K₀ + w₁K₁)/8` whatever `u` is,
/// so only `(w₀, w₁) ∈ [0, ½]²` matters.
fn solve_average(k: [f64; 2], d: &CellData, lo: f64, hi: f64) -> InnerSolution {
    let mut kk = [0.0; 2];
    for cell in 0..8 {
        kk[cell % 2] += d.sign[cell] * d.cos[cell];
    }
    let mean = |w: [f64; 2]| 0.5 + (w[0] * kk[0] + w[1] * kk[1]) / 8.0;
    let viol = |w: [f64; 2]| {
        let m = mean(w);
        (lo - m).max(0.0) + (m - hi).max(0.0)
    };

    let mut cands: Vec<[f64; 2]> = vec![[0.0, 0.0], [W_MAX, 0.0], [0.0, W_MAX], [W_MAX, W_MAX]];
    for level in [lo, hi] {
        let rhs = 8.0 * (level - 0.5);
        for fixed in [0.0, W_MAX] {
            // w0 fixed, solve for w1 and vice versa
            if kk[1].abs() > 1e-300 {
                let w1 = (rhs - kk[0] * fixed) / kk[1];
                if (0.0..=W_MAX).contains(&w1) {
                    cands.push([fixed, w1]);
                }
            }
            if kk[0].abs() > 1e-300 {
                let w0 = (rhs - kk[1] * fixed) / kk[0];
                if (0.0..=W_MAX).contains(&w0) {
                    cands.push([w0, fixed]);
                }
            }
        }
    }
    let mut best: Option<([f64; 2], f64, f64)> = None;
    for w in cands {
        let v = viol(w);
        let obj = k[0] * w[0] + k[1] * w[1];
        // feasible points first (up to round-off), then least violation
        let key = if v <= 1e-15 { obj } else { obj + INFEASIBILITY_PENALTY * v };
        if best.map_or(true, |(_, bk, _)| key < bk) {
            best = Some((w, key, v));
        }
    }
    let (w, _, v) = best.expect("corners always present");
    let setting = |z: usize| SettingSolution {
        w: w[z],
        u: 0.5,
        violation: 0.0,
    };
    InnerSolution {
        settings: [setting(0), setting(1)],
        value: k[0] * w[0] + k[1] * w[1],
        violation: if v <= 1e-15 { 0.0 } else { v },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::Interval;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn qrac_geometry() -> Geometry {
        Geometry {
            theta: [FRAC_PI_4, 7.0 * FRAC_PI_4, 3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4],
            phi1: FRAC_PI_2,
        }
    }

    #[test]
    fn setting_lp_feasible_range() {
        // lo ≤ u + w·c ≤ hi for c = ±1 with [0.75, 0.75] forces u = ½, w = ¼
        let mut lp = SettingLp::new();
        lp.push(1.0, 0.75, 0.75);
        lp.push(-1.0, 0.25, 0.25);
        let s = lp.solve(1.0);
        assert_abs_diff_eq!(s.w, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(s.u, 0.5, epsilon = 1e-15);
        assert_eq!(s.violation, 0.0);
    }

    #[test]
    fn setting_lp_infeasible_reports_violation() {
        // u + w ≥ 0.9 and u − w ≥ 0.9 need u ≥ 0.9 + w but u ≤ 1 − w
        let mut lp = SettingLp::new();
        lp.push(1.0, 0.9, 1.0);
        lp.push(-1.0, 0.95, 1.0);
        lp.push(0.0, 0.0, 0.5);
        let s = lp.solve(0.0);
        assert!(s.violation > 0.0);
    }

    #[test]
    fn qrac_point_is_feasible_with_full_projective_weight() {
        let q = 0.853_553_390_593_273_7;
        let c = ConstraintSet::Vector([Interval::new(q - 5e-5, q + 5e-5); 8]);
        let d = CellData::new(&qrac_geometry(), 20.0);
        let s = solve_inner(&c, Target::Event(0), &d);
        assert_eq!(s.violation, 0.0);
        // lowest feasible w with every cell at cos² = q ± 5e-5
        assert!(s.settings[0].w > 0.4998 && s.settings[0].w <= 0.5);
        assert_abs_diff_eq!(s.value / (2.0 * s.settings[0].w), 0.228_446_696_836_388, epsilon = 1e-12);
    }

    #[test]
    fn average_mode_matches_direct_mean() {
        let d = CellData::new(&qrac_geometry(), 20.0);
        let c = ConstraintSet::Average { alpha: 0.8, delta: 1e-4 };
        let s = solve_inner(&c, Target::Average, &d);
        assert_eq!(s.violation, 0.0);
        let mean: f64 = (0..8)
            .map(|cell| {
                let w = s.settings[cell % 2].w;
                let u = s.settings[cell % 2].u;
                let lit = u + w * d.cos[cell];
                if d.sign[cell] > 0.0 {
                    lit
                } else {
                    1.0 - lit
                }
            })
            .sum::<f64>()
            / 8.0;
        assert!((mean - 0.8).abs() <= 5e-5 + 1e-12, "{mean}");
    }
}
