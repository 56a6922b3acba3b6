//! Qubit algebra on the equator of the Bloch sphere.
//!
//! Every state and projector in the adversary model lives on the great circle
//! with zero `z` component, so a single angle describes it. A state at angle
//! `θ` has Bloch vector `(cos θ, sin θ, 0)` and the overlap of two such states
//! is `cos²((a − b)/2)`.
//!
//! Outcome probabilities follow the forced-outcome + projective decomposition
//! of a two-outcome POVM: with probability `q0` the device answers 0 without
//! measuring, with probability `q1` it answers 1, and with the remaining
//! probability `p = 1 − q0 − q1` it measures projectively.

use std::f64::consts::{PI, TAU};

use crate::error::{domain, Error, Result};

/// Value reported when the projective branch is taken (`p > 0`) but the
/// requested outcome has zero overlap with the prepared state.
pub const INFINITE_ENTROPY: f64 = f64::INFINITY;

fn canonical(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shortest angular distance between two angles, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = canonical(a - b);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

/// A one-bit outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn index(self) -> usize {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn from_bool(b: bool) -> Bit {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }

    /// Accepts 0 or 1; anything else is a domain error.
    pub fn try_from_u8(v: u8) -> Result<Bit> {
        match v {
            0 => Ok(Bit::Zero),
            1 => Ok(Bit::One),
            other => domain(format!("outcome must be 0 or 1, got {other}")),
        }
    }
}

/// Pure qubit state on the Bloch equator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquatorialState {
    theta: f64,
}

impl EquatorialState {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return domain(format!("state angle must be finite, got {theta}"));
        }
        Ok(Self {
            theta: canonical(theta),
        })
    }

    /// Angle in `[0, 2π)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        [self.theta.cos(), self.theta.sin(), 0.0]
    }
}

/// Orthogonal pair of equatorial projectors: outcome 0 at `phi`, outcome 1 at
/// `phi + π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    phi: f64,
}

impl MeasurementBasis {
    pub fn new(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return domain(format!("basis angle must be finite, got {phi}"));
        }
        Ok(Self { phi: canonical(phi) })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Angle of the projector onto the given outcome.
    pub fn projector_angle(&self, outcome: Bit) -> f64 {
        match outcome {
            Bit::Zero => self.phi,
            Bit::One => canonical(self.phi + PI),
        }
    }
}

/// The outcome-0 element of a two-outcome qubit POVM, written in its
/// eigenbasis: eigenvalue `c` on `|m=0⟩` and `c_prime` on `|m=1⟩`, with
/// `c ≥ c_prime`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmElement {
    c: f64,
    c_prime: f64,
    basis: MeasurementBasis,
}

impl PovmElement {
    pub fn new(c: f64, c_prime: f64, basis: MeasurementBasis) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) || !(0.0..=1.0).contains(&c_prime) {
            return domain(format!(
                "POVM eigenvalues must lie in [0,1], got c={c}, c'={c_prime}"
            ));
        }
        if c < c_prime {
            return Err(Error::Invariant(format!(
                "POVM eigenvalues out of order: c={c} < c'={c_prime}"
            )));
        }
        Ok(Self { c, c_prime, basis })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn c_prime(&self) -> f64 {
        self.c_prime
    }

    pub fn basis(&self) -> MeasurementBasis {
        self.basis
    }

    /// `tr(E⁰ |ψ⟩⟨ψ|)` for an equatorial state.
    pub fn trace_rule(&self, state: EquatorialState) -> f64 {
        let d2 = born_probability(state, self.basis, Bit::Zero);
        self.c * d2 + self.c_prime * (1.0 - d2)
    }
}

/// Forced-outcome / projective mixture describing a measurement device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaStrategy {
    q0: f64,
    q1: f64,
    basis: MeasurementBasis,
}

impl LemmaStrategy {
    pub fn new(q0: f64, q1: f64, basis: MeasurementBasis) -> Result<Self> {
        if !(q0 >= 0.0 && q1 >= 0.0 && q0 + q1 <= 1.0 + 1e-15) {
            return Err(Error::Invariant(format!(
                "forced-outcome probabilities must satisfy q0,q1 ≥ 0 and q0+q1 ≤ 1, got q0={q0}, q1={q1}"
            )));
        }
        Ok(Self { q0, q1, basis })
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    pub fn forced(&self, outcome: Bit) -> f64 {
        match outcome {
            Bit::Zero => self.q0,
            Bit::One => self.q1,
        }
    }

    /// Frequency of the projective branch.
    pub fn p(&self) -> f64 {
        (1.0 - self.q0 - self.q1).max(0.0)
    }

    pub fn basis(&self) -> MeasurementBasis {
        self.basis
    }
}

/// `|⟨a|b⟩|²` for equatorial states at angles `a` and `b`.
pub fn overlap(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return domain(format!("overlap needs finite angles, got {a}, {b}"));
    }
    Ok(overlap_unchecked(a, b))
}

#[inline]
pub(crate) fn overlap_unchecked(a: f64, b: f64) -> f64 {
    0.5 * (1.0 + (a - b).cos())
}

/// Probability of projecting `state` onto the `outcome` projector of `basis`.
pub fn born_probability(state: EquatorialState, basis: MeasurementBasis, outcome: Bit) -> f64 {
    overlap_unchecked(state.theta, basis.projector_angle(outcome))
}

/// Like [`born_probability`] but with a raw outcome value, rejecting
/// anything other than 0 or 1.
pub fn born_probability_u8(state: EquatorialState, basis: MeasurementBasis, outcome: u8) -> Result<f64> {
    Ok(born_probability(state, basis, Bit::try_from_u8(outcome)?))
}

/// Reduce a POVM element to the equivalent forced-outcome + projective
/// strategy: `q0 = c'`, `q1 = 1 − c`, same eigenbasis.
pub fn lemma_decompose(e0: PovmElement) -> Result<LemmaStrategy> {
    if e0.c < e0.c_prime {
        return Err(Error::Invariant(format!(
            "POVM eigenvalues out of order: c={} < c'={}",
            e0.c, e0.c_prime
        )));
    }
    LemmaStrategy::new(e0.c_prime, 1.0 - e0.c, e0.basis)
}

/// `p(b|x,z) = q_b + p · |⟨m_b|x⟩|²`.
pub fn response_probability(strategy: &LemmaStrategy, state: EquatorialState, outcome: Bit) -> f64 {
    strategy.forced(outcome) + strategy.p() * born_probability(state, strategy.basis, outcome)
}

/// Min-entropy carried by the event `(outcome | state, strategy)`:
/// `−p log₂ |⟨m_b|x⟩|²`, zero when the projective branch is never taken, and
/// [`INFINITE_ENTROPY`] when it is taken but the overlap vanishes.
pub fn event_min_entropy(strategy: &LemmaStrategy, state: EquatorialState, outcome: Bit) -> f64 {
    let p = strategy.p();
    if p == 0.0 {
        return 0.0;
    }
    let born = born_probability(state, strategy.basis, outcome);
    if born <= 0.0 {
        return INFINITE_ENTROPY;
    }
    // -p*log2(1) is -0.0
    (-p * born.log2()).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;
    use std::f64::consts::FRAC_PI_4;

    // cos²(π/8), computed once in f64 outside the crate.
    const QRAC: f64 = 0.853_553_390_593_273_7;

    #[test]
    fn overlap_examples() {
        assert_abs_diff_eq!(overlap(1.3, 1.3).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(overlap(1.3, 1.3 + PI).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(overlap(FRAC_PI_4, 0.0).unwrap(), QRAC, epsilon = 1e-12);
        assert!(overlap(f64::NAN, 0.0).is_err());
        assert!(overlap(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn born_examples() {
        let b0 = MeasurementBasis::new(0.0).unwrap();
        let s0 = EquatorialState::new(0.0).unwrap();
        assert_abs_diff_eq!(born_probability(s0, b0, Bit::Zero), 1.0, epsilon = 1e-15);
        let s = EquatorialState::new(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(born_probability(s, b0, Bit::One), 0.5, epsilon = 1e-15);
        let s = EquatorialState::new(FRAC_PI_4).unwrap();
        let b = MeasurementBasis::new(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(born_probability(s, b, Bit::Zero), QRAC, epsilon = 1e-12);
        assert!(born_probability_u8(s, b, 2).is_err());
    }

    #[test]
    fn canonical_angles() {
        let s = EquatorialState::new(-FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(s.theta(), 7.0 * FRAC_PI_4, epsilon = 1e-15);
        assert!(EquatorialState::new(f64::NAN).is_err());
        assert!(s.theta() < TAU);
        assert_abs_diff_eq!(angular_distance(0.1, TAU - 0.1), 0.2, epsilon = 1e-14);
    }

    #[test]
    fn decompose_examples() {
        let basis = MeasurementBasis::new(0.3).unwrap();
        let s = lemma_decompose(PovmElement::new(0.7, 0.2, basis).unwrap()).unwrap();
        assert_abs_diff_eq!(s.q0(), 0.2);
        assert_abs_diff_eq!(s.q1(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(s.p(), 0.5, epsilon = 1e-15);

        let s = lemma_decompose(PovmElement::new(1.0, 0.0, basis).unwrap()).unwrap();
        assert_eq!((s.q0(), s.q1(), s.p()), (0.0, 0.0, 1.0));

        let s = lemma_decompose(PovmElement::new(1.0, 1.0, basis).unwrap()).unwrap();
        assert_eq!((s.q0(), s.q1(), s.p()), (1.0, 0.0, 0.0));

        assert!(matches!(
            PovmElement::new(0.2, 0.7, basis),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn response_examples() {
        let basis = MeasurementBasis::new(FRAC_PI_2).unwrap();
        let state = EquatorialState::new(FRAC_PI_4).unwrap();
        let s = LemmaStrategy::new(0.1, 0.1, basis).unwrap();
        // 0.1 + 0.8 * cos²(π/8)
        assert_abs_diff_eq!(
            response_probability(&s, state, Bit::Zero),
            0.782_842_712_474_619,
            epsilon = 1e-12
        );
        let forced = LemmaStrategy::new(1.0, 0.0, basis).unwrap();
        assert_eq!(response_probability(&forced, state, Bit::Zero), 1.0);
        let proj = LemmaStrategy::new(0.0, 0.0, basis).unwrap();
        let aligned = EquatorialState::new(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(response_probability(&proj, aligned, Bit::Zero), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let basis = MeasurementBasis::new(0.0).unwrap();
        let proj = LemmaStrategy::new(0.0, 0.0, basis).unwrap();
        let half = EquatorialState::new(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(event_min_entropy(&proj, half, Bit::Zero), 1.0, epsilon = 1e-12);

        let prng = LemmaStrategy::new(0.5, 0.5, basis).unwrap();
        assert_eq!(event_min_entropy(&prng, half, Bit::Zero), 0.0);

        let s = EquatorialState::new(FRAC_PI_4).unwrap();
        // -log2 cos²(π/8)
        assert_abs_diff_eq!(
            event_min_entropy(&proj, s, Bit::Zero),
            0.228_446_696_836_388,
            epsilon = 1e-12
        );

        let anti = EquatorialState::new(PI).unwrap();
        assert_eq!(event_min_entropy(&proj, anti, Bit::Zero), INFINITE_ENTROPY);
    }

    #[test]
    fn lemma_rejects_bad_q() {
        let b = MeasurementBasis::new(0.0).unwrap();
        assert!(LemmaStrategy::new(0.6, 0.6, b).is_err());
        assert!(LemmaStrategy::new(-0.1, 0.2, b).is_err());
    }
}
