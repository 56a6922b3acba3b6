//! Step-2 decision: is the observed success rate high enough to exclude a
//! shared-seed synchronisation attack?

use crate::error::{domain, Result};
use crate::sim::SyncModel;
use crate::stats::hoeffding_margin;

/// Reason attached to verdicts in the regime where the attack cannot be seen.
pub const UNDETECTABLE_REASON: &str = "undetectable regime; increase blocking rate";

/// Expected fraction of unblocked rounds spent re-synchronising at blocking
/// rate `beta`.
pub fn sync_overhead(beta: f64, model: SyncModel) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return domain(format!("blocking rate must lie in [0,1), got {beta}"));
    }
    Ok(match model {
        SyncModel::PerBlock => (beta / (1.0 - beta)).min(1.0),
        SyncModel::PerRun => beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyThreshold {
    pub threshold: f64,
    pub margin: f64,
    pub sync_overhead: f64,
    /// Fraction of rounds on which sync must show up as a detection.
    pub detectable_sync: f64,
    pub model: SyncModel,
}

impl PrivacyThreshold {
    pub fn undetectable(&self) -> bool {
        self.threshold >= 1.0
    }
}

/// Threshold on `p'_av` above which the sync attack is excluded, and the
/// statistical margin for `n_detected` detected rounds.
pub fn privacy_threshold(
    beta: f64,
    eta: f64,
    confidence: f64,
    n_detected: u64,
    model: SyncModel,
) -> Result<PrivacyThreshold> {
    if !(eta > 0.0 && eta <= 1.0) {
        return domain(format!("efficiency must lie in (0,1], got {eta}"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return domain(format!("confidence must lie in (0,1), got {confidence}"));
    }
    if n_detected == 0 {
        return domain("need at least one detected round");
    }
    let s = sync_overhead(beta, model)?;
    let d = (eta - (1.0 - s)).max(0.0);
    Ok(PrivacyThreshold {
        threshold: 1.0 - d / (2.0 * eta),
        margin: hoeffding_margin(confidence, n_detected),
        sync_overhead: s,
        detectable_sync: d,
        model,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyVerdict {
    pub threshold: f64,
    pub margin: f64,
    pub observed: f64,
    pub pass: bool,
    pub model: SyncModel,
    pub reason: Option<String>,
}

pub fn shared_randomness_test(observed_p_prime_av: f64, t: &PrivacyThreshold) -> PrivacyVerdict {
    let pass = observed_p_prime_av > t.threshold + t.margin;
    let reason = if t.undetectable() {
        Some(UNDETECTABLE_REASON.to_string())
    } else if !pass {
        Some(format!(
            "observed {observed_p_prime_av:.6} ≤ threshold {:.6} + margin {:.6}",
            t.threshold, t.margin
        ))
    } else {
        None
    };
    PrivacyVerdict {
        threshold: t.threshold,
        margin: t.margin,
        observed: observed_p_prime_av,
        pass: pass && !t.undetectable(),
        model: t.model,
        reason,
    }
}
