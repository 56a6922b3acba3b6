//! Plain-text certification report.

use std::fmt::Write as _;

use sdirng_core::certification::{Aggregate, CertificationResult, ConstraintSet, PrivacyVerdict};
use sdirng_core::estimation::{ProbabilityBounds, Tally};
use sdirng_core::sim::cell_inputs;

use crate::config::RunConfig;

/// Sections are `[name]` headers followed by `key = value` lines.
#[derive(Debug, Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn section(&mut self, name: &str) -> &mut Self {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        let _ = writeln!(self.text, "[{name}]");
        self
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.text, "{key} = {value}");
        self
    }

    pub fn line(&mut self, s: &str) -> &mut Self {
        self.text.push_str(s);
        self.text.push('\n');
        self
    }

    pub fn inputs(&mut self, cfg: &RunConfig, source: &str) -> &mut Self {
        self.section("inputs")
            .kv("source", source)
            .kv("lambda", cfg.lambda)
            .kv("confidence", cfg.confidence)
            .kv("sync_model", cfg.sync_model)
            .kv("aggregate", cfg.aggregate)
            .kv("restarts", cfg.restarts)
            .kv("optimizer_seed", cfg.seed.unwrap_or(0))
    }

    pub fn estimation(&mut self, t: &Tally, p_av: f64, eta: f64, bounds: Option<&ProbabilityBounds>) -> &mut Self {
        self.section("estimation")
            .kv("rounds", t.total())
            .kv("unblocked", t.unblocked)
            .kv("detected", t.detected())
            .kv("observed_eta", format!("{eta:.6}"))
            .kv("p_prime_av", format!("{p_av:.6}"));
        if let Some(b) = bounds {
            self.line("# x z p_lo p_hat p_hi n_detected");
            for cell in 0..8 {
                let (x, z) = cell_inputs(cell);
                let i = b.intervals[cell];
                self.line(&format!(
                    "cell = {x} {} {:.6} {:.6} {:.6} {}",
                    z.index(),
                    i.lo,
                    b.point[cell],
                    i.hi,
                    b.n_detected[cell]
                ));
            }
        }
        self
    }

    pub fn privacy(&mut self, v: &PrivacyVerdict) -> &mut Self {
        self.section("privacy")
            .kv("threshold", format!("{:.6}", v.threshold))
            .kv("margin", format!("{:.6}", v.margin))
            .kv("observed", format!("{:.6}", v.observed))
            .kv("sync_model", v.model)
            .kv("pass", v.pass);
        if let Some(r) = &v.reason {
            self.kv("reason", r);
        }
        self
    }

    pub fn constraints(&mut self, c: &ConstraintSet) -> &mut Self {
        self.section("constraints").kv("mode", c.mode().name());
        match c {
            ConstraintSet::Vector(iv) => {
                for (cell, i) in iv.iter().enumerate() {
                    let (x, z) = cell_inputs(cell);
                    self.kv(&format!("p_{x}_{}", z.index()), format!("[{:.6}, {:.6}]", i.lo, i.hi));
                }
            }
            ConstraintSet::WorstCase { alpha, delta } | ConstraintSet::Average { alpha, delta } => {
                self.kv("alpha", alpha).kv("delta", delta);
            }
        }
        self
    }

    pub fn certification(&mut self, primary: Aggregate, results: &[CertificationResult]) -> &mut Self {
        self.section("certification");
        for r in results {
            let tag = r.aggregate.name();
            let mark = if r.aggregate == primary { " (primary)" } else { "" };
            self.kv(&format!("{tag}.bits_per_event{mark}"), format!("{:.6}", r.certified_bits_per_event))
                .kv(&format!("{tag}.bits_per_round"), format!("{:.6}", r.certified_bits_per_round))
                .kv(&format!("{tag}.restarts"), r.diagnostics.restarts)
                .kv(&format!("{tag}.agreeing_restarts"), r.diagnostics.agreeing_restarts)
                .kv(&format!("{tag}.evaluations"), r.diagnostics.evaluations);
            let m = &r.minimizer;
            self.kv(
                &format!("{tag}.minimizer"),
                format!(
                    "theta=[{:.6}, {:.6}, {:.6}, {:.6}] phi=[{:.6}, {:.6}] q0=[{:.6}, {:.6}] q1=[{:.6}, {:.6}]",
                    m.theta[0], m.theta[1], m.theta[2], m.theta[3], m.phi[0], m.phi[1], m.q[0][0], m.q[0][1], m.q[1][0],
                    m.q[1][1]
                ),
            );
        }
        self
    }

    pub fn finish(&self) -> &str {
        &self.text
    }
}
