//! Fixtures shared by the benchmarks.

use sdirng_core::certification::ConstraintSet;
use sdirng_core::estimation::{Interval, Tally};
use sdirng_core::sim::{DeviceStrategy, ProtocolConfig, RoundIter};

/// Ideal honest success probability.
pub const QRAC: f64 = 0.853_553_390_593_273_7;

/// Protocol parameters used throughout the benches.
pub fn bench_config(n_rounds: u64, seed: u64) -> ProtocolConfig {
    ProtocolConfig::new(0.99, 0.06, n_rounds, seed).expect("valid parameters")
}

/// Tally of a streamed run.
pub fn run_tally(config: ProtocolConfig, strategy: DeviceStrategy) -> Tally {
    let mut t = Tally::default();
    for r in RoundIter::new(config, strategy).expect("valid run") {
        t.add(&r);
    }
    t
}

/// Tight box around the ideal honest statistics.
pub fn qrac_constraints(half_width: f64) -> ConstraintSet {
    ConstraintSet::Vector([Interval::new(QRAC - half_width, QRAC + half_width); 8])
}

/// Bernoulli(p) bit string from a fixed seed.
pub fn biased_bits(n: usize, p: f64, seed: u64) -> Vec<bool> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n).map(|_| rng.random_bool(p)).collect()
}
