use std::io::BufReader;

use sdirng_core::certification::{
    certify_min_entropy, privacy_threshold, shared_randomness_test, CertifyOptions, ConstraintSet,
};
use sdirng_core::estimation::{
    conditional_tables, observed_efficiency, p_prime_average, probability_bounds, tally, Tally,
};
use sdirng_core::extraction::{build_bit_string, read_packed, von_neumann, write_packed};
use sdirng_core::sim::{
    read_log, run_protocol, sync_attack_strategy, write_log, DeviceStrategy, ProtocolConfig, RoundIter, SyncModel,
};

fn config(n: u64, seed: u64) -> ProtocolConfig {
    ProtocolConfig::new(0.99, 0.06, n, seed).unwrap()
}

#[test]
fn parallel_and_streaming_runs_agree() {
    let c = config(50_000, 3);
    let par = run_protocol(&c, &DeviceStrategy::HonestQrac).unwrap();
    let seq: Vec<_> = RoundIter::new(c, DeviceStrategy::HonestQrac).unwrap().collect();
    assert_eq!(par.records, seq);
}

#[test]
fn log_round_trip_preserves_every_record() {
    let log = run_protocol(&config(20_000, 9), &sync_attack_strategy(SyncModel::PerRun, false)).unwrap();
    let mut buf = Vec::new();
    write_log(&log.records, &mut buf).unwrap();
    let back = read_log(BufReader::new(&buf[..])).unwrap();
    assert_eq!(back, log.records);
}

#[test]
fn blocked_rounds_never_detect() {
    let log = run_protocol(&config(100_000, 4), &DeviceStrategy::HonestQrac).unwrap();
    for r in &log.records {
        assert_eq!(r.blocked, r.y <= 0.99);
        if r.blocked {
            assert!(r.b.bit().is_none());
        }
    }
}

#[test]
fn prng_devices_certify_nothing() {
    let strategy = DeviceStrategy::prng_only([0.5, 0.5]).unwrap();
    let c = ProtocolConfig::new(0.0, 1.0, 400_000, 21).unwrap();
    let t = tally(&run_protocol(&c, &strategy).unwrap().records).unwrap();
    let bounds = probability_bounds(&t, 0.99).unwrap();
    let r = certify_min_entropy(&ConstraintSet::from_bounds(&bounds), &CertifyOptions::default()).unwrap();
    assert!(r.certified_bits_per_event < 1e-6, "{}", r.certified_bits_per_event);
}

#[test]
fn sync_attack_is_flagged_and_honest_devices_pass() {
    let verdict = |strategy| {
        let mut t = Tally::default();
        for r in RoundIter::new(config(1_000_000, 31), strategy).unwrap() {
            t.add(&r);
        }
        let (_, detected) = conditional_tables(&t).unwrap();
        let th = privacy_threshold(0.99, observed_efficiency(&t).unwrap(), 0.99, t.detected(), SyncModel::PerBlock)
            .unwrap();
        shared_randomness_test(p_prime_average(&detected).unwrap(), &th)
    };
    let attack = verdict(sync_attack_strategy(SyncModel::PerBlock, true));
    let honest = verdict(DeviceStrategy::HonestQrac);
    assert!(!attack.pass, "{attack:?}");
    assert!(honest.pass, "{honest:?}");
}

#[test]
fn extraction_pipeline_round_trips_through_files() {
    let log = run_protocol(&config(200_000, 8), &DeviceStrategy::HonestQrac).unwrap();
    let raw = build_bit_string(&log.records);
    let unblocked = log.records.iter().filter(|r| !r.blocked).count();
    assert_eq!(raw.bits.len(), unblocked);
    let p = raw.provenance;
    assert_eq!((p.detected_zero + p.detected_one + p.empty_as_zero) as usize, unblocked);
    let out = von_neumann(&raw.bits);
    assert!(out.len() <= raw.bits.len() / 2);

    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let (data, meta) = (dir.join("x.bin"), dir.join("x.bin.meta"));
    write_packed(&out, std::fs::File::create(&data).unwrap(), std::fs::File::create(&meta).unwrap()).unwrap();
    let back = read_packed(std::fs::File::open(&data).unwrap(), std::fs::File::open(&meta).unwrap()).unwrap();
    assert_eq!(back, out);
}

#[test]
fn confidence_intervals_cover_the_honest_value() {
    // 40 independent runs; 99% simultaneous intervals should essentially always cover.
    let qrac = 0.853_553_390_593_273_7;
    let misses = (0..40u64)
        .filter(|&s| {
            let c = ProtocolConfig::new(0.0, 1.0, 20_000, 600 + s).unwrap();
            let t = tally(&run_protocol(&c, &DeviceStrategy::HonestQrac).unwrap().records).unwrap();
            let b = probability_bounds(&t, 0.99).unwrap();
            b.intervals.iter().any(|i| !i.contains(qrac))
        })
        .count();
    assert!(misses <= 2, "{misses} of 40 runs missed");
}
