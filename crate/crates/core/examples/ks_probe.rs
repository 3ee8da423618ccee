use rissnr::*;

fn main() {
    let c = SystemConfig::new(64, 4, 4, 1.0, ChannelKind::Rr, PhaseNoiseModel::Zero).unwrap();
    for ns in [10_000usize, 100_000] {
        for seed in [1u64, 500, 9000] {
            let a = run_monte_carlo(&c, Route::Exact, ns, seed).unwrap();
            let b = run_monte_carlo(&c, Route::Eid, ns, seed + 1).unwrap();
            let r = ks_two_sample(&a.values, &b.values).unwrap();
            println!("ns={ns} seed={seed}: ks={:.4}", r.statistic);
        }
    }
}
