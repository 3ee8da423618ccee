use rissnr::*;
use std::time::Instant;

fn main() {
    for n in [64usize, 128, 256] {
        let cfg = SystemConfig::new(n, 4, 4, 1.0, ChannelKind::Rr, PhaseNoiseModel::Zero).unwrap();
        let t0 = Instant::now();
        let s = run_monte_carlo(&cfg, Route::Exact, 2000, 1).unwrap();
        println!("exact n={n}: {:?} for 2000 (mean {:.1})", t0.elapsed(), s.mean());
    }
    let cfg = SystemConfig::new(128, 4, 4, 1.0, ChannelKind::Rr,
        PhaseNoiseModel::UniformScaled { epsilon: 0.2 }).unwrap();
    let t0 = Instant::now();
    let cdf = LargeNCdf::new(&cfg).unwrap();
    println!("LargeNCdf::new: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let mut acc = 0.0;
    for i in 0..200 { acc += cdf.eval(5000.0 + 100.0 * i as f64); }
    println!("200 evals: {:?} (acc {acc:.3})", t0.elapsed());
    let p = GaussianPairParams::from_var_noncent(1.0, 0.0, 1.0, 0.0).unwrap();
    let t0 = Instant::now();
    let mut m = 0.0f64;
    let mut x = 0.25;
    while x <= 20.0 { m = m.max((chi2_mix_cdf(x, &p).unwrap() - (1.0 - (-x/2.0f64).exp())).abs()); x += 0.25; }
    println!("imhof chi2_2 grid: {:?}, max abs err {m:.3e}", t0.elapsed());
}
