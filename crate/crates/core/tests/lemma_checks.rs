//! Monte Carlo embodiments of the eigenstructure facts the closed forms
//! rest on: largest-eigenvalue moments, eigenvector entry statistics, and
//! eigenvalue/eigenvector independence.

use rissnr::*;

fn wishart_g(n_r: usize, n: usize, seed: u64, idx: u64) -> SpectralDecomp {
    let x = sample_complex_gaussian(n_r, n, RngStream::new(seed, idx)).unwrap();
    wishart_decompose(&x, n, Side::Right).unwrap()
}

#[test]
fn largest_eigenvalue_gamma_fit_moments() {
    // 1e4 draws at (4, 64): mean within 2%, variance within 15% of the fit
    let s = lambda_plus_gamma(4, 64).unwrap();
    let draws = 10_000u64;
    let lams: Vec<f64> = (0..draws).map(|i| wishart_g(4, 64, 100, i).lambda_max()).collect();
    let mean = lams.iter().sum::<f64>() / draws as f64;
    let var = lams.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / (draws as f64 - 1.0);
    let mean_gap = (mean - s.mean).abs() / s.mean;
    let var_gap = (var - s.variance).abs() / s.variance;
    println!("largest-eigenvalue fit: mean gap {mean_gap:.4}, variance gap {var_gap:.4}");
    assert!(mean_gap < 0.02, "mean gap {mean_gap}");
    assert!(var_gap < 0.15, "variance gap {var_gap}");
}

#[test]
fn eigenvector_entry_squared_magnitude_mean() {
    // squared magnitude of a fixed top-eigenvector entry averages 1/n
    // (Beta(1, n-1) mean) over 1e5 decompositions
    let n = 16usize;
    let draws = 100_000u64;
    let mut acc = 0.0;
    for i in 0..draws {
        let d = wishart_g(4, n, 101, i);
        let e = d.eigenvectors[0][3].norm_sqr();
        acc += e;
    }
    let mean = acc / draws as f64;
    // Beta(1, n-1): var = (n-1) / (n^2 (n+1))
    let var = (n as f64 - 1.0) / ((n * n) as f64 * (n as f64 + 1.0));
    let se = (var / draws as f64).sqrt();
    let gap = (mean - 1.0 / n as f64).abs();
    println!("entry^2 mean {mean:.6} vs {:.6} (3se {:.2e})", 1.0 / n as f64, 3.0 * se);
    assert!(gap < 3.0 * se, "gap {gap} vs 3se {}", 3.0 * se);
}

#[test]
fn normalized_profile_cross_moment() {
    // E{y(n) y(m)} = pi / (4 n) for normalized complex-Gaussian magnitudes
    let n = 16usize;
    let draws = 100_000u64;
    let mut acc = 0.0;
    let mut acc2 = 0.0;
    for i in 0..draws {
        let v = sample_complex_gaussian(n, 1, RngStream::new(102, i)).unwrap();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let prod = v[0].norm() / norm * (v[5].norm() / norm);
        acc += prod;
        acc2 += prod * prod;
    }
    let mean = acc / draws as f64;
    let var = acc2 / draws as f64 - mean * mean;
    let se = (var / draws as f64).sqrt();
    let target = std::f64::consts::PI / (4.0 * n as f64);
    println!("cross moment {mean:.6} vs {target:.6} (3se {:.2e})", 3.0 * se);
    assert!((mean - target).abs() < 3.0 * se);
}

#[test]
fn eigenvalue_and_eigenvector_entries_uncorrelated() {
    // sample correlation between the top eigenvalue and a fixed eigenvector
    // entry magnitude over 1e4 draws is zero within 3 standard errors
    let draws = 10_000u64;
    let pairs: Vec<(f64, f64)> = (0..draws)
        .map(|i| {
            let d = wishart_g(4, 32, 103, i);
            (d.lambda_max(), d.eigenvectors[0][7].norm())
        })
        .collect();
    let n = draws as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sx = (pairs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>() / n).sqrt();
    let sy = (pairs.iter().map(|p| (p.1 - my) * (p.1 - my)).sum::<f64>() / n).sqrt();
    let corr = pairs
        .iter()
        .map(|p| (p.0 - mx) * (p.1 - my))
        .sum::<f64>()
        / (n * sx * sy);
    // se of a near-zero sample correlation is about 1/sqrt(n)
    let se = 1.0 / n.sqrt();
    println!("eigen pair correlation {corr:.5} (3se {:.2e})", 3.0 * se);
    assert!(corr.abs() < 3.0 * se, "correlation {corr}");
}

#[test]
fn von_mises_sampled_moments_cross_check() {
    // empirical (c1, c2, s2) from 1e6 draws agree with the closed forms
    // within 3 standard errors
    let m = PhaseNoiseModel::von_mises(3.5).unwrap();
    let t = m.trig_moments().unwrap();
    let angles = sample_phase_noise(&m, 1_000_000, RngStream::new(104, 0)).unwrap();
    let n = angles.len() as f64;
    let (mut c1, mut c2, mut s2) = (0.0, 0.0, 0.0);
    for a in &angles {
        let (s, c) = a.sin_cos();
        c1 += c;
        c2 += c * c;
        s2 += s * s;
    }
    let (c1, c2, s2) = (c1 / n, c2 / n, s2 / n);
    let se_c1 = ((t.c2 - t.c1 * t.c1).max(0.0) / n).sqrt();
    let se_sq = (0.25 / n).sqrt(); // var of cos^2 and sin^2 is at most 1/4
    assert!((c1 - t.c1).abs() < 3.0 * se_c1, "c1 {c1} vs {}", t.c1);
    assert!((c2 - t.c2).abs() < 3.0 * se_sq + 3.0 * se_c1);
    assert!((s2 - t.s2).abs() < 3.0 * se_sq + 3.0 * se_c1);
}
