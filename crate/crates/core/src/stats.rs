//! Two-sample Kolmogorov-Smirnov machinery used to quantify distributional
//! agreement between sampling routes.

use crate::error::{Error, Result};

/// Outcome of a two-sample KS comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    /// Supremum gap between the two empirical CDFs.
    pub statistic: f64,
    pub n_a: usize,
    pub n_b: usize,
    /// Statistic above the asymptotic 1% critical value.
    pub reject_at_1pct: bool,
}

/// Exact supremum gap between the empirical CDFs of `a` and `b`, with the
/// asymptotic 1%-level rejection flag.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).expect("samples must not contain NaN"));
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).expect("samples must not contain NaN"));
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    // c(alpha) = sqrt(-ln(alpha/2) / 2) at alpha = 0.01
    let c01 = (-(0.005f64).ln() / 2.0).sqrt();
    let critical = c01 * ((na + nb) / (na * nb)).sqrt();
    Ok(KsReport {
        statistic: sup,
        n_a: xs.len(),
        n_b: ys.len(),
        reject_at_1pct: sup > critical,
    })
}

/// Empirical CDF of a sorted sample at x (right-continuous).
pub fn ecdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

/// Supremum gap between a sample's empirical CDF and a reference CDF,
/// evaluated at both step edges.
pub fn ks_against_cdf<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut xs = sample.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).expect("samples must not contain NaN"));
    let n = xs.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max((f - (i + 1) as f64 / n).abs());
    }
    Ok(sup)
}
