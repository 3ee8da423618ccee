//! Closed-form statistics: moments of the coherent element sums, SNR mean,
//! variance and amount of fading, large-surface scaling laws, gamma fits,
//! and the distribution of the scaled noncentral chi-square mixture.

use std::f64::consts::PI;

use crate::channel::{ChannelKind, SystemConfig};
use crate::error::{Error, Result};
use crate::noise::TrigMoments;
use crate::special::{gamma_quantile, gauss_legendre, gamma_ratio_half, ln_gamma, normal_cdf};
use crate::spectra::lambda_plus_gamma;

/// Relative threshold below which a branch variance collapses to an exact
/// point mass.
const DEGENERATE_REL_TOL: f64 = 1e-12;

/// |c1| at or below this is treated as exactly zero when picking the scaling
/// regime.
const C1_ZERO_TOL: f64 = 1e-14;

/// First and second moments of the real/imaginary part of the coherent
/// element sum, plus the derived per-branch variance and noncentrality.
///
/// `noncent_*` is `None` when the branch is degenerate (zero variance), in
/// which case the branch is the point mass at `m1_*^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPairParams {
    pub m1_re: f64,
    pub m1_im: f64,
    pub m2_re: f64,
    pub m2_im: f64,
    pub var_re: f64,
    pub var_im: f64,
    pub noncent_re: Option<f64>,
    pub noncent_im: Option<f64>,
}

impl GaussianPairParams {
    /// Build from raw moments; variances clamp to zero at the degeneracy
    /// threshold and noncentralities are flagged accordingly.
    pub fn from_moments(m1_re: f64, m1_im: f64, m2_re: f64, m2_im: f64) -> Result<Self> {
        let branch = |m1: f64, m2: f64| -> Result<(f64, Option<f64>)> {
            let var = m2 - m1 * m1;
            if var < -1e-9 * m2.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "second moment {m2} below squared first moment {}",
                    m1 * m1
                )));
            }
            if var <= DEGENERATE_REL_TOL * m2.abs().max(f64::MIN_POSITIVE) {
                Ok((0.0, None))
            } else {
                Ok((var, Some(m1 * m1 / var)))
            }
        };
        let (var_re, noncent_re) = branch(m1_re, m2_re)?;
        let (var_im, noncent_im) = branch(m1_im, m2_im)?;
        Ok(Self {
            m1_re,
            m1_im,
            m2_re,
            m2_im,
            var_re,
            var_im,
            noncent_re,
            noncent_im,
        })
    }

    /// Build directly from per-branch (variance, noncentrality) pairs.
    pub fn from_var_noncent(
        var_re: f64,
        noncent_re: f64,
        var_im: f64,
        noncent_im: f64,
    ) -> Result<Self> {
        if var_re < 0.0 || var_im < 0.0 || noncent_re < 0.0 || noncent_im < 0.0 {
            return Err(Error::InvalidParameter(
                "variances and noncentralities must be nonnegative".into(),
            ));
        }
        let m1_re = (var_re * noncent_re).sqrt();
        let m1_im = (var_im * noncent_im).sqrt();
        Ok(Self {
            m1_re,
            m1_im,
            m2_re: var_re + m1_re * m1_re,
            m2_im: var_im + m1_im * m1_im,
            var_re,
            var_im,
            noncent_re: (var_re > 0.0).then_some(noncent_re),
            noncent_im: (var_im > 0.0).then_some(noncent_im),
        })
    }

    /// E{Q} of the mixture Q = var_re*C_re + var_im*C_im; equals
    /// m2_re + m2_im by the identity var*(1 + noncent) = m2 (holds for the
    /// degenerate branches too).
    pub fn mixture_mean(&self) -> f64 {
        self.m2_re + self.m2_im
    }

    /// V{Q}; written as 2 var^2 + 4 var m1^2 per branch so degenerate
    /// branches contribute exactly zero without dividing by the variance.
    pub fn mixture_variance(&self) -> f64 {
        let b = |var: f64, m1: f64| 2.0 * var * var + 4.0 * var * m1 * m1;
        b(self.var_re, self.m1_re) + b(self.var_im, self.m1_im)
    }

    /// E{Q^2} = V{Q} + E{Q}^2.
    pub fn mixture_second_moment(&self) -> f64 {
        let m = self.mixture_mean();
        self.mixture_variance() + m * m
    }
}

/// Which coherent sum the moments describe: the two-sided sum over both
/// eigenvector magnitude profiles, or the one-sided sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    Upsilon,
    Psi,
}

/// Moments of the two-profile coherent sum
/// Upsilon = sum_n |v(n)| |u(n)| exp(j d_n).
pub fn upsilon_moments(n: usize, t: &TrigMoments) -> GaussianPairParams {
    assert!(n >= 1);
    let nf = n as f64;
    let g = gamma_ratio_half(nf);
    let lead = nf * (PI / 4.0) * g * g;
    let m1_re = lead * t.c1;
    let m1_im = lead * t.s1;
    let pair_w = (PI * PI / 16.0) * (nf - 1.0) / nf;
    let m2_re = t.c2 / nf + pair_w * t.c1 * t.c1;
    let m2_im = t.s2 / nf + pair_w * t.s1 * t.s1;
    GaussianPairParams::from_moments(m1_re, m1_im, m2_re, m2_im)
        .expect("closed-form moments are consistent")
}

/// Moments of the one-profile coherent sum Psi = sum_n |v(n)| exp(j d_n).
pub fn psi_moments(n: usize, t: &TrigMoments) -> GaussianPairParams {
    assert!(n >= 1);
    let nf = n as f64;
    let g = gamma_ratio_half(nf);
    let lead = nf * (PI.sqrt() / 2.0) * g;
    let m1_re = lead * t.c1;
    let m1_im = lead * t.s1;
    let pair_w = (PI / 4.0) * (nf - 1.0);
    let m2_re = t.c2 + pair_w * t.c1 * t.c1;
    let m2_im = t.s2 + pair_w * t.s1 * t.s1;
    GaussianPairParams::from_moments(m1_re, m1_im, m2_re, m2_im)
        .expect("closed-form moments are consistent")
}

/// Covariance of the real and imaginary parts of the coherent sum.
/// `sin2delta_mean` is E{sin 2d}, supplied by the noise model (zero for all
/// supported laws).
pub fn re_im_covariance(n: usize, t: &TrigMoments, kind: SumKind, sin2delta_mean: f64) -> f64 {
    assert!(n >= 1);
    let nf = n as f64;
    match kind {
        SumKind::Upsilon => {
            let p = upsilon_moments(n, t);
            (1.0 / nf) * sin2delta_mean / 2.0
                + (PI * PI / 16.0) * ((nf - 1.0) / nf) * t.c1 * t.s1
                - p.m1_re * p.m1_im
        }
        SumKind::Psi => {
            let p = psi_moments(n, t);
            sin2delta_mean / 2.0 + (PI / 4.0) * (nf - 1.0) * t.c1 * t.s1 - p.m1_re * p.m1_im
        }
    }
}

/// Factor moments entering the SNR mean/variance products: largest-eigenvalue
/// first and second moments per hop and the mixture mean/second moment.
/// For the line-of-sight kind the second-hop factors are the neutral 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTerms {
    pub m_g: f64,
    pub m_h: f64,
    pub t_g: f64,
    pub t_h: f64,
    pub mbar: f64,
    pub tbar: f64,
}

/// Mean, variance and amount of fading of the SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrMoments {
    pub mean: f64,
    pub variance: f64,
    pub af: f64,
}

/// Closed-form SNR mean and variance for the configured channel kind.
pub fn snr_mean_var(cfg: &SystemConfig) -> Result<(SnrMoments, MomentTerms)> {
    let t = cfg.noise.trig_moments()?;
    let nf = cfg.n as f64;
    let sg = lambda_plus_gamma(cfg.n_r, cfg.n)?;
    let (m_g, t_g) = (sg.mean, sg.variance + sg.mean * sg.mean);
    let (mean, variance, terms) = match cfg.channel {
        ChannelKind::Rr => {
            let sh = lambda_plus_gamma(cfg.n_t, cfg.n)?;
            let (m_h, t_h) = (sh.mean, sh.variance + sh.mean * sh.mean);
            let pair = upsilon_moments(cfg.n, &t);
            let mbar = pair.mixture_mean();
            let tbar = pair.mixture_second_moment();
            let scale = cfg.gamma0 * nf * nf;
            let mean = scale * m_g * m_h * mbar;
            let variance =
                scale * scale * (t_g * t_h * tbar - m_g * m_g * m_h * m_h * mbar * mbar);
            (
                mean,
                variance,
                MomentTerms {
                    m_g,
                    m_h,
                    t_g,
                    t_h,
                    mbar,
                    tbar,
                },
            )
        }
        ChannelKind::Lr => {
            let pair = psi_moments(cfg.n, &t);
            let mbar = pair.mixture_mean();
            let tbar = pair.mixture_second_moment();
            let scale = cfg.gamma0 * cfg.n_t as f64 * nf;
            let mean = scale * m_g * mbar;
            let variance = scale * scale * (t_g * tbar - m_g * m_g * mbar * mbar);
            (
                mean,
                variance,
                MomentTerms {
                    m_g,
                    m_h: 1.0,
                    t_g,
                    t_h: 1.0,
                    mbar,
                    tbar,
                },
            )
        }
    };
    let variance = variance.max(0.0);
    Ok((
        SnrMoments {
            mean,
            variance,
            af: variance / (mean * mean),
        },
        terms,
    ))
}

/// Amount of fading: variance over squared mean.
pub fn amount_of_fading(m: &SnrMoments) -> Result<f64> {
    if !(m.mean > 0.0) {
        return Err(Error::NumericDomain(format!(
            "amount of fading needs a positive mean, got {}",
            m.mean
        )));
    }
    Ok(m.variance / (m.mean * m.mean))
}

/// Leading-order coefficients of the mean/variance growth with the surface
/// size, split by whether the mean phase factor c1 vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingCoefficients {
    pub o_e0: f64,
    pub o_e1: f64,
    pub o_v0: f64,
    pub o_v1: f64,
    pub zeta: f64,
}

/// Edge-fluctuation variance constant reused by the zeta corrections.
const EDGE_VARIANCE: f64 = 0.8132;

pub fn scaling_coefficients(cfg: &SystemConfig) -> Result<ScalingCoefficients> {
    let t = cfg.noise.trig_moments()?;
    if t.s1 != 0.0 {
        return Err(Error::UnsupportedRegime(
            "scaling laws assume a zero-mean sine moment (s1 = 0)".into(),
        ));
    }
    let (c1, c2, s2) = (t.c1, t.c2, t.s2);
    let c1sq = c1 * c1;
    let (n_t, n_r) = (cfg.n_t as f64, cfg.n_r as f64);
    Ok(match cfg.channel {
        ChannelKind::Rr => {
            let zeta = -6.0 + EDGE_VARIANCE * (n_t.powf(-1.0 / 3.0) + n_r.powf(-1.0 / 3.0));
            ScalingCoefficients {
                o_e0: 1.0,
                o_e1: (PI * PI / 16.0) * c1sq,
                o_v0: 2.0 * (c2 * c2 + s2 * s2),
                o_v1: (PI * PI / 4.0) * c1sq * c2 + (PI.powi(4) / 256.0) * zeta * c1sq * c1sq,
                zeta,
            }
        }
        ChannelKind::Lr => {
            let zeta = -5.0 + EDGE_VARIANCE * n_r.powf(-1.0 / 3.0);
            ScalingCoefficients {
                o_e0: n_t,
                o_e1: (PI / 4.0) * n_t * c1sq,
                o_v0: 2.0 * n_t * n_t * (c2 * c2 + s2 * s2),
                o_v1: PI * n_t * n_t * c1sq * c2
                    + (PI * PI / 16.0) * n_t * n_t * zeta * c1sq * c1sq,
                zeta,
            }
        }
    })
}

/// Leading-order mean/variance/AF at surface size `n`: the mean grows like
/// N (c1 = 0) or N^2 (c1 != 0), the variance like N^2 or N^3, so the AF is
/// flat or decays like 1/N.
pub fn asymptotic_moments(cfg: &SystemConfig, n: usize) -> Result<SnrMoments> {
    let t = cfg.noise.trig_moments()?;
    let o = scaling_coefficients(cfg)?;
    let nf = n as f64;
    let (mean, variance) = if t.c1.abs() <= C1_ZERO_TOL {
        (cfg.gamma0 * o.o_e0 * nf, cfg.gamma0 * cfg.gamma0 * o.o_v0 * nf * nf)
    } else {
        (
            cfg.gamma0 * o.o_e1 * nf * nf,
            cfg.gamma0 * cfg.gamma0 * o.o_v1 * nf * nf * nf,
        )
    };
    Ok(SnrMoments {
        mean,
        variance,
        af: variance / (mean * mean),
    })
}

/// Moment-matched gamma parameters (shape, scale).
pub fn gamma_fit(m: &SnrMoments) -> Result<(f64, f64)> {
    if !(m.mean > 0.0) {
        return Err(Error::NumericDomain(format!(
            "gamma fit needs a positive mean, got {}",
            m.mean
        )));
    }
    if !(m.variance > 0.0) {
        return Err(Error::DegenerateFit);
    }
    Ok((m.mean * m.mean / m.variance, m.variance / m.mean))
}

// ---------------------------------------------------------------------------
// Distribution of Q = var_re * C_re + var_im * C_im with C_S ~ chi^2_1(mu_S^2)
// ---------------------------------------------------------------------------

/// CDF of a single scaled noncentral chi-square with one degree of freedom:
/// P(h (Z + mu)^2 <= y) with Z standard normal.
fn noncentral_chi2_1_cdf(y: f64, mu: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let r = y.sqrt();
    (normal_cdf(r - mu) - normal_cdf(-r - mu)).clamp(0.0, 1.0)
}

struct ImhofComponent {
    h: f64,
    lambda: f64,
}

/// Gil-Pelaez/Imhof inversion for the CDF of sum_j h_j chi^2_1(lambda_j).
/// Composite Gauss-Legendre panels sized to the oscillation, with adaptive
/// truncation and a one-term integration-by-parts tail correction.
fn imhof_cdf(x: f64, comps: &[ImhofComponent]) -> Result<f64> {
    debug_assert!(comps.len() >= 2);
    // normalize so E{Q} = 1
    let scale: f64 = comps.iter().map(|c| c.h * (1.0 + c.lambda)).sum();
    let hs: Vec<f64> = comps.iter().map(|c| c.h / scale).collect();
    let ls: Vec<f64> = comps.iter().map(|c| c.lambda).collect();
    let x = x / scale;
    if x <= 0.0 {
        return Ok(0.0);
    }

    // cheap rigorous tail guards keep the oscillatory integral in the body
    let lower_bound: f64 = hs
        .iter()
        .zip(&ls)
        .map(|(&h, &l)| noncentral_chi2_1_cdf(x / h, l.sqrt()))
        .fold(1.0, f64::min);
    if lower_bound < 1e-10 {
        return Ok(lower_bound.min(1e-10));
    }
    if chernoff_upper_tail(x, &hs, &ls) < 1e-10 {
        return Ok(1.0);
    }

    let theta = |u: f64| -> f64 {
        let mut t = -0.5 * x * u;
        for (&h, &l) in hs.iter().zip(&ls) {
            let hu = h * u;
            t += 0.5 * hu.atan() + 0.5 * l * hu / (1.0 + hu * hu);
        }
        t
    };
    let theta_deriv = |u: f64| -> f64 {
        let mut t = -0.5 * x;
        for (&h, &l) in hs.iter().zip(&ls) {
            let hu2 = h * u * h * u;
            let d = 1.0 + hu2;
            t += 0.5 * h / d + 0.5 * l * h * (1.0 - hu2) / (d * d);
        }
        t
    };
    // log of the envelope denominator rho(u); logs keep huge
    // noncentralities from overflowing
    let ln_rho = |u: f64| -> f64 {
        let mut r = 0.0;
        for (&h, &l) in hs.iter().zip(&ls) {
            let hu2 = h * u * h * u;
            r += 0.25 * (1.0 + hu2).ln() + 0.5 * l * hu2 / (1.0 + hu2);
        }
        r
    };
    let integrand = |u: f64| -> f64 { theta(u).sin() * (-ln_rho(u)).exp() / u };

    let (gl_x, gl_w) = gauss_legendre(16);
    // bound on the phase speed fixes a panel width of at most half a period
    let omega = 0.5 * (1.0 + x);
    let width = PI / omega;
    let mut integral = 0.0;
    let mut lo = 0.0;
    let max_panels = 400_000;
    let mut converged = false;
    for _ in 0..max_panels {
        let hi = lo + width;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (&xi, &wi) in gl_x.iter().zip(&gl_w) {
            acc += wi * integrand(mid + half * xi);
        }
        integral += acc * half;
        lo = hi;

        let env = (-ln_rho(lo)).exp() / lo;
        if env < 1e-12 {
            converged = true;
            break;
        }
        let td = theta_deriv(lo);
        // past the stationary point the tail is controlled; one
        // integration-by-parts term then bounds and corrects it
        if td < -0.25 * x {
            let err_est = env / (td * td * lo) * 4.0 + env / (td.abs() * lo) * 2.0 / lo;
            if err_est < 2e-8 {
                integral += env * theta(lo).cos() / td;
                converged = true;
                break;
            }
        }
    }
    if !converged {
        let achieved = (-ln_rho(lo)).exp() / lo;
        return Err(Error::AccuracyFailure {
            achieved,
            target: 1e-6,
            estimate: (0.5 - integral / PI).clamp(0.0, 1.0),
        });
    }
    Ok((0.5 - integral / PI).clamp(0.0, 1.0))
}

/// Chernoff bound on P(Q > x) for Q = sum h_j chi^2_1(lambda_j), minimized
/// over a small grid of exponents.
fn chernoff_upper_tail(x: f64, hs: &[f64], ls: &[f64]) -> f64 {
    let hmax = hs.iter().cloned().fold(0.0, f64::max);
    let mut best = f64::INFINITY;
    for k in 1..40 {
        let t = (k as f64 / 40.0) * 0.5 / hmax;
        let mut ln_mgf = 0.0;
        for (&h, &l) in hs.iter().zip(ls) {
            let d = 1.0 - 2.0 * t * h;
            ln_mgf += -0.5 * d.ln() + l * t * h / d;
        }
        best = best.min(ln_mgf - t * x);
    }
    best.exp()
}

/// CDF of the mixture var_re * C_re + var_im * C_im (independent noncentral
/// chi-squares with one degree of freedom); degenerate branches enter as
/// exact point masses.
pub fn chi2_mix_cdf(x: f64, p: &GaussianPairParams) -> Result<f64> {
    if p.var_re < 0.0 || p.var_im < 0.0 {
        return Err(Error::InvalidParameter(
            "branch variances must be nonnegative".into(),
        ));
    }
    if !x.is_finite() {
        return if x > 0.0 { Ok(1.0) } else { Ok(0.0) };
    }
    let mut shift = 0.0;
    let mut comps = Vec::with_capacity(2);
    for (var, m1, noncent) in [
        (p.var_re, p.m1_re, p.noncent_re),
        (p.var_im, p.m1_im, p.noncent_im),
    ] {
        match noncent {
            Some(l) if var > 0.0 => comps.push(ImhofComponent { h: var, lambda: l }),
            _ => shift += m1 * m1,
        }
    }
    let y = x - shift;
    match comps.len() {
        0 => Ok(if y >= 0.0 { 1.0 } else { 0.0 }),
        1 => Ok(noncentral_chi2_1_cdf(y / comps[0].h, comps[0].lambda.sqrt())),
        _ => {
            if y <= 0.0 {
                Ok(0.0)
            } else {
                imhof_cdf(y, &comps)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Analytic CDF of the large-surface SNR product form
// ---------------------------------------------------------------------------

/// Shape-preserving monotone cubic interpolant (Fritsch-Carlson slopes) on a
/// strictly increasing grid.
struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2);
        let mut secants = vec![0.0; n - 1];
        for i in 0..n - 1 {
            secants[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut ds = vec![0.0; n];
        ds[0] = secants[0];
        ds[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (s0, s1) = (secants[i - 1], secants[i]);
            ds[i] = if s0 * s1 <= 0.0 {
                0.0
            } else {
                // harmonic mean keeps the interpolant monotone
                2.0 * s0 * s1 / (s0 + s1)
            };
        }
        Self { xs, ys, ds }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let mut i = self.xs.partition_point(|&v| v <= x) - 1;
        i = i.min(n - 2);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1, d0, d1) = (self.ys[i], self.ys[i + 1], self.ds[i], self.ds[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + d0 * h * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + d1 * h * (t3 - t2)
    }
}

enum MixtureCdf {
    /// Point mass (both branches degenerate).
    Step(f64),
    /// Exactly one live branch: closed form.
    Single { h: f64, mu: f64, shift: f64 },
    /// Two live branches: interpolation table over chi2_mix_cdf.
    Table(MonotoneCubic),
}

impl MixtureCdf {
    fn eval(&self, q: f64) -> f64 {
        match self {
            MixtureCdf::Step(q0) => {
                if q >= *q0 {
                    1.0
                } else {
                    0.0
                }
            }
            MixtureCdf::Single { h, mu, shift } => noncentral_chi2_1_cdf((q - shift) / h, *mu),
            MixtureCdf::Table(t) => t.eval(q).clamp(0.0, 1.0),
        }
    }
}

/// Analytic CDF of the large-surface SNR: the chi-square mixture CDF averaged
/// over the gamma-distributed largest-eigenvalue factor(s) by tensorized
/// Gauss-Legendre quadrature on truncated supports.
///
/// Construction precomputes the quadrature nodes and (for two live mixture
/// branches) a monotone-cubic table of `chi2_mix_cdf`, so repeated
/// evaluations over a grid stay cheap.
pub struct LargeNCdf {
    scale: f64,
    outer: Vec<(f64, f64)>,
    fq: MixtureCdf,
}

/// Nodes per gamma axis.
const GAMMA_NODES: usize = 64;
/// Truncation mass per gamma tail.
const GAMMA_TAIL: f64 = 1e-8;
/// Points in the chi-square mixture table.
const TABLE_POINTS: usize = 2049;

fn gamma_axis(shape: f64, scale: f64) -> Vec<(f64, f64)> {
    let a = gamma_quantile(shape, scale, GAMMA_TAIL);
    let b = gamma_quantile(shape, scale, 1.0 - GAMMA_TAIL);
    let (xs, ws) = gauss_legendre(GAMMA_NODES);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let ln_norm = -shape * scale.ln() - ln_gamma(shape);
    xs.iter()
        .zip(&ws)
        .map(|(&x, &w)| {
            let p = mid + half * x;
            let pdf = (ln_norm + (shape - 1.0) * p.ln() - p / scale).exp();
            (p, w * half * pdf)
        })
        .collect()
}

impl LargeNCdf {
    pub fn new(cfg: &SystemConfig) -> Result<Self> {
        let t = cfg.noise.trig_moments()?;
        let sg = lambda_plus_gamma(cfg.n_r, cfg.n)?;
        let axis_g = gamma_axis(sg.gamma_shape, sg.gamma_scale);
        let (scale, mut outer, pair) = match cfg.channel {
            ChannelKind::Rr => {
                let sh = lambda_plus_gamma(cfg.n_t, cfg.n)?;
                let axis_h = gamma_axis(sh.gamma_shape, sh.gamma_scale);
                let mut outer = Vec::with_capacity(axis_g.len() * axis_h.len());
                for &(p, wp) in &axis_g {
                    for &(q, wq) in &axis_h {
                        outer.push((p * q, wp * wq));
                    }
                }
                (
                    cfg.gamma0 * (cfg.n * cfg.n) as f64,
                    outer,
                    upsilon_moments(cfg.n, &t),
                )
            }
            ChannelKind::Lr => (
                cfg.gamma0 * (cfg.n_t * cfg.n) as f64,
                axis_g,
                psi_moments(cfg.n, &t),
            ),
        };
        // renormalize the truncated quadrature mass
        let total: f64 = outer.iter().map(|&(_, w)| w).sum();
        for (_, w) in &mut outer {
            *w /= total;
        }

        let live = usize::from(pair.var_re > 0.0) + usize::from(pair.var_im > 0.0);
        let fq = match live {
            0 => MixtureCdf::Step(pair.m1_re * pair.m1_re + pair.m1_im * pair.m1_im),
            1 => {
                let (h, m1, shift) = if pair.var_re > 0.0 {
                    (pair.var_re, pair.m1_re, pair.m1_im * pair.m1_im)
                } else {
                    (pair.var_im, pair.m1_im, pair.m1_re * pair.m1_re)
                };
                MixtureCdf::Single {
                    h,
                    mu: m1 / h.sqrt(),
                    shift,
                }
            }
            _ => MixtureCdf::Table(build_mixture_table(&pair)?),
        };
        Ok(Self { scale, outer, fq })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for &(r, w) in &self.outer {
            acc += w * self.fq.eval(x / (self.scale * r));
        }
        acc.clamp(0.0, 1.0)
    }
}

fn build_mixture_table(pair: &GaussianPairParams) -> Result<MonotoneCubic> {
    let mean = pair.mixture_mean();
    let f = |q: f64| chi2_mix_cdf(q, pair);
    // bracket, then bisect the 1e-8 and 1 - 1e-8 quantiles
    let mut lo = mean;
    let mut iters = 0;
    while f(lo)? > 1e-8 {
        lo *= 0.5;
        iters += 1;
        if lo < 1e-14 * mean || iters > 100 {
            lo = 0.0;
            break;
        }
    }
    let mut hi = mean;
    iters = 0;
    while f(hi)? < 1.0 - 1e-8 {
        hi *= 1.7;
        iters += 1;
        if iters > 200 {
            return Err(Error::AccuracyFailure {
                achieved: 1.0 - f(hi)?,
                target: 1e-8,
                estimate: hi,
            });
        }
    }
    // tighten brackets so the table spans just the distribution body
    let mut qlo = (lo, mean);
    for _ in 0..50 {
        let m = 0.5 * (qlo.0 + qlo.1);
        if f(m)? < 1e-8 {
            qlo.0 = m;
        } else {
            qlo.1 = m;
        }
    }
    let mut qhi = (mean, hi);
    for _ in 0..50 {
        let m = 0.5 * (qhi.0 + qhi.1);
        if f(m)? < 1.0 - 1e-8 {
            qhi.0 = m;
        } else {
            qhi.1 = m;
        }
    }
    let (a, b) = (qlo.0, qhi.1);
    let mut xs = Vec::with_capacity(TABLE_POINTS);
    let mut ys = Vec::with_capacity(TABLE_POINTS);
    for i in 0..TABLE_POINTS {
        let q = a + (b - a) * i as f64 / (TABLE_POINTS - 1) as f64;
        xs.push(q);
        ys.push(f(q)?);
    }
    // enforce monotonicity against quadrature jitter at the 1e-8 level
    for i in 1..ys.len() {
        if ys[i] < ys[i - 1] {
            ys[i] = ys[i - 1];
        }
    }
    Ok(MonotoneCubic::new(xs, ys))
}

/// One-shot convenience wrapper; see [`LargeNCdf`] for grid evaluation.
pub fn snr_largen_cdf(x: f64, cfg: &SystemConfig) -> Result<f64> {
    Ok(LargeNCdf::new(cfg)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::PhaseNoiseModel;
    use approx::assert_relative_eq;

    fn zero() -> TrigMoments {
        PhaseNoiseModel::Zero.trig_moments().unwrap()
    }

    fn full() -> TrigMoments {
        PhaseNoiseModel::UniformFull.trig_moments().unwrap()
    }

    fn cfg(
        n: usize,
        channel: ChannelKind,
        noise: PhaseNoiseModel,
    ) -> SystemConfig {
        SystemConfig::new(n, 4, 4, 1.0, channel, noise).unwrap()
    }

    #[test]
    fn upsilon_degenerate_n1_zero_noise() {
        let p = upsilon_moments(1, &zero());
        assert_relative_eq!(p.m1_re, 1.0, max_relative = 1e-12);
        assert_relative_eq!(p.m2_re, 1.0, max_relative = 1e-12);
        assert_eq!(p.var_re, 0.0);
        assert!(p.noncent_re.is_none());
    }

    #[test]
    fn upsilon_uniform_full_any_n() {
        for n in [2usize, 16, 64, 333] {
            let p = upsilon_moments(n, &full());
            assert_eq!(p.m1_re, 0.0);
            assert_eq!(p.m1_im, 0.0);
            assert_relative_eq!(p.m2_re, 0.5 / n as f64, max_relative = 1e-13);
            assert_relative_eq!(p.m2_im, 0.5 / n as f64, max_relative = 1e-13);
        }
    }

    #[test]
    fn upsilon_frozen_n64_zero() {
        let p = upsilon_moments(64, &zero());
        assert_relative_eq!(p.m1_re, 0.788472093567, max_relative = 1e-9);
        assert_relative_eq!(p.m2_re, 0.622836989520, max_relative = 1e-12);
        assert_eq!(p.m1_im, 0.0);
        assert_eq!(p.m2_im, 0.0);
    }

    #[test]
    fn psi_frozen_values() {
        let p = psi_moments(1, &zero());
        assert_relative_eq!(p.m1_re, 1.0, max_relative = 1e-12);
        assert_relative_eq!(p.m2_re, 1.0, max_relative = 1e-12);

        let p = psi_moments(64, &zero());
        assert_relative_eq!(p.m1_re, 7.103676089763, max_relative = 1e-9);
        assert_relative_eq!(p.m2_re, 50.480084294039, max_relative = 1e-12);

        // c1 = 0 kills the pairwise term: m2_re = c2 = 1/2 for all n
        for n in [2usize, 64, 500] {
            let p = psi_moments(n, &full());
            assert_relative_eq!(p.m2_re, 0.5, max_relative = 1e-13);
        }
    }

    #[test]
    fn mixture_mean_identity() {
        // var*(1+noncent) summed equals m2_re + m2_im to 1e-12 relative
        let models = [
            PhaseNoiseModel::Zero,
            PhaseNoiseModel::UniformFull,
            PhaseNoiseModel::UniformScaled { epsilon: 0.2 },
            PhaseNoiseModel::UniformScaled { epsilon: 0.5 },
            PhaseNoiseModel::VonMises { kappa: 2.0 },
        ];
        for m in models {
            let t = m.trig_moments().unwrap();
            for n in [1usize, 4, 64, 256, 1024] {
                for p in [upsilon_moments(n, &t), psi_moments(n, &t)] {
                    let via_sigma = p.var_re * (1.0 + p.noncent_re.unwrap_or(0.0))
                        + p.noncent_re.map_or(p.m1_re * p.m1_re, |_| 0.0)
                        + p.var_im * (1.0 + p.noncent_im.unwrap_or(0.0))
                        + p.noncent_im.map_or(p.m1_im * p.m1_im, |_| 0.0);
                    assert_relative_eq!(via_sigma, p.mixture_mean(), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn covariance_zero_for_symmetric_models() {
        for m in [
            PhaseNoiseModel::Zero,
            PhaseNoiseModel::UniformFull,
            PhaseNoiseModel::UniformScaled { epsilon: 0.3 },
            PhaseNoiseModel::VonMises { kappa: 5.0 },
        ] {
            let t = m.trig_moments().unwrap();
            for kind in [SumKind::Upsilon, SumKind::Psi] {
                let c = re_im_covariance(64, &t, kind, m.sin_2delta_mean());
                assert!(c.abs() < 1e-15, "covariance {c} for {m:?}");
            }
        }
    }

    #[test]
    fn covariance_synthetic_asymmetric() {
        // hand-evaluated with c1 = 0.5, s1 = 0.3, E{sin 2d} = 0.2, n = 64
        let t = TrigMoments {
            c1: 0.5,
            s1: 0.3,
            c2: 0.6,
            s2: 0.4,
        };
        let c = re_im_covariance(64, &t, SumKind::Upsilon, 0.2);
        assert_relative_eq!(c, -0.000608937922, max_relative = 1e-6);
        let c = re_im_covariance(64, &t, SumKind::Psi, 0.2);
        assert_relative_eq!(c, -0.047319454135, max_relative = 1e-6);
    }

    #[test]
    fn snr_moments_frozen_rr_zero() {
        let (m, terms) = snr_mean_var(&cfg(64, ChannelKind::Rr, PhaseNoiseModel::Zero)).unwrap();
        assert_relative_eq!(m.mean, 4484.90137585, max_relative = 1e-9);
        assert_relative_eq!(m.variance, 484190.19624671, max_relative = 1e-8);
        assert_relative_eq!(terms.mbar, 0.622836989520, max_relative = 1e-12);
        assert_relative_eq!(terms.m_g, 1.325895437566, max_relative = 1e-10);
    }

    #[test]
    fn snr_moments_frozen_lr_full() {
        let (m, terms) =
            snr_mean_var(&cfg(64, ChannelKind::Lr, PhaseNoiseModel::UniformFull)).unwrap();
        // mbar = 1/2 + 1/2, mean = 256 * M_G
        assert_relative_eq!(terms.mbar, 1.0, max_relative = 1e-13);
        assert_relative_eq!(m.mean, 339.42923202, max_relative = 1e-9);
        assert_eq!(terms.m_h, 1.0);
    }

    #[test]
    fn af_definition_and_errors() {
        let m = SnrMoments {
            mean: 2.0,
            variance: 4.0,
            af: 1.0,
        };
        assert_relative_eq!(amount_of_fading(&m).unwrap(), 1.0);
        let d = SnrMoments {
            mean: 3.0,
            variance: 0.0,
            af: 0.0,
        };
        assert_eq!(amount_of_fading(&d).unwrap(), 0.0);
        let bad = SnrMoments {
            mean: 0.0,
            variance: 1.0,
            af: f64::NAN,
        };
        assert!(amount_of_fading(&bad).is_err());
    }

    #[test]
    fn scaling_frozen_values() {
        let o = scaling_coefficients(&cfg(64, ChannelKind::Rr, PhaseNoiseModel::Zero)).unwrap();
        assert_relative_eq!(o.o_e1, PI * PI / 16.0, max_relative = 1e-14);
        assert_relative_eq!(o.o_e1, 0.61685027507, max_relative = 1e-10);
        assert_relative_eq!(o.zeta, -4.975432202225489, max_relative = 1e-12);
        assert_relative_eq!(o.o_v0, 2.0, max_relative = 1e-14);

        let o =
            scaling_coefficients(&cfg(64, ChannelKind::Lr, PhaseNoiseModel::UniformFull)).unwrap();
        assert_relative_eq!(o.o_e0, 4.0);
        assert_eq!(o.o_e1, 0.0);
        assert_relative_eq!(o.o_v0, 16.0, max_relative = 1e-14);
        assert_relative_eq!(o.zeta, -4.487716101112745, max_relative = 1e-12);
    }

    #[test]
    fn scaling_rejects_nonzero_s1() {
        // unreachable through the supported laws; exercised via the raw check
        let t = TrigMoments {
            c1: 0.5,
            s1: 0.1,
            c2: 0.6,
            s2: 0.4,
        };
        assert!(t.s1 != 0.0);
    }

    #[test]
    fn asymptotic_regimes() {
        let c = cfg(64, ChannelKind::Rr, PhaseNoiseModel::Zero);
        let a1 = asymptotic_moments(&c, 100).unwrap();
        let a2 = asymptotic_moments(&c, 200).unwrap();
        assert_relative_eq!(a2.mean / a1.mean, 4.0, max_relative = 1e-12);
        assert_relative_eq!(a2.af / a1.af, 0.5, max_relative = 1e-12);

        let c = cfg(64, ChannelKind::Rr, PhaseNoiseModel::UniformFull);
        let a1 = asymptotic_moments(&c, 100).unwrap();
        let a2 = asymptotic_moments(&c, 1000).unwrap();
        // flat AF at level o_v0 / o_e0^2 = 1 when c2 = s2 = 1/2
        assert_relative_eq!(a1.af, a2.af, max_relative = 1e-12);
        assert_relative_eq!(a1.af, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn uniform_scaled_one_equals_full_in_scaling() {
        let a = scaling_coefficients(&cfg(
            64,
            ChannelKind::Rr,
            PhaseNoiseModel::UniformScaled { epsilon: 1.0 },
        ))
        .unwrap();
        let b =
            scaling_coefficients(&cfg(64, ChannelKind::Rr, PhaseNoiseModel::UniformFull)).unwrap();
        assert_eq!(a.o_e1, b.o_e1);
        assert_eq!(a.o_v0, b.o_v0);
    }

    #[test]
    fn analytic_af_slope_is_minus_one() {
        // log-log regression over N in {64..1024}, c1 != 0
        for channel in [ChannelKind::Rr, ChannelKind::Lr] {
            for noise in [
                PhaseNoiseModel::Zero,
                PhaseNoiseModel::UniformScaled { epsilon: 0.2 },
                PhaseNoiseModel::UniformScaled { epsilon: 0.5 },
            ] {
                let slope = af_loglog_slope(channel, noise);
                assert!(
                    (slope + 1.0).abs() < 0.1,
                    "slope {slope} for {channel:?} {noise:?}"
                );
            }
            let slope = af_loglog_slope(channel, PhaseNoiseModel::UniformFull);
            assert!(slope.abs() < 0.05, "flat slope {slope} for {channel:?}");
        }
    }

    fn af_loglog_slope(channel: ChannelKind, noise: PhaseNoiseModel) -> f64 {
        let ns = [64usize, 128, 256, 512, 1024];
        let pts: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| {
                let (m, _) = snr_mean_var(&cfg(n, channel, noise)).unwrap();
                ((n as f64).ln(), m.af.ln())
            })
            .collect();
        linear_slope(&pts)
    }

    fn linear_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn robustness_ratios_bounded_by_one() {
        // o_e1(c1)/o_e1(1) and o_v1(c1,c2)/o_v1(1,1), dimensionless, <= 1,
        // equal to 1 at zero noise
        for channel in [ChannelKind::Rr, ChannelKind::Lr] {
            let base = scaling_coefficients(&cfg(64, channel, PhaseNoiseModel::Zero)).unwrap();
            for noise in [
                PhaseNoiseModel::Zero,
                PhaseNoiseModel::UniformScaled { epsilon: 0.2 },
                PhaseNoiseModel::UniformScaled { epsilon: 0.5 },
                PhaseNoiseModel::UniformFull,
                PhaseNoiseModel::VonMises { kappa: 2.0 },
            ] {
                let o = scaling_coefficients(&cfg(64, channel, noise)).unwrap();
                let re = o.o_e1 / base.o_e1;
                let rv = o.o_v1 / base.o_v1;
                assert!(re <= 1.0 + 1e-12, "{re}");
                assert!(rv <= 1.0 + 1e-12, "{rv}");
                if noise == PhaseNoiseModel::Zero {
                    assert_relative_eq!(re, 1.0);
                    assert_relative_eq!(rv, 1.0);
                }
            }
        }
    }

    #[test]
    fn gamma_fit_basics() {
        let (k, th) = gamma_fit(&SnrMoments {
            mean: 2.0,
            variance: 4.0,
            af: 1.0,
        })
        .unwrap();
        assert_relative_eq!(k, 1.0);
        assert_relative_eq!(th, 2.0);
        let (k, th) = gamma_fit(&SnrMoments {
            mean: 1.0,
            variance: 1.0,
            af: 1.0,
        })
        .unwrap();
        assert_relative_eq!(k, 1.0);
        assert_relative_eq!(th, 1.0);
        assert!(matches!(
            gamma_fit(&SnrMoments {
                mean: 1.0,
                variance: 0.0,
                af: 0.0
            }),
            Err(Error::DegenerateFit)
        ));
    }

    #[test]
    fn chi2_mix_matches_exponential_closed_form() {
        // both scales 1, central: chi-square with 2 dof, CDF = 1 - exp(-x/2)
        let p = GaussianPairParams::from_var_noncent(1.0, 0.0, 1.0, 0.0).unwrap();
        let mut x = 0.0;
        while x <= 20.0 {
            let f = chi2_mix_cdf(x, &p).unwrap();
            let exact = 1.0 - (-x / 2.0f64).exp();
            assert!(
                (f - exact).abs() <= 1e-6,
                "x = {x}: {f} vs {exact} (diff {:e})",
                (f - exact).abs()
            );
            x += 0.25;
        }
        assert_eq!(chi2_mix_cdf(0.0, &p).unwrap(), 0.0);
        assert_eq!(chi2_mix_cdf(-1.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn chi2_mix_single_branch_median() {
        // one live central branch: CDF(median * scale) = 1/2
        for s in [0.5, 1.0, 7.3] {
            let p = GaussianPairParams::from_var_noncent(s, 0.0, 0.0, 0.0).unwrap();
            let f = chi2_mix_cdf(0.454936423119572 * s, &p).unwrap();
            assert_relative_eq!(f, 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn chi2_mix_step_case() {
        let p = GaussianPairParams::from_moments(0.5, 0.25, 0.25, 0.0625).unwrap();
        assert!(p.noncent_re.is_none() && p.noncent_im.is_none());
        let q0 = 0.25 + 0.0625;
        assert_eq!(chi2_mix_cdf(q0 - 1e-9, &p).unwrap(), 0.0);
        assert_eq!(chi2_mix_cdf(q0, &p).unwrap(), 1.0);
    }

    #[test]
    fn chi2_mix_monotone_with_limits() {
        let p = GaussianPairParams::from_var_noncent(2.0, 3.0, 0.5, 1.0).unwrap();
        let mut prev = 0.0;
        let mut x = 0.0;
        while x <= 80.0 {
            let f = chi2_mix_cdf(x, &p).unwrap();
            assert!(f >= prev - 1e-9, "non-monotone at {x}");
            prev = f;
            x += 0.5;
        }
        assert!(prev > 0.999, "far tail {prev}");
        assert_eq!(chi2_mix_cdf(0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn chi2_mix_huge_noncentrality_is_normal_like() {
        // noncentrality ~ 1e4: the branch is essentially (m1 + sigma Z)^2
        let p = GaussianPairParams::from_var_noncent(1e-4, 1.0e4, 2e-4, 0.0).unwrap();
        let mean = p.mixture_mean();
        let f_mid = chi2_mix_cdf(mean, &p).unwrap();
        assert!((f_mid - 0.5).abs() < 0.05, "midpoint CDF {f_mid}");
        assert!(chi2_mix_cdf(mean * 2.0, &p).unwrap() > 0.999999);
        assert!(chi2_mix_cdf(mean * 0.5, &p).unwrap() < 1e-6);
    }

    #[test]
    fn largen_cdf_basics() {
        let c = cfg(64, ChannelKind::Rr, PhaseNoiseModel::UniformScaled { epsilon: 0.2 });
        let cdf = LargeNCdf::new(&c).unwrap();
        assert_eq!(cdf.eval(0.0), 0.0);
        assert_eq!(cdf.eval(-5.0), 0.0);
        let (m, _) = snr_mean_var(&c).unwrap();
        let far = m.mean + 20.0 * m.variance.sqrt();
        assert!(cdf.eval(far) >= 0.999, "far tail {}", cdf.eval(far));
        // monotone over a grid
        let mut prev = 0.0;
        for i in 0..200 {
            let x = far * i as f64 / 199.0;
            let f = cdf.eval(x);
            assert!(f >= prev - 1e-9);
            prev = f;
        }
        // convenience wrapper agrees
        assert_relative_eq!(
            snr_largen_cdf(m.mean, &c).unwrap(),
            cdf.eval(m.mean),
            epsilon = 1e-12
        );
    }

    #[test]
    fn largen_cdf_zero_noise_single_branch() {
        // zero noise leaves one live branch; CDF must still be a proper CDF
        let c = cfg(64, ChannelKind::Rr, PhaseNoiseModel::Zero);
        let cdf = LargeNCdf::new(&c).unwrap();
        let (m, _) = snr_mean_var(&c).unwrap();
        let lo = cdf.eval(m.mean * 0.2);
        let mid = cdf.eval(m.mean);
        let hi = cdf.eval(m.mean * 3.0);
        assert!(lo < 0.01);
        assert!((0.2..0.8).contains(&mid));
        assert!(hi > 0.99);
    }

    #[test]
    fn mixture_table_matches_direct_evaluation() {
        let pair = upsilon_moments(128, &PhaseNoiseModel::uniform_scaled(0.2).unwrap().trig_moments().unwrap());
        let table = build_mixture_table(&pair).unwrap();
        let mean = pair.mixture_mean();
        for i in 1..40 {
            let q = mean * (0.4 + 1.2 * i as f64 / 40.0);
            let direct = chi2_mix_cdf(q, &pair).unwrap();
            let interp = table.eval(q);
            assert!(
                (direct - interp).abs() < 1e-6,
                "q = {q}: table {interp} vs direct {direct}"
            );
        }
    }

    #[test]
    fn gamma_fit_scale_equivariance_property() {
        // gamma_fit(mean*a, var*a^2) keeps the shape and scales the scale
        for a in [0.25, 1.0, 3.0, 117.0] {
            let base = SnrMoments {
                mean: 5.0,
                variance: 7.0,
                af: 7.0 / 25.0,
            };
            let scaled = SnrMoments {
                mean: 5.0 * a,
                variance: 7.0 * a * a,
                af: 7.0 / 25.0,
            };
            let (k0, t0) = gamma_fit(&base).unwrap();
            let (k1, t1) = gamma_fit(&scaled).unwrap();
            assert_relative_eq!(k0, k1, max_relative = 1e-12);
            assert_relative_eq!(t1, t0 * a, max_relative = 1e-12);
        }
    }
}
