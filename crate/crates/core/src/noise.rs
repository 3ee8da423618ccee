//! Phase-noise laws on the reflecting elements and their trigonometric
//! moments.
//!
//! Every supported law has zero mean and is symmetric around zero, so
//! E{sin d} = 0 and E{sin 2d} = 0. The moments (c1, s1, c2, s2) =
//! (E{cos d}, E{sin d}, E{cos^2 d}, E{sin^2 d}) are available in closed
//! form and feed every downstream formula.

use std::f64::consts::PI;

use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::special::bessel_i012_scaled;

/// Distribution of the per-element phase error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseNoiseModel {
    /// No phase noise: d = 0.
    Zero,
    /// d ~ U(-pi, pi): a fully random, uncontrolled phase.
    UniformFull,
    /// d ~ U(-eps*pi, eps*pi) with 0 < eps <= 1 (eps = 1 matches UniformFull).
    UniformScaled { epsilon: f64 },
    /// d ~ von Mises(0, kappa) with kappa > 0.
    VonMises { kappa: f64 },
}

/// Closed-form trigonometric moments of a phase-noise law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMoments {
    /// E{cos d}
    pub c1: f64,
    /// E{sin d} (zero for every supported law)
    pub s1: f64,
    /// E{cos^2 d}
    pub c2: f64,
    /// E{sin^2 d} = 1 - c2
    pub s2: f64,
}

/// sin(pi x) / (pi x), continuous at zero.
fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x == x.trunc() {
        0.0 // exact zeros at the integers, so eps = 1 matches UniformFull bit-for-bit
    } else {
        (PI * x).sin() / (PI * x)
    }
}

impl PhaseNoiseModel {
    /// U(-eps*pi, eps*pi). Rejects eps outside (0, 1]; use `Zero` instead of
    /// eps = 0 to avoid degenerate sinc evaluations.
    pub fn uniform_scaled(epsilon: f64) -> Result<Self> {
        let m = PhaseNoiseModel::UniformScaled { epsilon };
        m.validate()?;
        Ok(m)
    }

    /// von Mises(0, kappa), kappa > 0.
    pub fn von_mises(kappa: f64) -> Result<Self> {
        let m = PhaseNoiseModel::VonMises { kappa };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PhaseNoiseModel::UniformScaled { epsilon } => {
                if !(epsilon > 0.0 && epsilon <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "uniform-scaled epsilon must be in (0, 1], got {epsilon}"
                    )));
                }
            }
            PhaseNoiseModel::VonMises { kappa } => {
                if !(kappa > 0.0) || !kappa.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "von Mises kappa must be positive and finite, got {kappa}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Closed-form (c1, s1, c2, s2). s1 = 0 for every supported law and
    /// c2 + s2 = 1 holds bit-exactly (s2 is computed, c2 as its complement).
    pub fn trig_moments(&self) -> Result<TrigMoments> {
        self.validate()?;
        let (c1, s2) = match *self {
            PhaseNoiseModel::Zero => (1.0, 0.0),
            PhaseNoiseModel::UniformFull => (0.0, 0.5),
            PhaseNoiseModel::UniformScaled { epsilon } => {
                (sinc(epsilon), 0.5 * (1.0 - sinc(2.0 * epsilon)))
            }
            PhaseNoiseModel::VonMises { kappa } => {
                let (i0, i1, _) = bessel_i012_scaled(kappa);
                (i1 / i0, i1 / (kappa * i0))
            }
        };
        Ok(TrigMoments {
            c1,
            s1: 0.0,
            c2: 1.0 - s2,
            s2,
        })
    }

    /// E{sin 2d}: zero for all supported laws (symmetric around zero).
    /// Exposed explicitly because the real/imaginary covariance formulas
    /// consume it independently of (c1, s1, c2, s2).
    pub fn sin_2delta_mean(&self) -> f64 {
        0.0
    }

    /// One draw from the law.
    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PhaseNoiseModel::Zero => 0.0,
            PhaseNoiseModel::UniformFull => rng.random_range(-PI..PI),
            PhaseNoiseModel::UniformScaled { epsilon } => {
                rng.random_range(-epsilon * PI..epsilon * PI)
            }
            PhaseNoiseModel::VonMises { kappa } => draw_von_mises(rng, kappa),
        }
    }

    pub(crate) fn draw_angles<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// Best-Fisher rejection sampler for von Mises(0, kappa); exact for all
/// kappa > 0, no discretization.
fn draw_von_mises<R: Rng + ?Sized>(rng: &mut R, kappa: f64) -> f64 {
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let u3: f64 = rng.random();
            return if u3 < 0.5 { -f.acos() } else { f.acos() };
        }
    }
}
