//! Channel matrices: Rayleigh fading on both hops, or a deterministic
//! rank-one line-of-sight hop into Rayleigh fading.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::noise::PhaseNoiseModel;
use crate::rng::{fill_complex_gaussian, RngStream};

pub type ComplexMat = DMatrix<Complex64>;

/// Fading assumption on the transmitter-to-surface hop (the surface-to-
/// receiver hop is always Rayleigh).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// Rayleigh fading on both hops.
    Rr,
    /// Deterministic line-of-sight on the first hop, Rayleigh on the second.
    Lr,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelKind::Rr => write!(f, "rr"),
            ChannelKind::Lr => write!(f, "lr"),
        }
    }
}

/// Full experiment parameterization: surface size, antenna counts, SNR
/// scale factor, channel kind and phase-noise law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Number of reflecting elements.
    pub n: usize,
    /// Transmit antennas.
    pub n_t: usize,
    /// Receive antennas.
    pub n_r: usize,
    /// Linear SNR scale factor (path loss, bandwidth, noise figure, ...).
    pub gamma0: f64,
    pub channel: ChannelKind,
    pub noise: PhaseNoiseModel,
}

impl SystemConfig {
    pub fn new(
        n: usize,
        n_t: usize,
        n_r: usize,
        gamma0: f64,
        channel: ChannelKind,
        noise: PhaseNoiseModel,
    ) -> Result<Self> {
        if n_t == 0 || n_r == 0 {
            return Err(Error::InvalidParameter(
                "antenna counts must be at least 1".into(),
            ));
        }
        if n < n_t.max(n_r) {
            return Err(Error::InvalidParameter(format!(
                "need n >= max(n_t, n_r); got n = {n}, n_t = {n_t}, n_r = {n_r}"
            )));
        }
        if !(gamma0 > 0.0) || !gamma0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma0 must be positive and finite, got {gamma0}"
            )));
        }
        noise.validate()?;
        Ok(Self {
            n,
            n_t,
            n_r,
            gamma0,
            channel,
            noise,
        })
    }
}

/// Uniform linear array with half-wavelength spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    /// Element spacing in wavelengths; fixed at one half.
    pub element_spacing_wavelengths: f64,
    /// Steering angle in radians.
    pub steering_angle: f64,
}

impl ArrayGeometry {
    pub fn new(steering_angle: f64) -> Self {
        Self {
            element_spacing_wavelengths: 0.5,
            steering_angle,
        }
    }
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self::new(0.0)
    }
}

/// Unit-norm array response of a uniform linear array: entry t is
/// (1/sqrt(size)) exp(-j 2 pi f(t)) with f(t) = t * spacing * sin(angle).
pub fn array_response(size: usize, geom: ArrayGeometry) -> DVector<Complex64> {
    assert!(size >= 1, "array size must be at least 1");
    let scale = 1.0 / (size as f64).sqrt();
    DVector::from_fn(size, |t, _| {
        let phase =
            -2.0 * PI * (t as f64) * geom.element_spacing_wavelengths * geom.steering_angle.sin();
        Complex64::from_polar(scale, phase)
    })
}

/// Draw the Rayleigh pair (G, H): G is n_r x n on the surface-receiver hop,
/// H is n x n_t on the transmitter-surface hop, both i.i.d. standard complex
/// Gaussian. G is drawn first, then H.
pub fn draw_rayleigh_pair(cfg: &SystemConfig, stream: RngStream) -> Result<(ComplexMat, ComplexMat)> {
    if cfg.channel != ChannelKind::Rr {
        return Err(Error::ConfigMismatch {
            expected: ChannelKind::Rr,
            actual: cfg.channel,
        });
    }
    let mut rng = stream.rng();
    let g = fill_complex_gaussian(&mut rng, cfg.n_r, cfg.n);
    let h = fill_complex_gaussian(&mut rng, cfg.n, cfg.n_t);
    Ok((g, h))
}

/// Deterministic rank-one line-of-sight channel
/// H = sqrt(n_t * n_r) * a_ris * a_t^H  (n x n_t).
pub fn los_channel(
    cfg: &SystemConfig,
    geom_t: ArrayGeometry,
    geom_ris: ArrayGeometry,
) -> Result<ComplexMat> {
    if cfg.channel != ChannelKind::Lr {
        return Err(Error::ConfigMismatch {
            expected: ChannelKind::Lr,
            actual: cfg.channel,
        });
    }
    let a_t = array_response(cfg.n_t, geom_t);
    let a_ris = array_response(cfg.n, geom_ris);
    let scale = Complex64::new(((cfg.n_t * cfg.n_r) as f64).sqrt(), 0.0);
    Ok(&a_ris * a_t.adjoint() * scale)
}
