//! Statistics of the receive SNR on a link assisted by a large passive
//! reflecting surface whose element phases carry random errors.
//!
//! The crate provides three consistent views of the same random quantity:
//!
//! * exact Monte Carlo over drawn channel matrices ([`samplers`]),
//! * cheaper equivalent-in-distribution and large-surface product samplers
//!   built from gamma eigenvalue fits and chi-square mixtures,
//! * closed-form mean/variance/amount-of-fading, growth laws in the surface
//!   size, gamma fits and analytic CDFs ([`analytics`]).
//!
//! Everything downstream of a `(master_seed, stream_index)` pair is
//! bit-reproducible under any parallel schedule.

pub mod analytics;
pub mod channel;
pub mod error;
pub mod noise;
pub mod rng;
pub mod samplers;
pub mod special;
pub mod spectra;
pub mod stats;

pub use analytics::{
    amount_of_fading, asymptotic_moments, chi2_mix_cdf, gamma_fit, psi_moments, re_im_covariance,
    scaling_coefficients, snr_largen_cdf, snr_mean_var, upsilon_moments, GaussianPairParams,
    LargeNCdf, MomentTerms, ScalingCoefficients, SnrMoments, SumKind,
};
pub use channel::{
    array_response, draw_rayleigh_pair, los_channel, ArrayGeometry, ChannelKind, ComplexMat,
    SystemConfig,
};
pub use error::{Error, Result};
pub use noise::{PhaseNoiseModel, TrigMoments};
pub use rng::{sample_complex_gaussian, sample_phase_noise, RngStream};
pub use samplers::{
    run_monte_carlo, sample_chi2_mixture, snr_eid_sample, snr_exact_sample, snr_largen_sample, snr_lr_exact,
    snr_rr_exact, Route, SampleSet, LARGE_N_MIN,
};
pub use spectra::{lambda_plus_gamma, wishart_decompose, EigenSummary, Side, SpectralDecomp};
pub use stats::{ecdf, ks_against_cdf, ks_two_sample, KsReport};
