//! Deterministic, stream-indexed random sampling.
//!
//! Every Monte Carlo realization gets its own counter-derived stream, so
//! results are bit-identical no matter how samples are scheduled across
//! threads.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::noise::PhaseNoiseModel;

/// A value-type handle on one member of a family of independent random
/// streams. Identical (master_seed, stream_index) pairs replay the same
/// sequence regardless of execution order or parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Instantiate the generator: ChaCha keyed by the master seed with the
    /// stream index as its counter-based stream id.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// One draw of a standard complex Gaussian: unit total variance, i.i.d.
/// real and imaginary parts with variance 1/2 each.
pub(crate) fn draw_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn fill_complex_gaussian<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DMatrix<Complex64> {
    // column-major fill order is part of the determinism contract
    DMatrix::from_fn(rows, cols, |_, _| draw_complex_gaussian(rng))
}

/// rows x cols matrix of i.i.d. standard complex Gaussians.
pub fn sample_complex_gaussian(
    rows: usize,
    cols: usize,
    stream: RngStream,
) -> Result<DMatrix<Complex64>> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(
            "matrix dimensions must be at least 1".into(),
        ));
    }
    Ok(fill_complex_gaussian(&mut stream.rng(), rows, cols))
}

/// n i.i.d. phase-noise angles from the given law.
pub fn sample_phase_noise(
    model: &PhaseNoiseModel,
    n: usize,
    stream: RngStream,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one angle".into()));
    }
    model.validate()?;
    Ok(model.draw_angles(&mut stream.rng(), n))
}
