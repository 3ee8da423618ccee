//! Command-line surface: one flag per configuration field.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rissnr::{ChannelKind, PhaseNoiseModel, Route, SystemConfig};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "rissnr",
    version,
    about = "SNR statistics of links assisted by a phase-noisy reflecting surface"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the trigonometric moments of a phase-noise law
    Moments(NoiseArgs),
    /// Closed-form SNR mean, variance, amount of fading, gamma fit and
    /// scaling coefficients for one configuration
    Analytic(ConfigArgs),
    /// Draw Monte Carlo SNR samples and write them as CSV
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Sampling route
        #[arg(long, value_enum, default_value_t = RouteArg::Exact)]
        route: RouteArg,
        /// Number of samples
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Master seed; sample i uses stream index i
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amount-of-fading sweep over surface sizes: Monte Carlo vs closed
    /// form vs leading-order scaling (CSV, optional SVG chart)
    Fig1 {
        /// Surface sizes, comma separated, strictly increasing
        #[arg(long, value_delimiter = ',', default_values_t = vec![16usize, 32, 64, 128, 256, 512])]
        n_list: Vec<usize>,
        /// Phase-noise spread values (0 means no noise, 1 the full circle)
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.2, 0.5, 1.0])]
        eps_list: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        nt: usize,
        #[arg(long, default_value_t = 4)]
        nr: usize,
        #[arg(long, default_value_t = 1.0)]
        gamma0: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render a log-log AF chart
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// SNR distribution at one surface size: exact-route empirical CDF,
    /// analytic large-surface CDF, and the gamma approximation (CSV,
    /// optional SVG chart)
    Fig2 {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of grid points
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the statistical validation suite and report pass/fail per check
    Validate {
        #[arg(long, default_value_t = 20_240_915)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct NoiseArgs {
    /// Phase-noise law
    #[arg(long, value_enum, default_value_t = NoiseKind::Zero)]
    pub noise: NoiseKind,
    /// Spread of the uniform-scaled law, in (0, 1]
    #[arg(long)]
    pub eps: Option<f64>,
    /// Concentration of the von Mises law, positive
    #[arg(long)]
    pub kappa: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Channel kind on the transmitter-surface hop
    #[arg(long, value_enum, default_value_t = ChannelArg::Rr)]
    pub channel: ChannelArg,
    /// Number of reflecting elements
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// Transmit antennas
    #[arg(long, default_value_t = 4)]
    pub nt: usize,
    /// Receive antennas
    #[arg(long, default_value_t = 4)]
    pub nr: usize,
    /// Linear SNR scale factor
    #[arg(long, default_value_t = 1.0)]
    pub gamma0: f64,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    Zero,
    /// Uniform over the full circle
    Uniform,
    /// Uniform over (-eps*pi, eps*pi); requires --eps
    UniformScaled,
    /// von Mises with concentration --kappa
    VonMises,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelArg {
    Rr,
    Lr,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteArg {
    Exact,
    Eid,
    #[value(name = "large-n", alias = "large_n")]
    LargeN,
}

impl NoiseArgs {
    pub fn model(&self) -> Result<PhaseNoiseModel, CliError> {
        match self.noise {
            NoiseKind::Zero => Ok(PhaseNoiseModel::Zero),
            NoiseKind::Uniform => Ok(PhaseNoiseModel::UniformFull),
            NoiseKind::UniformScaled => {
                let eps = self.eps.ok_or_else(|| {
                    CliError::Usage("--noise uniform-scaled requires --eps".into())
                })?;
                Ok(PhaseNoiseModel::uniform_scaled(eps)?)
            }
            NoiseKind::VonMises => {
                let kappa = self
                    .kappa
                    .ok_or_else(|| CliError::Usage("--noise von-mises requires --kappa".into()))?;
                Ok(PhaseNoiseModel::von_mises(kappa)?)
            }
        }
    }
}

impl ConfigArgs {
    pub fn config(&self) -> Result<SystemConfig, CliError> {
        let channel = match self.channel {
            ChannelArg::Rr => ChannelKind::Rr,
            ChannelArg::Lr => ChannelKind::Lr,
        };
        Ok(SystemConfig::new(
            self.n,
            self.nt,
            self.nr,
            self.gamma0,
            channel,
            self.noise.model()?,
        )?)
    }
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Exact => Route::Exact,
            RouteArg::Eid => Route::Eid,
            RouteArg::LargeN => Route::LargeN,
        }
    }
}

/// Phase-noise model for a spread value on the figure sweeps: 0 is the
/// noise-free law, 1 the full circle.
pub fn noise_for_eps(eps: f64) -> Result<PhaseNoiseModel, CliError> {
    if eps == 0.0 {
        Ok(PhaseNoiseModel::Zero)
    } else if eps == 1.0 {
        Ok(PhaseNoiseModel::UniformFull)
    } else {
        Ok(PhaseNoiseModel::uniform_scaled(eps)?)
    }
}
