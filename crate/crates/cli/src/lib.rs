//! Library side of the command-line tool; the binary is a thin dispatcher
//! so integration tests can drive everything in-process.

pub mod args;
pub mod checks;
pub mod commands;
pub mod svg;

use std::fmt;

/// Errors mapped onto process exit codes: usage 2, validation failure 1,
/// I/O 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Io(std::io::Error),
    Compute(rissnr::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<rissnr::Error> for CliError {
    fn from(e: rissnr::Error) -> Self {
        CliError::Compute(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 1,
            CliError::Io(_) => 3,
            CliError::Compute(e) => match e {
                rissnr::Error::InvalidParameter(_)
                | rissnr::Error::ConfigMismatch { .. }
                | rissnr::Error::Shape(_)
                | rissnr::Error::UnsupportedRegime(_)
                | rissnr::Error::EmptyInput
                | rissnr::Error::NumericDomain(_) => 2,
                rissnr::Error::AccuracyFailure { .. } | rissnr::Error::DegenerateFit => 1,
            },
        }
    }
}

/// Dispatch a parsed command line.
pub fn run(cli: args::Cli) -> Result<(), CliError> {
    use args::Command;
    match cli.command {
        Command::Moments(noise) => commands::moments(&noise),
        Command::Analytic(config) => commands::analytic(&config),
        Command::Simulate {
            config,
            route,
            samples,
            seed,
            out,
        } => commands::simulate(&config, route, samples, seed, out.as_deref()),
        Command::Fig1 {
            n_list,
            eps_list,
            nt,
            nr,
            gamma0,
            samples,
            seed,
            out,
            svg,
        } => {
            let spec = commands::ExperimentSpec {
                n_values: n_list,
                eps_values: eps_list,
                n_t: nt,
                n_r: nr,
                gamma0,
                n_samples: samples,
                master_seed: seed,
                output_path: out,
            };
            commands::fig1(&spec, svg.as_deref())
        }
        Command::Fig2 {
            config,
            samples,
            seed,
            grid,
            out,
            svg,
        } => commands::fig2(&config, samples, seed, grid, out.as_deref(), svg.as_deref()),
        Command::Validate { seed } => commands::validate(seed),
    }
}
