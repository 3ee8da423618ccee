//! Subcommand implementations: text reports and CSV/SVG artifacts.

use std::io::Write;
use std::path::{Path, PathBuf};

use rissnr::{
    amount_of_fading, asymptotic_moments, gamma_fit, run_monte_carlo, scaling_coefficients,
    snr_mean_var, special::lower_reg_gamma, ChannelKind, LargeNCdf, Route, SystemConfig,
    LARGE_N_MIN,
};

use crate::args::{noise_for_eps, ConfigArgs, NoiseArgs, RouteArg};
use crate::svg::{Chart, Series, PALETTE};
use crate::CliError;

fn write_output(out: Option<&Path>, content: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(CliError::Io),
        None => std::io::stdout().write_all(content).map_err(CliError::Io),
    }
}

pub fn moments(args: &NoiseArgs) -> Result<(), CliError> {
    let model = args.model()?;
    let t = model.trig_moments()?;
    println!("model      = {model:?}");
    println!("c1         = {}", t.c1);
    println!("s1         = {}", t.s1);
    println!("c2         = {}", t.c2);
    println!("s2         = {}", t.s2);
    println!("E[sin 2d]  = {}", model.sin_2delta_mean());
    Ok(())
}

pub fn analytic(args: &ConfigArgs) -> Result<(), CliError> {
    let cfg = args.config()?;
    let (m, terms) = snr_mean_var(&cfg)?;
    let af = amount_of_fading(&m)?;
    println!("mean       = {}", m.mean);
    println!("variance   = {}", m.variance);
    println!("af         = {af}");
    println!("mean_db    = {}", 10.0 * m.mean.log10());
    match gamma_fit(&m) {
        Ok((shape, scale)) => {
            println!("gamma_fit  = shape {shape}, scale {scale}");
        }
        Err(_) => println!("gamma_fit  = degenerate (zero variance)"),
    }
    println!(
        "factors    = m_g {} m_h {} t_g {} t_h {} mbar {} tbar {}",
        terms.m_g, terms.m_h, terms.t_g, terms.t_h, terms.mbar, terms.tbar
    );
    let o = scaling_coefficients(&cfg)?;
    println!(
        "scaling    = o_e0 {} o_e1 {} o_v0 {} o_v1 {} zeta {}",
        o.o_e0, o.o_e1, o.o_v0, o.o_v1, o.zeta
    );
    let a = asymptotic_moments(&cfg, cfg.n)?;
    println!("asymptotic = mean {} variance {} af {}", a.mean, a.variance, a.af);
    Ok(())
}

pub fn simulate(
    args: &ConfigArgs,
    route: RouteArg,
    samples: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = args.config()?;
    let route: Route = route.into();
    if route == Route::LargeN && cfg.n < LARGE_N_MIN {
        eprintln!(
            "warning: n = {} is below the large-surface regime (n >= {LARGE_N_MIN}); \
             the construction is asymptotic",
            cfg.n
        );
    }
    let set = run_monte_carlo(&cfg, route, samples, seed)?;
    let mut buf = Vec::with_capacity(samples * 16);
    set.write_csv(&mut buf).map_err(CliError::Io)?;
    write_output(out, &buf)
}

/// Experiment parameterization for the figure sweeps.
pub struct ExperimentSpec {
    pub n_values: Vec<usize>,
    pub eps_values: Vec<f64>,
    pub n_t: usize,
    pub n_r: usize,
    pub gamma0: f64,
    pub n_samples: usize,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_values.is_empty() {
            return Err(CliError::Usage("need at least one surface size".into()));
        }
        if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::Usage(
                "surface sizes must be strictly increasing".into(),
            ));
        }
        if self.n_samples < 100 {
            return Err(CliError::Usage(
                "statistical routes need at least 100 samples".into(),
            ));
        }
        Ok(())
    }
}

/// Amount-of-fading sweep: Monte Carlo (exact route), closed form, and
/// leading-order scaling, one CSV row per (size, channel, spread).
pub fn fig1(spec: &ExperimentSpec, svg: Option<&Path>) -> Result<(), CliError> {
    spec.validate()?;
    let mut csv = String::from("N,channel,epsilon,af_mc,af_analytic,af_scaling\n");
    let mut chart_series: Vec<Series> = Vec::new();
    for channel in [ChannelKind::Rr, ChannelKind::Lr] {
        for (ei, &eps) in spec.eps_values.iter().enumerate() {
            let noise = noise_for_eps(eps)?;
            let mut mc_pts = Vec::new();
            let mut an_pts = Vec::new();
            for &n in &spec.n_values {
                let cfg =
                    SystemConfig::new(n, spec.n_t, spec.n_r, spec.gamma0, channel, noise)?;
                let set = run_monte_carlo(&cfg, Route::Exact, spec.n_samples, spec.master_seed)?;
                let af_mc = set.af();
                let (m, _) = snr_mean_var(&cfg)?;
                let af_an = amount_of_fading(&m)?;
                let af_sc = asymptotic_moments(&cfg, n)?.af;
                csv.push_str(&format!("{n},{channel},{eps},{af_mc},{af_an},{af_sc}\n"));
                mc_pts.push((n as f64, af_mc));
                an_pts.push((n as f64, af_an));
            }
            let color = PALETTE[(ei + if channel == ChannelKind::Lr { 4 } else { 0 }) % 8];
            chart_series.push(Series {
                label: format!("{channel} eps={eps} analytic"),
                points: an_pts,
                color,
                markers: false,
            });
            chart_series.push(Series {
                label: format!("{channel} eps={eps} mc"),
                points: mc_pts,
                color,
                markers: true,
            });
        }
    }
    write_output(spec.output_path.as_deref(), csv.as_bytes())?;
    if let Some(path) = svg {
        let chart = Chart {
            title: "Amount of fading vs surface size".into(),
            x_label: "N (elements)".into(),
            y_label: "AF".into(),
            log_x: true,
            log_y: true,
            series: chart_series,
        };
        std::fs::write(path, chart.render()).map_err(CliError::Io)?;
    }
    Ok(())
}

/// SNR distribution at one size: exact-route empirical CDF, the analytic
/// CDF of the large-surface product form, and the moment-matched gamma CDF
/// on a common grid up to the empirical 99.9th percentile.
pub fn fig2(
    args: &ConfigArgs,
    samples: usize,
    seed: u64,
    grid: usize,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Result<(), CliError> {
    if grid < 200 {
        return Err(CliError::Usage("need a grid of at least 200 points".into()));
    }
    if samples < 100 {
        return Err(CliError::Usage(
            "statistical routes need at least 100 samples".into(),
        ));
    }
    let cfg = args.config()?;
    let set = run_monte_carlo(&cfg, Route::Exact, samples, seed)?;
    let mut sorted = set.values.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let p999 = sorted[((sorted.len() as f64 * 0.999) as usize).min(sorted.len() - 1)];

    let largen = LargeNCdf::new(&cfg)?;
    let (m, _) = snr_mean_var(&cfg)?;
    let (shape, scale) = gamma_fit(&m)?;

    let mut csv = String::from("x,cdf_exact_ecdf,cdf_largen,cdf_gamma\n");
    let mut s_e = Vec::with_capacity(grid);
    let mut s_l = Vec::with_capacity(grid);
    let mut s_g = Vec::with_capacity(grid);
    for i in 0..grid {
        let x = p999 * i as f64 / (grid - 1) as f64;
        let fe = rissnr::ecdf(&sorted, x);
        let fl = largen.eval(x);
        let fg = lower_reg_gamma(shape, x / scale);
        csv.push_str(&format!("{x},{fe},{fl},{fg}\n"));
        s_e.push((x, fe));
        s_l.push((x, fl));
        s_g.push((x, fg));
    }
    write_output(out, csv.as_bytes())?;
    if let Some(path) = svg {
        let chart = Chart {
            title: format!("SNR distribution (n = {})", cfg.n),
            x_label: "SNR (linear)".into(),
            y_label: "CDF".into(),
            log_x: false,
            log_y: false,
            series: vec![
                Series {
                    label: "exact route (empirical)".into(),
                    points: s_e,
                    color: PALETTE[0],
                    markers: false,
                },
                Series {
                    label: "large-surface analytic".into(),
                    points: s_l,
                    color: PALETTE[1],
                    markers: false,
                },
                Series {
                    label: "gamma fit".into(),
                    points: s_g,
                    color: PALETTE[2],
                    markers: false,
                },
            ],
        };
        std::fs::write(path, chart.render()).map_err(CliError::Io)?;
    }
    Ok(())
}

/// Run the validation suite and print one line per check.
pub fn validate(seed: u64) -> Result<(), CliError> {
    let results = crate::checks::run_all(seed);
    let mut failed = 0usize;
    for r in &results {
        let tag = match r.passed {
            Some(true) => "PASS",
            Some(false) => {
                failed += 1;
                "FAIL"
            }
            None => "INFO",
        };
        println!("{tag}  {:<58} {}", r.name, r.detail);
    }
    let gated = results.iter().filter(|r| r.passed.is_some()).count();
    println!("---");
    println!("{} checks, {failed} failed", gated);
    if failed > 0 {
        return Err(CliError::Validation(format!("{failed} checks failed")));
    }
    Ok(())
}
