//! Command-line front end.
//!
//! Exit status: 0 on success, 1 for usage and configuration errors, 2 when the
//! numerics fail (instability, lost precision, no admissible rate).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{rows_to_csv, run_jump, run_jump_table, run_smooth_table, smooth_to_csv, ExperimentConfig};
use crate::error::{Error, Result};
use crate::richardson::Ordering;
use crate::schemes::SchemeKind;
use crate::similarity::{
    erf_profile, frame_difference, samples_to_csv, scaled_frame_difference, scaled_ratio_quadrature, stretch,
    tabulate_profile, SimilarityProfile,
};
use crate::grid::JumpIC;

#[derive(Debug, Parser)]
#[command(name = "jumprate", version, about = "Richardson rate estimation for an advected jump")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rates in all three orderings for each scheme and ratio.
    JumpTable(SweepArgs),
    /// Observed orders on an advected sine wave.
    SmoothVerify(SweepArgs),
    /// Similarity-profile data.
    Similarity {
        #[command(subcommand)]
        command: SimilarityCommand,
    },
    /// A single jump integration; prints the snapshot at the final time.
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scheme name, or a comma separated list.
    #[arg(long)]
    scheme: Option<String>,
    /// Refinement ratio (`p/q`), or a comma separated list.
    #[arg(long)]
    ratio: Option<String>,
    #[arg(long)]
    base_n: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Directory for CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: SchemeKind,
    /// Number of grid points before refinement.
    #[arg(long)]
    n: usize,
    /// `none` runs on `n` points; a ratio `r` runs on the grid refined once by `r`.
    #[arg(long, default_value = "none")]
    ratio_step: String,
    #[arg(long)]
    lambda: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Frame {
    Scaled,
    Physical,
}

#[derive(Debug, Subcommand)]
enum SimilarityCommand {
    /// Samples `S(xi)`.
    Profile {
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, allow_hyphen_values = true)]
        xi_min: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        xi_max: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
    },
    /// Samples the difference of the profiles at two spacings.
    Diff {
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long)]
        h_a: f64,
        #[arg(long)]
        h_b: f64,
        #[arg(long, value_enum, default_value_t = Frame::Scaled)]
        frame: Frame,
        #[arg(long, allow_hyphen_values = true, default_value_t = -10.0)]
        min: f64,
        #[arg(long, default_value_t = 10.0)]
        max: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
    },
    /// Ratio of scaled-frame L1 integrals for an ordering of a uniform triple.
    Ratio {
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long)]
        ratio: String,
        #[arg(long, default_value = "successive")]
        ordering: Ordering,
    },
}

fn profile_for_order(order: u32) -> Result<SimilarityProfile> {
    match order {
        1 => erf_profile(1.0, 1.0, JumpIC::default()),
        2 => Ok(SimilarityProfile::godunov2()),
        _ => Err(Error::Config(format!("no closed-form profile for order {order}"))),
    }
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::default();
    if let Some(p) = path {
        let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
        c.apply_text(&text)?;
    }
    Ok(c)
}

fn sweep_config(args: &SweepArgs) -> Result<ExperimentConfig> {
    let mut c = load_config(args.config.as_deref())?;
    if let Some(s) = &args.scheme {
        c.set("scheme", s)?;
    }
    if let Some(r) = &args.ratio {
        c.set("ratios", r)?;
    }
    if let Some(n) = args.base_n {
        c.base_n_points = n;
    }
    if let Some(l) = args.lambda {
        c.lambda = l;
    }
    if let Some(o) = &args.out {
        c.out_dir = Some(o.clone());
    }
    c.validate()?;
    Ok(c)
}

fn write_out(dir: Option<&Path>, name: &str, text: &str) -> Result<()> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::JumpTable(args) => {
            let config = sweep_config(&args)?;
            let table = run_jump_table(&config)?;
            let csv = rows_to_csv(table.ok_rows());
            write_out(config.out_dir.as_deref(), "jump_table.csv", &csv)?;
            write!(out, "{csv}\n{}", table.to_aligned())?;
            for row in &table.rows {
                if let Err((s, r, e)) = row {
                    writeln!(err, "{s} r={r}: {e}")?;
                }
            }
            if let Some(e) = table.first_error() {
                return Err(e.clone());
            }
        }
        Command::SmoothVerify(args) => {
            let mut config = sweep_config(&args)?;
            if args.scheme.is_none() && args.config.is_none() {
                config.schemes = SchemeKind::ALL.to_vec();
            }
            let csv = smooth_to_csv(&run_smooth_table(&config)?);
            write_out(config.out_dir.as_deref(), "smooth_orders.csv", &csv)?;
            write!(out, "{csv}")?;
        }
        Command::Similarity { command } => match command {
            SimilarityCommand::Profile {
                order,
                xi_min,
                xi_max,
                samples,
            } => {
                let p = profile_for_order(order)?;
                let rows = tabulate_profile(&p, (xi_min.unwrap_or(-xi_max), xi_max), samples)?;
                write!(out, "{}", samples_to_csv("xi,value", &rows))?;
            }
            SimilarityCommand::Diff {
                order,
                h_a,
                h_b,
                frame,
                min,
                max,
                samples,
            } => {
                let p = profile_for_order(order)?;
                if !(h_a > 0.0 && h_b > 0.0) {
                    return Err(Error::Config("spacings must be positive".into()));
                }
                let csv = match frame {
                    Frame::Scaled => samples_to_csv("chi,value", &scaled_frame_difference(&p, h_a, h_b, (min, max), samples)?),
                    Frame::Physical => samples_to_csv("z,value", &frame_difference(&p, h_a, h_b, (min, max), samples)?),
                };
                write!(out, "{csv}")?;
            }
            SimilarityCommand::Ratio { order, ratio, ordering } => {
                let p = profile_for_order(order)?;
                let r = super::ratio_f64(super::parse_ratio(&ratio)?);
                let (ea, eb, ec) = ordering.exponents();
                let h = |e: i32| r.powi(e);
                let pair = |x: f64, y: f64| stretch(x.max(y), x.min(y), p.order_p);
                let q = scaled_ratio_quadrature(&p, pair(h(ea), h(eb)), pair(h(eb), h(ec)))?;
                writeln!(out, "ratio,numerator,denominator,error_bound")?;
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e}",
                    q.ratio, q.numerator, q.denominator, q.error_bound
                )?;
            }
        },
        Command::Run(args) => {
            let mut config = load_config(args.config.as_deref())?;
            if let Some(l) = args.lambda {
                config.lambda = l;
            }
            if args.n < 2 {
                return Err(Error::TooFewPoints(args.n));
            }
            let base = (args.n - 1) as u64;
            let intervals = match args.ratio_step.as_str() {
                "none" => base,
                s => super::refined_intervals(base, super::parse_ratio(s)?, 1)?,
            };
            let snap = run_jump(&config, args.scheme, intervals as usize)?;
            match &args.out {
                Some(path) => std::fs::write(path, snap.to_csv())?,
                None => write!(out, "{}", snap.to_csv())?,
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `argv` (including the program name) and returns the exit status.
pub fn cli_main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    cli_main_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
