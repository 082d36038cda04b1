use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirichlet_atlas::commands::{self, Format, Outcome, PlotKind};
use dirichlet_atlas::error::CliError;
use dirichlet_atlas::run_config::{parse_window, Overrides, RunConfig};
use dirichlet_core::config::TargetKind;

/// Zeros, real-axis pre-images and strip atlases of Dirichlet series.
#[derive(Parser)]
#[command(name = "dirichlet-atlas", version)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; without it the primary artifact goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `sigma_min,sigma_max,t_min,t_max`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    /// Named target family, replacing the configured target.
    #[arg(long, global = true)]
    target: Option<String>,
    /// Use every n-th zero as a seed for plotted curve families.
    #[arg(long, global = true)]
    seed_decimation: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Abscissa estimates of the configured series.
    Abscissa {
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Value, derivative and error estimate at `s = sigma + i t`.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Zeros of the target (or its derivative) in the window.
    Zeros {
        #[arg(long)]
        derivative: bool,
    },
    /// Lift a path from the seed: `segment:a,b,c,d`, `ray:angle,r0,r1`,
    /// `circle:r[,theta0,sweep]` or `real:x0,x1,anchor`.
    Trace {
        #[arg(long, allow_hyphen_values = true)]
        path: String,
        /// `re,im` of the seed point.
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
    },
    /// Strip atlas with rule checks and unit-disc components.
    Atlas,
    /// Fundamental domains of one complete strip.
    Domains {
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Symmetric-pair probe at `sigma + i t` and `1 - sigma + i t`.
    Probe {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Bohr basis and the lifted zeros.
    Bohr {
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
    /// SVG figure with its backing CSV.
    Plot {
        #[arg(value_enum)]
        what: PlotKind,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.3)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 14.134725141734695)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn run(cli: Cli) -> Result<Option<Outcome>, CliError> {
    let overrides = Overrides {
        target: cli.target.as_deref().map(|t| t.parse::<TargetKind>()).transpose()?,
        window: cli.window.as_deref().map(parse_window).transpose()?,
        out: cli.out.clone(),
        seed_decimation: cli.seed_decimation,
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    let f = cli.format;
    let outcome = match cli.command {
        Command::Abscissa { n_max } => commands::abscissa(&cfg, n_max, f)?,
        Command::Eval { sigma, t } => commands::eval(&cfg, sigma, t, f)?,
        Command::Zeros { derivative } => commands::zeros(&cfg, derivative, f)?,
        Command::Trace { path, seed } => commands::trace(&cfg, &path, &seed, f)?,
        Command::Atlas => commands::atlas(&cfg, f)?,
        Command::Domains { k } => commands::domains(&cfg, k, f)?,
        Command::Probe { sigma, t, samples } => commands::probe(&cfg, sigma, t, samples, f)?,
        Command::Bohr { n_max } => commands::bohr(&cfg, n_max, f)?,
        Command::Plot { what, k, sigma, t, samples } => {
            if f == Format::Csv {
                return Err(CliError::Validation("plot emits svg with its csv data; drop --format csv".into()));
            }
            commands::plot(&cfg, what, k, sigma, t, samples)?
        }
    };
    if let Some(note) = &outcome.note {
        eprint!("{note}");
    }
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for a in std::iter::once(&outcome.primary).chain(&outcome.extra) {
                std::fs::write(dir.join(&a.name), &a.contents)?;
            }
            Ok(None)
        }
        None => Ok(Some(outcome)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Some(outcome)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.primary.contents.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
