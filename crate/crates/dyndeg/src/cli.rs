//! Argument parsing and dispatch.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dyndeg_core::kernel::BigRational;
use dyndeg_core::lab::DEFAULT_DEGREE_CAP;
use dyndeg_core::ledger::Preset;
use dyndeg_core::text::{parse_event_script, parse_tau_spec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::{parse_family, parse_map_list, read_text, GridSpec};
use crate::random::random_script;
use crate::report::Report;
use crate::{render, run};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "dyndeg",
    version,
    about = "Degree growth of reflection compositions and Cremona maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Seed for randomized inputs
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

/// A file path, or the text itself with `--inline`.
#[derive(Debug, Args)]
pub struct Source {
    /// Input file
    pub path: Option<PathBuf>,
    /// Input text, instead of a file
    #[arg(long, conflicts_with = "path")]
    pub inline: Option<String>,
}

impl Source {
    fn read(&self) -> Result<Option<String>> {
        match (&self.path, &self.inline) {
            (_, Some(t)) => Ok(Some(t.clone())),
            (Some(p), None) => read_text(p).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn require(&self, what: &str) -> Result<String> {
        self.read()?
            .with_context(|| format!("no {} given: pass a file or --inline", what))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree traces of a reflection composition driven by a successor function
    Reflect {
        /// e.g. "N=2; tau: 1->4, 2->inf"
        #[arg(long, required_unless_present = "tau_file")]
        tau: Option<String>,
        #[arg(long, conflicts_with = "tau")]
        tau_file: Option<PathBuf>,
        #[arg(long, default_value_t = 60)]
        steps: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Degree sequence of the first listed map and a submultiplicativity table
    Compose {
        #[command(flatten)]
        source: Source,
        /// Number of iterates
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u64,
        /// Extra seeded random pairs of degree <= 2 plane maps
        #[arg(long, default_value_t = 0)]
        random_pairs: usize,
    },
    /// Degree of an iterate across a one-parameter family
    Scan {
        #[command(flatten)]
        source: Source,
        /// lo:hi:count with rational endpoints
        #[arg(long, default_value = "-1:1:201", allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long, default_value_t = 2)]
        iterate: usize,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u64,
    },
    /// Signature bookkeeping along a blow-up script
    Ledger {
        #[command(flatten)]
        source: Source,
        /// Generate a seeded script of this many events instead of reading one
        #[arg(long, conflicts_with_all = ["path", "inline"])]
        random: Option<usize>,
        /// Preset for --random: cubic, p4 or custom:h11:h22
        #[arg(long, default_value = "cubic", requires = "random")]
        preset: String,
    },
    /// Pull-back matrix and the derivation of the recursion coefficients
    Identities,
}

/// Validated settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub seed: u64,
    pub steps: usize,
    pub tol: f64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            bail!("tolerance must be a positive number, got {}", self.tol);
        }
        Ok(())
    }

    pub fn tol_rational(&self) -> BigRational {
        BigRational::from_float(self.tol).expect("finite")
    }
}

fn parse_preset(s: &str) -> Result<Preset> {
    match s.split(':').collect::<Vec<_>>().as_slice() {
        ["cubic"] => Ok(Preset::CubicFourfold),
        ["p4"] => Ok(Preset::P4),
        ["custom", a, b] => Ok(Preset::Custom {
            h11: a.parse().context("h11")?,
            h22: b.parse().context("h22")?,
        }),
        _ => bail!("unknown preset '{}': use cubic, p4 or custom:h11:h22", s),
    }
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let mut config = RunConfig {
        format: cli.format,
        seed: cli.seed,
        steps: 0,
        tol: 1e-9,
    };
    Ok(match &cli.command {
        Command::Reflect {
            tau,
            tau_file,
            steps,
            tol,
        } => {
            config.steps = *steps;
            config.tol = *tol;
            config.validate()?;
            let text = match (tau, tau_file) {
                (Some(t), _) => t.clone(),
                (None, Some(p)) => read_text(p)?,
                (None, None) => bail!("no successor function given"),
            };
            let tau = parse_tau_spec(&text)?;
            Report::Reflect(run::reflect(&tau, config.steps, &config.tol_rational())?)
        }
        Command::Compose {
            source,
            steps,
            cap,
            random_pairs,
        } => {
            let maps = parse_map_list(&source.require("map")?)?;
            Report::Compose(run::compose_maps(
                &maps,
                *steps,
                *cap,
                config.seed,
                *random_pairs,
            )?)
        }
        Command::Scan {
            source,
            grid,
            iterate,
            cap,
        } => {
            let fam = parse_family(&source.require("family")?)?;
            Report::Scan(run::scan(&fam, grid, *iterate, *cap)?)
        }
        Command::Ledger {
            source,
            random,
            preset,
        } => {
            let script = match random {
                Some(n) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    random_script(&mut rng, parse_preset(preset)?, *n, 4)
                }
                None => parse_event_script(&source.require("event script")?)?,
            };
            Report::Ledger(run::ledger(&script)?)
        }
        Command::Identities => Report::Identities(run::identities()?),
    })
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => render::text(report),
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => render::csv(report)?,
    })
}

/// 0 on success, 1 when the report carries warnings, 2 on input errors.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli).and_then(|r| Ok((render(&r, cli.format)?, r))) {
        Ok((out, report)) => {
            print!("{}", out);
            if report.warnings().is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
