//! `hyperqnd`: single analyses, exhaustive verification, table emission and
//! Monte Carlo noise studies. Data goes to stdout, diagnostics to stderr.

mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperqnd_core::kerrqnd::HomodyneModel;
use hyperqnd_core::protocols::{
    emit_detection_table, emit_signature_table, hgsa_n_analyze, monte_carlo, verify_complete,
    AnalyzerConfig, DEFAULT_ALPHA, DEFAULT_THETA,
};
use hyperqnd_core::statecore::HyperLabel;
use hyperqnd_core::Error;

#[derive(Parser)]
#[command(
    name = "hyperqnd",
    version,
    about = "Hyperentangled Bell/GHZ state analysis with cross-Kerr parity QNDs"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Number of photons.
    #[arg(long = "n", global = true, env = "HYPERQND_N")]
    n: Option<usize>,
    /// Kerr phase per interaction, radians.
    #[arg(long, global = true, env = "HYPERQND_THETA", default_value_t = DEFAULT_THETA)]
    theta: f64,
    /// Coherent probe amplitude.
    #[arg(long, global = true, env = "HYPERQND_ALPHA", default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Homodyne readout model (montecarlo defaults to gaussian).
    #[arg(long, global = true, env = "HYPERQND_MODEL")]
    model: Option<Model>,
    #[arg(long, global = true, env = "HYPERQND_TRIALS", default_value_t = 10_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, global = true, env = "HYPERQND_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "HYPERQND_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one state given as `P:<sign><bits>;S:<sign><bits>` or Bell aliases.
    Analyze { state: String },
    /// Exhaustively check every basis state for `--n` photons.
    Verify,
    /// Emit the signature and detection tables for `--n` photons.
    Tables {
        /// Which table to emit; csv defaults to the signature table only.
        #[arg(long, value_enum)]
        table: Option<TableKind>,
    },
    /// Sampled misclassification rates under the gaussian readout model.
    Montecarlo,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Ideal,
    Gaussian,
}

impl From<Model> for HomodyneModel {
    fn from(m: Model) -> Self {
        match m {
            Model::Ideal => HomodyneModel::Ideal,
            Model::Gaussian => HomodyneModel::Gaussian,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    All,
    Signature,
    Detection,
}

enum Failure {
    Usage(String),
    Guard(String),
    Runtime(String),
    Incorrect,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            Error::OutOfRange { .. } => Failure::Guard(e.to_string()),
            Error::InvalidState(_) => Failure::Runtime(e.to_string()),
        }
    }
}

impl RunArgs {
    fn config(&self, default_model: HomodyneModel) -> Result<AnalyzerConfig, Failure> {
        for (name, v) in [("theta", self.theta), ("alpha", self.alpha)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Usage(format!(
                    "--{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(AnalyzerConfig {
            theta: self.theta,
            alpha: self.alpha,
            model: self.model.map_or(default_model, Into::into),
            seed: self.seed,
            trials: self.trials,
            ..Default::default()
        })
    }

    fn n_or_default(&self) -> usize {
        self.n.unwrap_or(2)
    }
}

fn feasibility(cfg: &AnalyzerConfig, format: Format) {
    let line = render::feasibility_line(cfg);
    if format == Format::Text {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let args = &cli.run;
    match &cli.command {
        Command::Analyze { state } => {
            let label: HyperLabel = state.parse()?;
            let n = label.n_photons();
            if let Some(want) = args.n {
                if want != n {
                    return Err(Failure::Usage(format!(
                        "state `{state}` has {n} photons but --n is {want}"
                    )));
                }
            }
            let cfg = args.config(HomodyneModel::Ideal)?;
            let (decoded, transcript) = hgsa_n_analyze(n, &label.state(), &cfg)?;
            feasibility(&cfg, args.format);
            print!(
                "{}",
                render::analysis(&label, &decoded, &transcript, args.format)
            );
            Ok(())
        }
        Command::Verify => {
            let n = args.n_or_default();
            let cfg = args.config(HomodyneModel::Ideal)?;
            let report = verify_complete(n, &cfg)?;
            feasibility(&cfg, args.format);
            print!("{}", render::verification(&report, args.format));
            if report.correct == 1usize << (2 * n) {
                Ok(())
            } else {
                Err(Failure::Incorrect)
            }
        }
        Command::Tables { table } => {
            let n = args.n_or_default();
            if !(2..=hyperqnd_core::protocols::MAX_VERIFY_PHOTONS).contains(&n) {
                return Err(Error::OutOfRange {
                    n,
                    min: 2,
                    max: hyperqnd_core::protocols::MAX_VERIFY_PHOTONS,
                }
                .into());
            }
            let kind = table.unwrap_or(if args.format == Format::Csv {
                TableKind::Signature
            } else {
                TableKind::All
            });
            let cfg = args.config(HomodyneModel::Ideal)?;
            feasibility(&cfg, args.format);
            let signature = match kind {
                TableKind::Detection => None,
                _ => Some(emit_signature_table(n)?),
            };
            let detection = match kind {
                TableKind::Signature => None,
                _ => Some(emit_detection_table(n)?),
            };
            print!(
                "{}",
                render::tables(n, signature.as_ref(), detection.as_ref(), args.format)
            );
            Ok(())
        }
        Command::Montecarlo => {
            let n = args.n_or_default();
            let cfg = args.config(HomodyneModel::Gaussian)?;
            if cfg.model != HomodyneModel::Gaussian {
                return Err(Failure::Usage(
                    "montecarlo requires --model gaussian".into(),
                ));
            }
            let report = monte_carlo(n, &cfg)?;
            feasibility(&cfg, args.format);
            print!("{}", render::monte_carlo(&report, args.format));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Incorrect) => {
            eprintln!("error: not every state was identified correctly");
            ExitCode::from(1)
        }
    }
}
