use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use lieseq_cli::{Format, Outcome};

/// Exact spectral sequences for free isometric Lie algebra actions.
#[derive(Parser)]
#[command(name = "lieseq", version)]
struct Cli {
    /// Compute on a single thread.
    #[arg(long, global = true, env = "LIESEQ_SERIAL", value_parser = clap::builder::BoolishValueParser::new())]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra, the basic model and d∘d = 0.
    Validate { path: PathBuf },
    /// Print the pages of the spectral sequence.
    Spectral {
        path: PathBuf,
        /// Show pages up to E_R only.
        #[arg(long, value_name = "R")]
        pages: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Lie algebra cohomology and abelianization.
    Lie {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Splitting (codimension 1) or Wang sequence (codimension 2, 3).
    Wang {
        path: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        codim: u8,
        /// Require H^1(total) = 0 and H^1(g) = 0 (codimension 3).
        #[arg(long)]
        assume_h1_vanishing: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    if cli.serial {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let outcome: Outcome = match cli.command {
        Command::Validate { path } => lieseq_cli::validate(&path),
        Command::Spectral { path, pages, format } => lieseq_cli::spectral(&path, pages, format),
        Command::Lie { path, format } => lieseq_cli::lie(&path, format),
        Command::Wang {
            path,
            codim,
            assume_h1_vanishing,
            format,
        } => lieseq_cli::wang(&path, codim as usize, assume_h1_vanishing, format),
    };
    std::io::stdout().write_all(outcome.stdout.as_bytes())?;
    std::io::stderr().write_all(outcome.stderr.as_bytes())?;
    Ok(ExitCode::from(outcome.code as u8))
}
