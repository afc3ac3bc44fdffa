//! Batch command-line front end for the fetal color-Doppler pipeline:
//! segment frames into ROIs, build feature tables, train and persist 1-NN
//! models, classify directories into reports, evaluate against truth labels
//! and emit synthetic corpora.
//!
//! Exit codes are 0 on success, 2 on IO failures and 3 on data or usage
//! errors. Failures print one `ERROR:<kind>:<detail>` line on standard error.

pub mod commands;
pub mod config;
pub mod error;
pub mod files;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

pub use commands::{
    cmd_classify, cmd_evaluate, cmd_extract, cmd_featurize, cmd_synth, cmd_train, ClassifyArgs,
    EvaluateArgs, ExtractArgs, FeaturizeArgs, RenderMode, SynthArgs, TrainArgs,
};
pub use config::{CommonArgs, RunConfig};
pub use error::{CliError, EXIT_DATA, EXIT_IO, EXIT_OK};

#[derive(Debug, Parser)]
#[command(
    name = "fetal-doppler",
    version,
    about = "Classify fetal color-Doppler frames"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment a directory of frames into PGM ROIs plus a manifest.
    Extract(ExtractArgs),
    /// Build a feature CSV from PGM ROIs and an id,label table.
    Featurize(FeaturizeArgs),
    /// Train a model from a feature CSV.
    Train(TrainArgs),
    /// Classify a directory of frames (or ROIs) into a report CSV.
    Classify(ClassifyArgs),
    /// Compare predictions with truth labels and print the confusion matrix.
    Evaluate(EvaluateArgs),
    /// Write a seeded synthetic corpus and its label table.
    Synth(SynthArgs),
}

pub fn execute(command: &Command) -> i32 {
    match command {
        Command::Extract(a) => cmd_extract(a),
        Command::Featurize(a) => cmd_featurize(a),
        Command::Train(a) => cmd_train(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

/// Parse a full argument list (program name first) and run it.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            EXIT_OK
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            eprintln!(
                "{}",
                CliError::usage("a subcommand is required; see --help")
            );
            EXIT_DATA
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            let detail = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("{}", CliError::usage(detail));
            EXIT_DATA
        }
    }
}
