//! Subcommands of the `phigeo` binary.

pub mod eval;
pub mod figure;
pub mod fit;
pub mod table2;
pub mod verify;

use clap::{Parser, Subcommand};

use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "phigeo", version, about = "Information geometry of φ-deformed exponential families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a single quantity and print it as JSON.
    Eval(eval::EvalArgs),
    /// Run a property suite and print the residual table.
    Verify(verify::VerifyArgs),
    /// Solve a MaxEnt problem from a JSON configuration.
    Fit(fit::FitArgs),
    /// Write figure data as CSV.
    Figure(figure::FigureArgs),
    /// Evaluate the Tsallis and stretched rows of the special-case table.
    Table2(table2::Table2Args),
}

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Eval(a) => eval::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Fit(a) => fit::run(a),
        Command::Figure(a) => figure::run(a),
        Command::Table2(a) => table2::run(a),
    }
}
