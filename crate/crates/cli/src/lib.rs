//! Command line front end for the crosses-core library: workspace files,
//! command dispatch, and deterministic line-oriented reports.

pub mod commands;
pub mod workspace;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{ColorChoice, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "crosses",
    version,
    about = "Disjunctively definable relations, their patterns, and bounded polymorphism clones",
    color = ColorChoice::Never
)]
pub(crate) struct Cli {
    #[command(subcommand)]
    pub(crate) command: Command,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Print the pattern vector of a named cross.
    Pattern {
        /// Workspace file.
        workspace: PathBuf,
        /// Name of a cross declared in the workspace.
        cross: String,
    },
    /// Recover cross parameters from an extensional relation, if any exist.
    Reconstruct {
        /// Workspace file.
        workspace: PathBuf,
        /// File holding one space-separated tuple per line.
        tuples: PathBuf,
    },
    /// Print the pattern downset encoding a named relation set.
    Encode {
        /// Workspace file.
        workspace: PathBuf,
        /// Name of a relation set declared in the workspace.
        set: String,
    },
    /// Probe whether every polymorphism of the second set preserves the
    /// first set, by pattern certificate and by bounded search.
    Compare {
        /// Workspace file.
        workspace: PathBuf,
        /// Relation set whose preservation is in question.
        first: String,
        /// Relation set whose polymorphisms are probed.
        second: String,
        /// Largest operation arity searched.
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Enumerate the bounded polymorphism clone of a named relation set.
    Pol {
        /// Workspace file.
        workspace: PathBuf,
        /// Name of a relation set declared in the workspace.
        set: String,
        /// Largest operation arity enumerated.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Print every operation table.
        #[arg(long)]
        list: bool,
    },
    /// Verify the strictly descending chain of clones over one gamma.
    Chain {
        /// Workspace file.
        workspace: PathBuf,
        /// Name of a gamma declared in the workspace.
        gamma: String,
        /// Largest chain level tested.
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
    /// Count downsets of a bounded pattern box.
    CountDownsets {
        /// Box dimension.
        #[arg(long)]
        dims: usize,
        /// Largest count per coordinate.
        #[arg(long)]
        bound: usize,
        /// Cross-check the count against the subset oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Survey bounded clones across every realizable pattern downset.
    Catalogue {
        /// Workspace file.
        workspace: PathBuf,
        /// Largest count per coordinate in the pattern box.
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Largest operation arity in each clone signature.
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
}

/// Runs the command line given a full argument vector, binary name first.
///
/// Returns the exit code together with the stdout and stderr payloads;
/// every failure writes a single `error:` line to stderr.
pub fn execute(args: &[String]) -> (i32, String, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(error) => {
            if matches!(error.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let mut text = error.to_string();
                if !text.ends_with('\n') {
                    text.push('\n');
                }
                return (0, text, String::new());
            }
            return (1, String::new(), usage_line(&error));
        }
    };
    match commands::run(cli.command) {
        Ok(report) => (0, report, String::new()),
        Err(failure) => (
            failure.code,
            String::new(),
            format!("error: {}\n", failure.message),
        ),
    }
}

fn usage_line(error: &clap::Error) -> String {
    let text = error.to_string();
    let first = text
        .lines()
        .find(|line| !line.trim().is_empty())
        .unwrap_or("invalid arguments");
    let message = first
        .trim()
        .strip_prefix("error:")
        .map(str::trim)
        .unwrap_or_else(|| first.trim());
    format!("error: {message}\n")
}
