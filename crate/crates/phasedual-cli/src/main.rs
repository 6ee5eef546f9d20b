//! One subcommand per check, JSON or CSV out, deterministic seeds.
//!
//! Exit codes: 0 when every requested verdict passes, 1 when a verdict
//! fails, 2 on usage or precondition errors (including inapplicable checks).

mod commands;
mod io_util;

use clap::Parser;

fn main() {
    let cli = commands::Cli::parse();
    std::process::exit(commands::run(cli));
}
