//! Command-line front-end: function and system parsers, one command per
//! library operation, JSON reports on stdout.

pub mod anf;
pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;
pub mod source;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

pub use anf::{format_anf, parse_anf};
pub use error::CliError;
pub use input::{parse_family, parse_system};
pub use table::{parse_table, write_table};

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return 1;
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let start = Instant::now();
    match commands::execute(&cli.command) {
        Ok(mut report) => {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            if cli.timing {
                report.elapsed_ms = Some(ms);
            }
            eprintln!("{}: {ms:.1} ms", report.command);
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.to_json());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
