//! Text formats and the `omegares` command line.

mod commands;
pub mod doc;
pub mod error;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::Cli;
pub use error::CliError;

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line on `argv` (program name first) without touching
/// the process's own streams.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let json = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string());
            let stdout = if json { report::failure(None, &report::Settings::default(), &err) + "\n" } else { String::new() };
            return Outcome { code: 2, stdout, stderr: e.render().to_string() };
        }
    };
    let settings = cli.settings();
    let name = cli.command.name();
    match commands::execute(&cli) {
        Ok(r) if cli.json => Outcome { code: 0, stdout: report::success(name, &settings, r.result) + "\n", stderr: String::new() },
        Ok(r) => Outcome { code: 0, stdout: r.text, stderr: String::new() },
        Err(e) => {
            let stdout = if cli.json { report::failure(Some(name), &settings, &e) + "\n" } else { String::new() };
            Outcome { code: e.exit_code(), stdout, stderr: format!("error: {e}\n") }
        }
    }
}
