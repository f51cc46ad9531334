//! Command-line front end for `gqd-core`.
//!
//! Every command produces a [`output::Report`] (rows plus a summary) that is
//! written as CSV or as a JSON document `{"meta": …, "rows": […]}`.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 resource budget, 4 self-test
//! failure.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod selftest;
pub mod state_spec;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use commands::AtScanRequest;
use config::Settings;
use error::{CliError, CliResult};
use selftest::{Backend, Library};

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_backend(argv, &Library)
}

/// As [`run`], with the self-test computed by `backend`.
pub fn run_with_backend<I, T>(argv: I, backend: &dyn Backend) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli, backend) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("gqd: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, backend: &dyn Backend) -> CliResult<()> {
    let settings = Settings::resolve(&cli.global)?;
    gqd_core::exec::with_threads(settings.threads, || {
        dispatch(&cli.command, &settings, backend)
    })
}

fn dispatch(command: &Command, settings: &Settings, backend: &dyn Backend) -> CliResult<()> {
    let report = match command {
        Command::GhzSurface { resolution } => commands::ghz_surface_cmd(*resolution)?,
        Command::WernerGhz { mode } => commands::werner_ghz_cmd(*mode, settings)?,
        Command::AtScan {
            sites,
            group,
            anchor,
            strategy,
            beta,
            delta_min,
            delta_max,
            iterative,
        } => commands::at_scan_cmd(
            &AtScanRequest {
                sites: *sites,
                group: *group,
                anchor: *anchor,
                strategy: *strategy,
                beta: *beta,
                delta_min: *delta_min,
                delta_max: *delta_max,
                iterative: *iterative,
            },
            settings,
        )?,
        Command::Discord { state, strategy } => commands::discord_cmd(state, *strategy, settings)?,
        Command::Selftest { count } => {
            let (report, failed) = selftest::run_selftest(backend, settings.seed, *count);
            report.emit(settings.format, settings.out.as_deref())?;
            return if failed == 0 {
                Ok(())
            } else {
                Err(CliError::SelftestFailed(failed))
            };
        }
    };
    report.emit(settings.format, settings.out.as_deref())
}
