mod cli;
mod commands;
mod error;
mod manifest;
mod render;
mod viridis;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};
use error::CliError;
use manifest::RunManifest;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MDGSP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("MDGSP_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot size the thread pool: {e}")))
}

fn execute(args: Vec<String>) -> Result<(), CliError> {
    let argv = std::iter::once(OsString::from("mdgsp")).chain(args.iter().map(OsString::from));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            return Err(CliError::usage(first.trim_start_matches("error: ")));
        }
    };
    let name = args.first().map(String::as_str).unwrap_or_default();
    let mut m = RunManifest::new(name, &args);
    let primary = match &cli.command {
        Command::Replay(r) => {
            let recorded = RunManifest::read(&r.manifest)?;
            if recorded.command == "replay" {
                return Err(CliError::usage("a replay manifest cannot be replayed"));
            }
            return execute(recorded.args);
        }
        Command::Product(a) => commands::product(a, &mut m).map(|_| a.out.clone()),
        Command::Eig(a) => commands::eig(a, &mut m).map(|_| a.out.clone()),
        Command::Gft(a) => commands::gft(a, &mut m).map(|_| a.out.clone()),
        Command::Filter(a) => commands::filter(a, &mut m).map(|_| a.out.clone()),
        Command::Denoise(a) => commands::denoise(a, &mut m).map(|_| a.out.clone()),
        Command::Variation(a) => commands::variation(a, &mut m).map(|_| a.out.clone()),
        Command::Stationarity(a) => commands::stationarity(a, &mut m).map(|_| a.report.clone()),
        Command::Bench(a) => commands::bench(a, &mut m).map(|_| a.out.clone()),
        Command::Render(a) => commands::render(a, &mut m).map(|_| a.svg.clone()),
    }?;
    m.write_next_to(&primary)?;
    Ok(())
}

fn main() -> ExitCode {
    let result = configure_threads().and_then(|()| execute(std::env::args().skip(1).collect()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.class().exit_status() as u8)
        }
    }
}
