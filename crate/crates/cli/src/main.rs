//! `cpw`: command-line front end. Exit codes: 0 success, 2 usage or input
//! error, 3 domain error, 4 internal consistency failure.

mod args;
mod output;
mod run;

use std::fs;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, ExoticCommand};
use run::{command_name, read_input, replay_argv, CliError};

/// Commands that read data (not parameters) from `--input`.
fn consumes_data(cli: &Cli, source: Option<&str>) -> bool {
    match (&cli.command, source) {
        (Command::CasimirCheck(_) | Command::Reduce(_), Some("wave") | None) => true,
        (Command::Exotic(ExoticCommand::G(g)), _) => g.check_biharmonic,
        _ => false,
    }
}

/// Replaces the command by the one recorded in `--input` when that file is
/// parameters to rerun rather than data to consume.
fn resolve_replay(cli: Cli) -> Result<Cli, CliError> {
    let Some(path) = cli.input.clone() else {
        return Ok(cli);
    };
    let file = read_input(&path)?;
    if consumes_data(&cli, file.command.as_deref()) {
        return Ok(cli);
    }
    let current = command_name(&cli.command);
    match file.command.as_deref() {
        Some(c) if c == current => {
            let argv = replay_argv(c, &file.params)?;
            let mut replayed = Cli::try_parse_from(&argv)
                .map_err(|e| CliError::Usage(format!("{}: cannot replay parameters: {e}", path.display())))?;
            replayed.format = cli.format;
            replayed.manifest = cli.manifest;
            replayed.input = None;
            Ok(replayed)
        }
        Some(c) => Err(CliError::Usage(format!(
            "{} holds `{c}` output, which `{current}` cannot use",
            path.display()
        ))),
        None => Err(CliError::Usage(format!("{} is not a cpw output", path.display()))),
    }
}

fn execute(argv: &[String]) -> Result<i32, CliError> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    let cli = resolve_replay(cli)?;
    let out = run::run(&cli.command, cli.input.as_deref())?;
    let env = output::envelope(&out.command, &out.params, out.result, out.checks);
    let text = output::render(&env, cli.format);
    print!("{text}");
    if let Some(p) = &out.also_write {
        fs::write(p, output::render(&env, args::Format::Json))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    let manifest = output::render(&output::manifest(argv, &out.params, &text), args::Format::Json);
    match &cli.manifest {
        Some(p) => fs::write(p, manifest)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
        None => eprint!("{manifest}"),
    }
    if let Some(msg) = out.failed_check {
        eprintln!("error: {msg}");
        return Ok(4);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = match execute(&argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
