mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind as ClapKind;
use clap::Parser;

use args::Cli;
use commands::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ClapKind::DisplayHelp | ClapKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ClapKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            report(&CliError::Usage("no subcommand given (see --help)".into()));
            return ExitCode::from(1);
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            report(&CliError::Usage(
                first.trim_start_matches("error: ").to_owned(),
            ));
            return ExitCode::from(1);
        }
    };

    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            report(&CliError::Usage("--jobs must be at least 1".into()));
            return ExitCode::from(1);
        }
        // only fails if a pool was already installed, which never happens here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code())
        }
    }
}

fn report(e: &CliError) {
    let msg = e.to_string().replace('\n', " ");
    eprintln!("error[{}]: {msg}", e.tag());
}
