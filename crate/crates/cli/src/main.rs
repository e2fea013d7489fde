mod config;
mod run;

use std::process::ExitCode;

use clap::Parser;

use config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match &e {
                config::ConfigError::Core(inner) => run::exit_code(inner),
                config::ConfigError::Invalid(_) => run::EXIT_CONFIG,
            };
            return ExitCode::from(code);
        }
    };
    match run::run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(run::EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(run::exit_code(&e))
        }
    }
}
