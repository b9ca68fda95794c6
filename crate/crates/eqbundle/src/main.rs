use std::process::ExitCode;

use clap::Parser;
use eqbundle::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                let e = eqbundle::CliError::from(e);
                eprintln!("{}", serde_json::json!({ "error": e.to_object() }));
                return ExitCode::from(e.exit_code() as u8);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            let obj = serde_json::json!({ "error": e.to_object() });
            eprintln!("{obj}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
