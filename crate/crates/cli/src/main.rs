use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qcc_cli::{classify, run, Cli, SCHEMA};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = classify(&err);
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "error": { "kind": kind, "message": format!("{err:#}") },
            });
            let _ = writeln!(std::io::stderr(), "{doc}");
            ExitCode::from(code)
        }
    }
}
