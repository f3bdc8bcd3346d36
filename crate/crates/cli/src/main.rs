mod cli;
mod output;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Format};
use run::CliError;

fn format_for(cli: &Cli) -> Format {
    if let Some(f) = cli.format {
        return f;
    }
    match cli.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run::execute(&cli.command).and_then(|(report, failure)| {
        emit(&cli, &output::render(&report, format_for(&cli)))?;
        failure.map_or(Ok(()), |m| Err(CliError::Check(m)))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
