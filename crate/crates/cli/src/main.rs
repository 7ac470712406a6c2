mod args;
mod commands;
mod report;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};

const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("okmult: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    let written = match cli.format {
        Format::Json => report.write_json(&mut out),
        Format::Csv => report.write_csv(&mut out),
    };
    match written.and_then(|_| out.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("okmult: {e}");
            ExitCode::FAILURE
        }
    }
}
