mod args;
mod commands;
mod output;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use klab_core::{Dd, Precision, Qd};

use args::{Cli, Command};
use output::{CliError, CliResult, Output};

macro_rules! at_precision {
    ($p:expr, $m:ident::$f:ident, $($arg:expr),*) => {
        match $p {
            Precision::Double => $m::$f::<f64>($($arg),*),
            Precision::Extended => $m::$f::<Dd>($($arg),*),
            Precision::High => $m::$f::<Qd>($($arg),*),
        }
    };
}

fn run(cli: &Cli) -> CliResult<(Output, bool)> {
    let g = &cli.global;
    if !(g.tol > 0.0 && g.tol.is_finite()) {
        return Err(CliError::usage(format!(
            "--tol must be positive, got {}",
            g.tol
        )));
    }
    if g.max_terms == 0 {
        return Err(CliError::usage("--max-terms must be positive"));
    }
    let out = match &cli.command {
        Command::Qexp { form, terms } => commands::qexp(*form, *terms, g)?,
        Command::Arith(c) => commands::arith(c)?,
        Command::Specfun(c) => at_precision!(g.precision, commands::specfun, c)?,
        Command::K1(c) => at_precision!(g.precision, commands::k1, c, g)?,
        Command::Lseries(c) => at_precision!(g.precision, commands::lseries, c, g)?,
        Command::Holproj(c) => at_precision!(g.precision, commands::holproj, c, g)?,
        Command::Verify { suite } => return at_precision!(g.precision, verify::run, *suite),
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|(out, ok)| Ok((out.render(cli.global.format)?, ok)));
    match result {
        Ok((text, ok)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("klab: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
