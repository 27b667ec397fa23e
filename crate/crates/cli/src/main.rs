use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use tmtower_cli::args::Cli;
use tmtower_cli::run::{run, Exit};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&cli, &mut out) {
        Ok(exit) => exit,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            f.exit
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(Exit::Usage as u8);
    }
    ExitCode::from(code as u8)
}
