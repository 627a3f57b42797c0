use std::io;
use std::process::ExitCode;

use ultranorm::{run, Io, MAX_ENUM_VAR};

fn main() -> ExitCode {
    let max_enum = std::env::var(MAX_ENUM_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok());
    let mut io = Io {
        stdin: &mut io::stdin(),
        stdout: &mut io::stdout(),
        stderr: &mut io::stderr(),
        max_enum,
    };
    ExitCode::from(run(std::env::args_os(), &mut io) as u8)
}
