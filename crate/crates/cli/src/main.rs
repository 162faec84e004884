use std::io::Write;
use std::process::ExitCode;

use eqw_cli::{exit, run_args, Caps};

fn main() -> ExitCode {
    let caps = match Caps::from_env() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("eqw: {msg}");
            return ExitCode::from(exit::INPUT as u8);
        }
    };
    let out = run_args(std::env::args_os(), &caps);
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
