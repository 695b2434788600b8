use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use upsilon::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut read = |path: Option<&std::path::PathBuf>| match path {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    };
    let out = run(&cli, &mut read);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
