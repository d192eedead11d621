use std::io::{self, Read, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let mut stdin = String::new();
    let reads_stdin = args.iter().skip(1).any(|a| a == "-");
    if reads_stdin && io::stdin().read_to_string(&mut stdin).is_err() {
        eprintln!("error: could not read standard input");
        return ExitCode::from(4);
    }
    let out = jssec::run(&args, &stdin);
    let _ = io::stdout().write_all(out.stdout.as_bytes());
    let _ = io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
