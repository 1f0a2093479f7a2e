use clap::Parser;
use qfock::cli::{run, Cli};

fn main() {
    let out = run(&Cli::parse());
    print!("{}", out.stdout);
    if !out.stderr.is_empty() {
        eprintln!("qfock: {}", out.stderr);
    }
    std::process::exit(out.code);
}
