use clap::Parser;
use monoscheme_cli::{execute, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match execute(cli.command) {
        Ok(out) => println!("{out}"),
        Err(e) => {
            eprintln!("{}", e.line());
            std::process::exit(e.exit_code());
        }
    }
}
