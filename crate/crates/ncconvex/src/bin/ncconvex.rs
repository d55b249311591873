use clap::error::ErrorKind;
use clap::Parser;

use ncconvex::cli;

fn main() {
    let parsed = cli::Cli::try_parse();
    match parsed {
        Ok(args) => std::process::exit(cli::run(args)),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => {
            let _ = e.print();
            std::process::exit(cli::EXIT_USAGE);
        }
    }
}
