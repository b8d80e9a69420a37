use clap::Parser;

use logkg_cli::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("validation: args: {line}");
            std::process::exit(2);
        }
    };
    if let Err(e) = run(cli.command) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
