use clap::Parser;
use nds_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = nds_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
