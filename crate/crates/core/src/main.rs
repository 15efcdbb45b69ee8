use clap::Parser;

use radtree::cli::Cli;

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = cli.run(&mut stdout) {
        eprintln!("radtree: {e}");
        std::process::exit(e.exit_code());
    }
}
