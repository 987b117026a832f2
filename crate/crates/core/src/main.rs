use clap::Parser;

fn main() {
    let cli = polarprod::cli::Cli::parse();
    std::process::exit(polarprod::cli::run(cli));
}
