use clap::Parser;

fn main() {
    if let Err(failure) = kgon_cli::run(kgon_cli::Cli::parse()) {
        eprintln!("{}", failure.report_line());
        std::process::exit(failure.exit_code());
    }
}
