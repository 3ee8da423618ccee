use clap::Parser;

fn main() {
    let cli = rissnr_cli::args::Cli::parse();
    if let Err(e) = rissnr_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
