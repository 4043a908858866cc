use clap::Parser;
use perfect_stbc::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli) as i32);
}
