use clap::Parser;

use framecond::cli::{run, RunConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = RunConfig::parse();
    std::process::exit(run(&config));
}
