use clap::Parser;
use spanvol::cli::{run, RunConfig};

fn main() {
    std::process::exit(run(&RunConfig::parse()));
}
