//! Runs a scenario file through the library and prints the report.
//! `cargo run --example run_scenario -- scenarios/irrational.json`
use std::path::PathBuf;

use momentlab::cli::{execute, validate_scenario};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/segment.json")
        });
    let prepared = match validate_scenario(&path) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    };
    let seed = prepared.scenario.seed.unwrap_or(0);
    match execute(&prepared, seed) {
        Ok(out) => {
            print!("{}", out.report);
            for (name, _) in &out.files {
                println!("(artifact {name} not written)");
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(3);
        }
    }
}
