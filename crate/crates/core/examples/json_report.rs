// Run a command programmatically and get the same JSON document the binary
// writes.
//
//     cargo run --example json_report

use spanvol::cli::{execute, to_json, Command, RunConfig};

pub fn run_example() -> spanvol::Result<String> {
    let dir = std::env::temp_dir().join(format!("spanvol-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let input = dir.join("points.csv");
    // the fourth row is zero and gets dropped; output indices still refer to input rows
    std::fs::write(&input, "# x, y\n1, 0\n0, 1\n1, 1\n0, 0\n2, -1\n")?;

    let mut cfg = RunConfig::new(Command::Oracle);
    cfg.input = Some(input);
    cfg.k = Some(2);
    let outcome = execute(&cfg)?;
    assert!(outcome.failure.is_none());
    let json = to_json(&outcome.document)?;
    print!("{json}");
    std::fs::remove_dir_all(&dir)?;
    Ok(json)
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
