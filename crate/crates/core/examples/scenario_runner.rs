//! Runs every pipeline of the `imcf` binary from an in-memory scenario and
//! prints the summaries and exit codes.

use weak_imcf::scenario::{run, Command, Scenario};

fn main() -> weak_imcf::Result<()> {
    let out = std::env::temp_dir().join("imcf-scenario-runner");
    for command in Command::ALL {
        let mut s = Scenario::from_json(r#"{"manifold": {"model": "dip", "n": 3, "r_max": 40}, "seed": 3}"#)?;
        s.pipeline.command = command;
        s.validate()?;
        let outcome = run(&s, &out.join(command.name()))?;
        println!("== {} (exit {})", command.name(), outcome.exit);
        for line in &outcome.summary {
            println!("  {line}");
        }
    }
    println!("artifacts under {}", out.display());
    Ok(())
}
