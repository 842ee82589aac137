//! Run a built-in scenario, evaluate its checks and write trajectory, summary, metrics and SVG
//! plots under `out/` (or `$SWARMCTL_OUT`).
//!
//!     cargo run --release --example scenario_artifacts -- thm2-ring

use std::path::Path;

use swarmctl::io::{builtin, builtin_names, output_root, run_scenario, write_outcome, ArtifactOptions};

fn main() -> swarmctl::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "thm2-blowup".into());
    if !builtin_names().contains(&name.as_str()) {
        eprintln!("choose one of: {}", builtin_names().join(", "));
        std::process::exit(2);
    }
    let scenario = builtin(&name)?;
    println!("{}: {}", scenario.name, scenario.description);
    let outcome = run_scenario(&scenario)?;
    for run in &outcome.runs {
        for c in &run.checks {
            println!("  [{}] {} {}", run.label, if c.passed { "ok  " } else { "FAIL" }, c.check);
        }
    }
    let dir = write_outcome(
        &outcome,
        &ArtifactOptions {
            root: output_root(Path::new("out")),
            ..Default::default()
        },
    )?;
    println!("artifacts in {}", dir.display());
    Ok(())
}
