//! Output files of a scenario run.
//!
//! Layout: `<root>/<scenario>/seed-<seed>/` holds the main run and `report.json`; each variant
//! gets a subdirectory named by its label. Nothing written depends on wall time, so identical
//! (scenario, seed) pairs produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::scenario::{RunOutcome, ScenarioOutcome};
use super::svg::{line_chart, snapshot, Series};
use crate::dynamics::{summary_json, trajectory_csv, Trajectory};
use crate::error::Result;

/// Environment variable that takes precedence over `--out`.
pub const OUT_ENV: &str = "SWARMCTL_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct ArtifactOptions {
    pub root: PathBuf,
    pub format: OutputFormat,
    pub plots: bool,
}

impl Default for ArtifactOptions {
    fn default() -> Self {
        ArtifactOptions {
            root: PathBuf::from("out"),
            format: OutputFormat::Csv,
            plots: true,
        }
    }
}

/// `SWARMCTL_OUT` when set and non-empty, otherwise `cli`.
pub fn output_root(cli: &Path) -> PathBuf {
    match std::env::var_os(OUT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => cli.to_path_buf(),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializes");
    s.push('\n');
    s
}

/// Trajectory in the chosen format plus its summary sidecar, named `<stem>.csv|json` and
/// `<stem>_summary.json` (or `summary.json` for the stem `trajectory`).
pub fn write_trajectory(dir: &Path, stem: &str, traj: &Trajectory, format: OutputFormat) -> Result<()> {
    fs::create_dir_all(dir)?;
    match format {
        OutputFormat::Csv => fs::write(dir.join(format!("{stem}.csv")), trajectory_csv(traj))?,
        OutputFormat::Json => fs::write(dir.join(format!("{stem}.json")), pretty(traj))?,
    }
    let summary_name = if stem == "trajectory" {
        "summary.json".to_string()
    } else {
        format!("{stem}_summary.json")
    };
    fs::write(dir.join(summary_name), summary_json(traj) + "\n")?;
    Ok(())
}

/// The five standard plots of a trajectory.
pub fn write_plots(dir: &Path, title: &str, traj: &Trajectory, baseline: Option<&Trajectory>) -> Result<()> {
    if traj.is_empty() {
        return Ok(());
    }
    let dir = dir.join("plots");
    fs::create_dir_all(&dir)?;
    let t = &traj.times;

    let mut energy = vec![Series {
        label: "V",
        x: t,
        y: &traj.energy,
    }];
    if let Some(b) = baseline {
        energy.push(Series {
            label: "V (baseline)",
            x: &b.times,
            y: &b.energy,
        });
    }
    fs::write(dir.join("energy.svg"), line_chart(&format!("{title}: energy"), "t", "V", &energy, false))?;

    let sf = [
        Series {
            label: "max |v_i|",
            x: t,
            y: &traj.max_speed,
        },
        Series {
            label: "max |F_i|",
            x: t,
            y: &traj.max_force,
        },
    ];
    fs::write(
        dir.join("speed_force.svg"),
        line_chart(&format!("{title}: speed and force"), "t", "magnitude (log)", &sf, true),
    )?;

    let mid = traj.len() / 2;
    let last = traj.len() - 1;
    let labels = [
        format!("t = {}", traj.states[0].t),
        format!("t = {}", traj.states[mid].t),
        format!("t = {}", traj.states[last].t),
    ];
    let frames: Vec<(&str, &[crate::model::Vec2])> = vec![
        (&labels[0], &traj.states[0].x),
        (&labels[1], &traj.states[mid].x),
        (&labels[2], &traj.states[last].x),
    ];
    fs::write(dir.join("snapshot.svg"), snapshot(&format!("{title}: positions"), &frames))?;

    let radius = traj.mean_radius();
    fs::write(
        dir.join("radius.svg"),
        line_chart(
            &format!("{title}: mean radius"),
            "t",
            "mean |x_i - x_m|",
            &[Series {
                label: "mean radius",
                x: t,
                y: &radius,
            }],
            false,
        ),
    )?;

    let u = traj.recorded_max_u();
    fs::write(
        dir.join("control.svg"),
        line_chart(
            &format!("{title}: control"),
            "t",
            "max |u_i|",
            &[Series {
                label: "max |u_i|",
                x: t,
                y: &u,
            }],
            false,
        ),
    )?;
    Ok(())
}

/// All files of one run into `dir`.
pub fn write_run(dir: &Path, run: &RunOutcome, opts: &ArtifactOptions) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_trajectory(dir, "trajectory", &run.trajectory, opts.format)?;
    if let Some(b) = &run.baseline {
        write_trajectory(dir, "baseline", b, opts.format)?;
    }
    fs::write(dir.join("scenario.json"), pretty(&run.scenario))?;
    let metrics = json!({
        "label": run.label,
        "targets": run.targets,
        "metrics": run.metrics,
        "baseline_metrics": run.baseline_metrics,
        "checks": run.checks,
    });
    fs::write(dir.join("metrics.json"), pretty(&metrics))?;
    if opts.plots {
        let title = if run.label == "main" {
            run.scenario.name.clone()
        } else {
            format!("{} [{}]", run.scenario.name, run.label)
        };
        write_plots(dir, &title, &run.trajectory, run.baseline.as_ref())?;
    }
    Ok(())
}

/// Directory of a scenario outcome under `root`.
pub fn outcome_dir(root: &Path, name: &str, seed: u64) -> PathBuf {
    root.join(name).join(format!("seed-{seed}"))
}

/// Write every run and a `report.json` with the check results; returns the scenario directory.
pub fn write_outcome(out: &ScenarioOutcome, opts: &ArtifactOptions) -> Result<PathBuf> {
    let dir = outcome_dir(&opts.root, &out.name, out.seed);
    for run in &out.runs {
        let d = if run.label == "main" { dir.clone() } else { dir.join(&run.label) };
        write_run(&d, run, opts)?;
    }
    let runs: Vec<_> = out
        .runs
        .iter()
        .map(|r| json!({"label": r.label, "passed": r.passed(), "checks": r.checks}))
        .collect();
    let first_failure = out
        .first_failure()
        .map(|(label, c)| json!({"run": label, "check": c.check, "actual": c.actual}));
    let report = json!({
        "scenario": out.name,
        "seed": out.seed,
        "passed": out.passed(),
        "first_failure": first_failure,
        "runs": runs,
    });
    fs::write(dir.join("report.json"), pretty(&report))?;
    Ok(dir)
}
