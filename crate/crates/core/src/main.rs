use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use swarmctl::analysis::analysis_report;
use swarmctl::io::{
    artifacts::outcome_dir, builtin, builtin_names, output_root, parse_assignment, parse_value, run_scenario, schemas,
    write_outcome, ArtifactOptions, ManeuverConfig, OutputFormat, Scenario, ScenarioOutcome, SimulateConfig,
};
use swarmctl::maneuvers::PhasePlan;
use swarmctl::model::{ModelParams, RadialPotential};
use swarmctl::{Result, SwarmError};

/// Simulate and steer self-propelled swarms.
#[derive(Parser)]
#[command(name = "swarmctl", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Common {
    /// Output root; the SWARMCTL_OUT environment variable takes precedence.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides sim.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides sim.dt.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Overrides sim.t_end.
    #[arg(long = "t-end", global = true)]
    t_end: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    plots: Switch,
    /// Any other key, e.g. `--set init.radius_scale=1.5`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run one control law from a config file.
    Simulate { config: PathBuf },
    /// Mill radii, linear stability and G spectrum as JSON.
    Analyze {
        /// A registry scenario or any JSON file with `potential` and `params`.
        source: String,
        /// Number of agents, overriding params.N.
        #[arg(long = "agents")]
        n: Option<usize>,
    },
    /// Run a phase plan.
    Maneuver { plan: PathBuf, config: PathBuf },
    /// Run, list or print scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
    /// Run a scenario once per value of one key; terminal metrics as CSV.
    Sweep {
        source: String,
        #[arg(long)]
        key: String,
        /// Comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        /// Parallel runs; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Write the JSON schemas of all input files.
    Schema {
        #[arg(long, default_value = "schemas")]
        dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Run a registry scenario or a scenario file.
    Run { source: String },
    /// Registry scenarios.
    List,
    /// Print a scenario as JSON, a starting point for custom files.
    Show { source: String },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| SwarmError::Io(format!("{}: {e}", path.display())))
}

fn load_scenario(source: &str) -> Result<Scenario> {
    if builtin_names().contains(&source) {
        builtin(source)
    } else if Path::new(source).exists() {
        Scenario::from_json(&read(Path::new(source))?)
    } else {
        builtin(source)
    }
}

impl Common {
    fn apply(&self, mut s: Scenario) -> Result<Scenario> {
        if let Some(v) = self.seed {
            s = s.with_override("sim.seed", Value::from(v))?;
        }
        if let Some(v) = self.dt {
            s = s.with_override("sim.dt", Value::from(v))?;
        }
        if let Some(v) = self.t_end {
            s = s.with_override("sim.t_end", Value::from(v))?;
        }
        for a in &self.set {
            let (k, v) = parse_assignment(a)?;
            s = s.with_override(&k, v)?;
        }
        Ok(s)
    }

    fn artifacts(&self) -> ArtifactOptions {
        ArtifactOptions {
            root: output_root(&self.out),
            format: self.format,
            plots: self.plots == Switch::On,
        }
    }
}

/// Write artifacts and report; exit status 1 names the first failed check.
fn finish(outcome: &ScenarioOutcome, common: &Common) -> Result<ExitCode> {
    let dir = write_outcome(outcome, &common.artifacts())?;
    for run in &outcome.runs {
        for c in &run.checks {
            let actual = c.actual.map_or("n/a".to_string(), |a| a.to_string());
            println!(
                "{} [{}] {}: {} (actual {actual})",
                if c.passed { "PASS" } else { "FAIL" },
                outcome.name,
                run.label,
                c.check
            );
        }
    }
    println!("artifacts: {}", dir.display());
    match outcome.first_failure() {
        Some((label, c)) => {
            eprintln!("check failed in run '{label}': {}", c.check);
            Ok(ExitCode::from(1))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn analyze(source: &str, n: Option<usize>) -> Result<()> {
    let v: Value = if builtin_names().contains(&source) || !Path::new(source).exists() {
        serde_json::to_value(load_scenario(source)?).expect("serializes")
    } else {
        serde_json::from_str(&read(Path::new(source))?)?
    };
    let field = |k: &str| {
        v.get(k)
            .cloned()
            .ok_or_else(|| SwarmError::Config(format!("'{source}' has no '{k}'")))
    };
    let pot: RadialPotential = serde_json::from_value(field("potential")?)?;
    let mut params: ModelParams = serde_json::from_value(field("params")?)?;
    if let Some(n) = n {
        params = params.with_n(n);
    }
    pot.validate()?;
    params.validate()?;
    let rep = analysis_report(&pot, &params)?;
    println!("{}", serde_json::to_string_pretty(&rep).expect("serializes"));
    Ok(())
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn sweep(source: &str, key: &str, values: &[String], jobs: Option<usize>, common: &Common) -> Result<ExitCode> {
    let mut base = common.apply(load_scenario(source)?)?;
    base.variants.clear();
    let runs: Vec<(String, Scenario)> = values
        .iter()
        .map(|raw| {
            let v = parse_value(raw);
            Ok((csv_field(&v), base.with_override(key, v)?))
        })
        .collect::<Result<_>>()?;
    let jobs = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let mut outcomes: Vec<Option<Result<ScenarioOutcome>>> = (0..runs.len()).map(|_| None).collect();
    for (chunk_runs, chunk_out) in runs.chunks(jobs).zip(outcomes.chunks_mut(jobs)) {
        std::thread::scope(|sc| {
            for ((_, s), slot) in chunk_runs.iter().zip(chunk_out.iter_mut()) {
                sc.spawn(move || *slot = Some(run_scenario(s)));
            }
        });
    }
    let root = outcome_dir(&common.artifacts().root, &base.name, base.sim.seed);
    let sweep_dir = root.join(format!("sweep-{key}"));
    let mut rows = Vec::new();
    let mut columns = std::collections::BTreeSet::new();
    for ((label, _), out) in runs.iter().zip(outcomes) {
        let out = out.expect("every run executed")?;
        let opts = ArtifactOptions {
            root: sweep_dir.join(label),
            ..common.artifacts()
        };
        swarmctl::io::artifacts::write_run(&opts.root, &out.runs[0], &opts)?;
        columns.extend(out.runs[0].metrics.keys().cloned());
        rows.push((label.clone(), out.passed(), out.runs[0].metrics.clone()));
    }
    let mut csv = format!("{key},passed");
    for c in &columns {
        csv.push(',');
        csv.push_str(c);
    }
    csv.push('\n');
    for (label, passed, m) in &rows {
        csv.push_str(&format!("{label},{passed}"));
        for c in &columns {
            csv.push(',');
            if let Some(v) = m.get(c) {
                csv.push_str(&v.to_string());
            }
        }
        csv.push('\n');
    }
    fs::create_dir_all(&sweep_dir)?;
    fs::write(root.join(format!("sweep-{key}.csv")), &csv)?;
    print!("{csv}");
    Ok(if rows.iter().all(|r| r.1) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = &cli.common;
    match cli.cmd {
        Command::Simulate { config } => {
            let cfg: SimulateConfig = serde_json::from_str(&read(&config)?)?;
            let s = common.apply(cfg.into_scenario()?)?;
            finish(&run_scenario(&s)?, common)
        }
        Command::Analyze { source, n } => {
            analyze(&source, n)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Maneuver { plan, config } => {
            let plan = PhasePlan::from_json(&read(&plan)?)?;
            let cfg: ManeuverConfig = serde_json::from_str(&read(&config)?)?;
            let s = common.apply(cfg.into_scenario(plan)?)?;
            finish(&run_scenario(&s)?, common)
        }
        Command::Scenario(ScenarioCmd::List) => {
            for name in builtin_names() {
                let s = builtin(name)?;
                println!("{name:<16} {}", s.description);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scenario(ScenarioCmd::Show { source }) => {
            println!("{}", common.apply(load_scenario(&source)?)?.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Scenario(ScenarioCmd::Run { source }) => {
            let s = common.apply(load_scenario(&source)?)?;
            finish(&run_scenario(&s)?, common)
        }
        Command::Sweep {
            source,
            key,
            values,
            jobs,
        } => sweep(&source, &key, &values, jobs, common),
        Command::Schema { dir } => {
            fs::create_dir_all(&dir)?;
            for (stem, text) in schemas() {
                let path = dir.join(format!("{stem}.schema.json"));
                fs::write(&path, text)?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
