use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use swarmctl::io::{builtin, run_scenario, schemas, write_outcome, ArtifactOptions, OutputFormat, Scenario};

const TINY: &str = r#"{
    "name": "tiny",
    "potential": {"family": "power_law", "a": 4, "b": 1},
    "params": {"alpha": 10, "beta": 3, "M": 10, "N": 6},
    "init": {"kind": "ring", "ring": "mill", "radius_scale": 1.3},
    "run": {"kind": "law", "law": {"law": "jq"}},
    "baseline": {"law": "zero"},
    "sim": {"dt": 0.01, "t_end": 3, "record_every": 20, "seed": 5},
    "variants": [{"label": "wide", "set": {"init.radius_scale": 1.6}}],
    "checks": [{"metric": "max_control", "comparator": "le", "value": 10.000000000001}]
}"#;

fn files(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn write_tiny(root: &Path, format: OutputFormat) -> PathBuf {
    let s = Scenario::from_json(TINY).unwrap();
    let out = run_scenario(&s).unwrap();
    assert!(out.passed());
    write_outcome(
        &out,
        &ArtifactOptions {
            root: root.to_path_buf(),
            format,
            plots: true,
        },
    )
    .unwrap()
}

#[test]
fn artifacts_are_complete_and_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let da = write_tiny(a.path(), OutputFormat::Csv);
    let db = write_tiny(b.path(), OutputFormat::Csv);
    let fa = files(&da);
    assert_eq!(fa, files(&db));
    for f in [
        "trajectory.csv",
        "summary.json",
        "baseline.csv",
        "baseline_summary.json",
        "metrics.json",
        "scenario.json",
        "report.json",
        "plots/energy.svg",
        "plots/speed_force.svg",
        "plots/snapshot.svg",
        "plots/radius.svg",
        "plots/control.svg",
        "wide/trajectory.csv",
        "wide/plots/snapshot.svg",
    ] {
        assert!(fa.contains_key(Path::new(f)), "missing {f}");
    }
    let csv = String::from_utf8(fa[Path::new("trajectory.csv")].clone()).unwrap();
    assert!(csv.starts_with("t,agent,x1,x2,v1,v2,u1,u2\n"));
    let summary: serde_json::Value = serde_json::from_slice(&fa[Path::new("summary.json")]).unwrap();
    for k in ["V", "polarization", "ang_momentum", "mean_radius", "mean_speed", "times"] {
        assert!(summary[k].is_array(), "{k}");
    }
    // the written scenario reproduces the run
    let back = Scenario::from_json(std::str::from_utf8(&fa[Path::new("scenario.json")]).unwrap()).unwrap();
    assert_eq!(back.name, "tiny");
}

#[test]
fn json_trajectory_format() {
    let a = tempfile::tempdir().unwrap();
    let d = write_tiny(a.path(), OutputFormat::Json);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("trajectory.json")).unwrap()).unwrap();
    assert!(v["states"].as_array().unwrap().len() > 1);
}

#[test]
fn svg_outputs_are_well_formed() {
    let a = tempfile::tempdir().unwrap();
    let d = write_tiny(a.path(), OutputFormat::Csv);
    let mut seen = 0;
    for (p, bytes) in files(&d) {
        if p.extension().is_some_and(|e| e == "svg") {
            let text = String::from_utf8(bytes).unwrap();
            let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            assert_eq!(doc.root_element().tag_name().name(), "svg");
            assert_eq!(doc.root_element().attribute("viewBox"), Some("0 0 640 400"));
            seen += 1;
        }
    }
    assert_eq!(seen, 10);
}

#[test]
fn unknown_keys_are_rejected() {
    for (from, to) in [
        ("\"record_every\"", "\"record_evry\""),
        ("\"radius_scale\"", "\"radius_scal\""),
        ("\"comparator\"", "\"cmp\""),
        ("{\"law\": \"jq\"}", "{\"law\": \"jq\", \"gain\": 2}"),
    ] {
        let src = TINY.replacen(from, to, 1);
        assert_ne!(src, TINY);
        assert!(Scenario::from_json(&src).is_err(), "{to}");
    }
}

#[test]
fn committed_schemas_are_current() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas");
    for (stem, text) in schemas() {
        let path = dir.join(format!("{stem}.schema.json"));
        let committed = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(committed, text, "{stem} schema is stale; run `swarmctl schema`");
    }
}

fn cli(args: &[&str], out_env: Option<&Path>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_swarmctl"));
    cmd.args(args).env_remove("SWARMCTL_OUT");
    if let Some(p) = out_env {
        cmd.env("SWARMCTL_OUT", p);
    }
    cmd.output().unwrap()
}

#[test]
fn cli_exit_codes_and_output_override() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("tiny.json");
    fs::write(&file, TINY).unwrap();
    let f = file.to_str().unwrap();
    let flag_out = tmp.path().join("flag");
    let env_out = tmp.path().join("env");

    let ok = cli(&["scenario", "run", f, "--plots", "off", "--out", flag_out.to_str().unwrap()], Some(&env_out));
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(env_out.join("tiny/seed-5/trajectory.csv").exists());
    assert!(!flag_out.exists());
    assert!(!env_out.join("tiny/seed-5/plots").exists());

    // --seed moves the output directory
    let seeded = cli(&["scenario", "run", f, "--seed", "7", "--out", flag_out.to_str().unwrap()], None);
    assert_eq!(seeded.status.code(), Some(0));
    assert!(flag_out.join("tiny/seed-7/report.json").exists());

    // failing check: exit 1 and the check is named
    let failing = cli(
        &["scenario", "run", f, "--set", "checks.0.value=0.001", "--out", flag_out.to_str().unwrap()],
        None,
    );
    assert_eq!(failing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&failing.stderr).contains("max_control"));

    // config errors
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, TINY.replacen("\"seed\"", "\"sed\"", 1)).unwrap();
    assert_eq!(cli(&["scenario", "run", bad.to_str().unwrap()], Some(&env_out)).status.code(), Some(2));
    assert_eq!(cli(&["scenario", "run", "no-such-scenario"], Some(&env_out)).status.code(), Some(2));

    // numeric failure: two agents on top of each other
    let collide = tmp.path().join("collide.json");
    fs::write(
        &collide,
        r#"{"name": "collide", "potential": {"family": "power_law", "a": 4, "b": 1},
            "params": {"alpha": 1, "beta": 1, "M": 1, "N": 2},
            "init": {"kind": "explicit", "state": {"t": 0, "x": [[0, 0], [0, 0]], "v": [[0, 0], [0, 0]]}},
            "run": {"kind": "law", "law": {"law": "zero"}}}"#,
    )
    .unwrap();
    assert_eq!(cli(&["scenario", "run", collide.to_str().unwrap()], Some(&env_out)).status.code(), Some(3));
}

#[test]
fn empty_checks_exit_zero_with_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("sim.json");
    fs::write(
        &cfg,
        r#"{"potential": {"family": "power_law", "a": 4, "b": 1},
            "params": {"alpha": 2, "beta": 1.5, "M": 1, "N": 5},
            "init": {"kind": "random", "box": [-1, -1, 1, 1], "speed_disk": 0.5},
            "law": {"law": "zero"},
            "sim": {"dt": 0.01, "t_end": 1, "record_every": 10, "seed": 3}}"#,
    )
    .unwrap();
    let out = cli(&["simulate", cfg.to_str().unwrap(), "--format", "json"], Some(tmp.path()));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("simulate/seed-3/trajectory.json").exists());
}

#[test]
fn analyze_reports_required_keys() {
    let out = cli(&["analyze", "fig-mill1", "--agents", "8"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for k in ["R_roots", "A", "char_coeffs", "margins", "stable", "G_zero_count", "G_max_nonzero_real"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["stable"], serde_json::Value::Bool(true));
}

#[test]
fn maneuver_runs_a_plan() {
    let tmp = tempfile::tempdir().unwrap();
    let plan = tmp.path().join("plan.json");
    fs::write(
        &plan,
        r#"[{"name": "settle", "law": {"law": "jq"},
             "stop": {"condition": {"kind": "max_speed_below", "value": 0.05}, "max_duration": 200}}]"#,
    )
    .unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"potential": {"family": "power_law", "a": 4, "b": 1},
            "params": {"alpha": 1, "beta": 1, "M": 5, "N": 4},
            "init": {"kind": "random", "box": [-1, -1, 1, 1], "speed_disk": 0.5},
            "checks": [{"metric": "final_max_speed", "comparator": "lt", "value": 0.05}]}"#,
    )
    .unwrap();
    let out = cli(&["maneuver", plan.to_str().unwrap(), cfg.to_str().unwrap()], Some(tmp.path()));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(tmp.path().join("maneuver/seed-0/summary.json")).unwrap();
    assert!(summary.contains("\"settle\""));
}

#[test]
fn sweep_writes_metric_table() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("tiny.json");
    fs::write(&file, TINY).unwrap();
    let out = cli(
        &[
            "sweep",
            file.to_str().unwrap(),
            "--key",
            "params.M",
            "--values",
            "5,10",
            "--plots",
            "off",
        ],
        Some(tmp.path()),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("tiny/seed-5/sweep-params.M.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("params.M,passed,"));
    assert!(lines[1].starts_with("5,true,"));
}

#[test]
fn registry_scenarios_parse_back_from_show() {
    let out = cli(&["scenario", "show", "thm2-ring"], None);
    let s = Scenario::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(s, builtin("thm2-ring").unwrap());
}
