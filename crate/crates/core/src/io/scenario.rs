use std::collections::BTreeMap;
use std::f64::consts::PI;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::{relax_positions, ring_state, solve_ring_radius, RingKind, RingSpec, RingType};
use crate::controllers::{InstantaneousSpec, LawConfig, QuasiStaticPlan};
use crate::dynamics::{simulate, RandomInit, SimConfig, Trajectory};
use crate::error::{Result, SwarmError};
use crate::maneuvers::{
    blowup_pipeline, extraction_audit, flock_pipeline, flock_to_flock, mill_pipeline_clusters, mill_to_flock,
    relative_drift, ring_pipeline, run_plan, transition_report, MillCluster, PhasePlan, PipelineOptions,
};
use crate::model::{min_pair_distance, ModelParams, RadialPotential, SwarmState, Vec2};

use super::overrides::set_path;

/// A complete, self-describing experiment: model, initial condition, what to run and what to
/// expect of the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub potential: RadialPotential,
    pub params: ModelParams,
    pub init: InitSpec,
    pub run: RunSpec,
    #[serde(default)]
    pub sim: SimSettings,
    /// A second law run from the same initial state, e.g. the uncontrolled reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<LawConfig>,
    /// Reference values some metrics are measured against. Pipelines fill in their own.
    #[serde(default)]
    pub targets: Targets,
    /// Extra runs of the same scenario with some keys overridden.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<Variant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    /// Expected wall time at desk scale, in seconds. Informational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_seconds: Option<f64>,
}

/// Integration settings. Pipelines take `dt`, `record_every` and `seed` from here; `t_end` only
/// bounds plain law runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct SimSettings {
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub seed: u64,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            dt: 1e-2,
            t_end: 10.0,
            record_every: 10,
            seed: 0,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_relax_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitSpec {
    Explicit {
        state: SwarmState,
    },
    /// Uniform positions in `box = [x_min, y_min, x_max, y_max]`, velocities uniform in the disk
    /// of radius `speed_disk`; seeded by `sim.seed`.
    Random {
        #[serde(rename = "box")]
        bounds: [f64; 4],
        #[serde(default)]
        speed_disk: f64,
    },
    /// Equispaced ring. The radius is `R` or the solved ring radius, times `radius_scale`.
    /// Mill velocities are tangential at cruise speed rotated by `gamma0`; flock velocities are
    /// the cruise velocity at angle `heading`.
    Ring {
        ring: RingType,
        #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default = "one")]
        radius_scale: f64,
        #[serde(default)]
        center: Vec2,
        #[serde(default)]
        phase: f64,
        #[serde(default = "one")]
        orientation: f64,
        #[serde(default)]
        heading: f64,
        #[serde(default)]
        gamma0: f64,
    },
    /// A random cloud in `box` relaxed to an equilibrium (`max |F_i| < relax_tol`), every agent
    /// moving with the cruise velocity at angle `heading`.
    Flock {
        #[serde(rename = "box")]
        bounds: [f64; 4],
        #[serde(default)]
        heading: f64,
        #[serde(default = "default_relax_tol")]
        relax_tol: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunSpec {
    /// One law from `t = 0` to `sim.t_end`.
    Law { law: LawConfig },
    Plan {
        phases: PhasePlan,
        #[serde(default)]
        options: PipelineOptions,
    },
    FlockPipeline {
        #[serde(default)]
        heading: f64,
        eps: f64,
        #[serde(default)]
        options: PipelineOptions,
    },
    /// Mills on the listed clusters; one mill on the solved radius about the origin when empty.
    MillPipeline {
        #[serde(default)]
        clusters: Vec<MillCluster>,
        eps: f64,
        #[serde(default)]
        options: PipelineOptions,
    },
    FlockToFlock {
        theta0: f64,
        #[serde(rename = "thetaT")]
        theta_t: f64,
        #[serde(rename = "T")]
        t_total: f64,
        envelope: f64,
        #[serde(default)]
        options: PipelineOptions,
    },
    /// Flock radius `R_f` defaults to the solved flock-ring radius.
    MillToFlock {
        heading: f64,
        #[serde(default, rename = "R_f", skip_serializing_if = "Option::is_none")]
        r_f: Option<f64>,
        #[serde(default)]
        spec: InstantaneousSpec,
        #[serde(default)]
        options: PipelineOptions,
    },
    Blowup {
        eta: f64,
        #[serde(rename = "L")]
        big_l: f64,
        #[serde(default)]
        options: PipelineOptions,
    },
    /// Blow-up, circular placement, spin-up and radius change of the mill to `R_to` (the solved
    /// mill radius by default). `R_bar` defaults to `R_to`.
    RingConstruction {
        eta: f64,
        #[serde(rename = "L")]
        big_l: f64,
        #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default, rename = "R_to", skip_serializing_if = "Option::is_none")]
        r_to: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        duration: Option<f64>,
        #[serde(default, rename = "R_bar", skip_serializing_if = "Option::is_none")]
        r_bar: Option<f64>,
        #[serde(default)]
        options: PipelineOptions,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Targets {
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub label: String,
    /// Dotted key paths (`init.radius_scale`, `run.options.hold`) and their new values.
    pub set: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    FinalTime,
    FinalMaxSpeed,
    FinalMaxForce,
    FinalPolarization,
    FinalAngMomentum,
    FinalMeanSpeed,
    FinalMeanRadius,
    /// `max_i ||v_i| - c|`.
    FinalSpeedDev,
    FinalMinDistance,
    /// Smallest pairwise distance over all recorded samples.
    PathMinDistance,
    /// Same, restricted to the circular placement phases.
    PlacementMinDistance,
    /// Largest mill diagnostic, radii against `targets.R` when set.
    FinalMillDiagnostics,
    /// `|mean radius - R|`.
    FinalRadiusAbsError,
    /// `|mean radius - R| / R`.
    FinalRadiusRelError,
    /// Angle between the mean velocity and `targets.heading`.
    HeadingError,
    /// Heading error at the end of a quasi-static rotation phase.
    HeadingLag,
    /// Largest change of positions relative to the centroid, final against initial.
    RelativeDrift,
    /// Largest applied `|u_i|` over all steps.
    MaxControl,
    /// Fraction of steps whose request exceeded `M`.
    SaturatedFraction,
    /// `max_k V(t_(k+1)) - V(t_k) - 10 dt^2 max(1, |V(t_k)|)`; not positive for a dissipative run.
    EnergyExcess,
    /// Largest drop of the moved agent's nearest-neighbour distance during an extraction,
    /// relative to its final value.
    ExtractionDecrease,
}

impl Metric {
    pub fn key(&self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum CheckTarget {
    #[default]
    Main,
    Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    Lt,
    Le,
    Gt,
    Ge,
    /// `|actual - value| <= tolerance`.
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub metric: Metric,
    #[serde(default)]
    pub on: CheckTarget,
    pub comparator: Comparator,
    pub value: f64,
    #[serde(default)]
    pub tolerance: f64,
}

impl Check {
    pub fn new(metric: Metric, comparator: Comparator, value: f64) -> Self {
        Check {
            metric,
            on: CheckTarget::Main,
            comparator,
            value,
            tolerance: 0.0,
        }
    }

    pub fn approx(metric: Metric, value: f64, tolerance: f64) -> Self {
        Check {
            tolerance,
            ..Check::new(metric, Comparator::Approx, value)
        }
    }

    pub fn on_baseline(mut self) -> Self {
        self.on = CheckTarget::Baseline;
        self
    }

    pub fn passes(&self, actual: f64) -> bool {
        match self.comparator {
            Comparator::Lt => actual < self.value,
            Comparator::Le => actual <= self.value,
            Comparator::Gt => actual > self.value,
            Comparator::Ge => actual >= self.value,
            Comparator::Approx => (actual - self.value).abs() <= self.tolerance,
        }
    }

    pub fn describe(&self) -> String {
        let op = match self.comparator {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
            Comparator::Approx => "~",
        };
        let on = match self.on {
            CheckTarget::Main => "",
            CheckTarget::Baseline => "baseline ",
        };
        if self.comparator == Comparator::Approx {
            format!("{on}{} {op} {} (+/- {})", self.metric.key(), self.value, self.tolerance)
        } else {
            format!("{on}{} {op} {}", self.metric.key(), self.value)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    /// `None` when the metric does not apply to this run.
    pub actual: Option<f64>,
    pub passed: bool,
}

/// One executed run (the main one or a variant).
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub label: String,
    pub scenario: Scenario,
    pub targets: Targets,
    pub trajectory: Trajectory,
    pub baseline: Option<Trajectory>,
    pub metrics: BTreeMap<String, f64>,
    pub baseline_metrics: Option<BTreeMap<String, f64>>,
    pub checks: Vec<CheckResult>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub name: String,
    pub seed: u64,
    pub runs: Vec<RunOutcome>,
}

impl ScenarioOutcome {
    pub fn passed(&self) -> bool {
        self.runs.iter().all(|r| r.passed())
    }

    /// `(run label, check)` of the first failed check.
    pub fn first_failure(&self) -> Option<(&str, &CheckResult)> {
        self.runs
            .iter()
            .find_map(|r| r.checks.iter().find(|c| !c.passed).map(|c| (r.label.as_str(), c)))
    }
}

impl Scenario {
    pub fn from_json(src: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(src)?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(SwarmError::Config("scenario name is empty".into()));
        }
        self.params.validate()?;
        self.potential.validate()?;
        let s = &self.sim;
        if !(s.dt > 0.0 && s.t_end >= s.dt && s.record_every >= 1) {
            return Err(SwarmError::Config(format!(
                "sim needs dt > 0, t_end >= dt, record_every >= 1; got {s:?}"
            )));
        }
        if let InitSpec::Explicit { state } = &self.init {
            if state.n() != self.params.n {
                return Err(SwarmError::Config(format!(
                    "explicit state has {} agents, params.N = {}",
                    state.n(),
                    self.params.n
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.variants {
            if !seen.insert(v.label.as_str()) || v.label.is_empty() || v.label == "main" {
                return Err(SwarmError::Config(format!("variant label '{}' is empty, reserved or repeated", v.label)));
            }
        }
        Ok(())
    }

    /// A copy with one dotted key set to `value`; the result is re-validated.
    pub fn with_override(&self, key: &str, value: Value) -> Result<Scenario> {
        let mut v = serde_json::to_value(self).expect("scenario serializes");
        set_path(&mut v, key, value)?;
        let s: Scenario = serde_json::from_value(v)?;
        s.validate()?;
        Ok(s)
    }

    /// The variant runs as standalone scenarios (without further variants).
    pub fn expand(&self) -> Result<Vec<(String, Scenario)>> {
        let mut base = self.clone();
        base.variants.clear();
        let mut out = vec![("main".to_string(), base.clone())];
        for var in &self.variants {
            let mut s = base.clone();
            for (k, v) in &var.set {
                s = s.with_override(k, v.clone())?;
            }
            out.push((var.label.clone(), s));
        }
        Ok(out)
    }

    fn options(&self, o: &PipelineOptions) -> PipelineOptions {
        PipelineOptions {
            dt: self.sim.dt,
            record_every: self.sim.record_every,
            ..*o
        }
    }

    fn solved_radius(&self, kind: RingType) -> Result<f64> {
        solve_ring_radius(&self.potential, &self.params, self.params.n, kind)
    }

    /// Build the initial state.
    pub fn initial_state(&self) -> Result<SwarmState> {
        let n = self.params.n;
        let c = self.params.cruise_speed();
        match &self.init {
            InitSpec::Explicit { state } => Ok(state.clone()),
            InitSpec::Random { bounds, speed_disk } => RandomInit {
                bounds: *bounds,
                speed_disk: *speed_disk,
            }
            .sample(n, self.sim.seed),
            InitSpec::Ring {
                ring,
                radius,
                radius_scale,
                center,
                phase,
                orientation,
                heading,
                gamma0,
            } => {
                let r = match radius {
                    Some(r) => *r,
                    None => self.solved_radius(*ring)?,
                } * radius_scale;
                let (spec, kind) = match ring {
                    RingType::Mill => (RingSpec::mill(*center, r, *phase, *orientation, &self.params), RingKind::Mill),
                    RingType::Flock => (
                        RingSpec::flock(*center, r, *phase, n),
                        RingKind::Flock {
                            v_bar: Vec2::polar(c, *heading),
                        },
                    ),
                };
                let mut s = ring_state(&spec, &self.params, kind)?;
                for v in s.v.iter_mut() {
                    *v = v.rotate(*gamma0);
                }
                Ok(s)
            }
            InitSpec::Flock {
                bounds,
                heading,
                relax_tol,
            } => {
                let cloud = RandomInit {
                    bounds: *bounds,
                    speed_disk: 0.0,
                }
                .sample(n, self.sim.seed)?;
                let relaxed = relax_positions(&self.potential, &cloud.x, *relax_tol, 1_000_000)?;
                SwarmState::new(0.0, relaxed.x, vec![Vec2::polar(c, *heading); n])
            }
        }
    }

    /// Explicit targets, completed by what the run itself aims at.
    pub fn resolved_targets(&self) -> Result<Targets> {
        let mut t = self.targets;
        let (radius, heading) = match &self.run {
            RunSpec::FlockPipeline { heading, .. } => (None, Some(*heading)),
            RunSpec::MillPipeline { clusters, .. } => match clusters.as_slice() {
                [] => (Some(self.solved_radius(RingType::Mill)?), None),
                [c] => (Some(c.radius), None),
                _ => (None, None),
            },
            RunSpec::FlockToFlock { theta_t, .. } => (None, Some(*theta_t)),
            RunSpec::MillToFlock { heading, r_f, .. } => (
                Some(match r_f {
                    Some(r) => *r,
                    None => self.solved_radius(RingType::Flock)?,
                }),
                Some(*heading),
            ),
            RunSpec::RingConstruction { r_to, .. } => (
                Some(match r_to {
                    Some(r) => *r,
                    None => self.solved_radius(RingType::Mill)?,
                }),
                None,
            ),
            _ => (None, None),
        };
        t.radius = t.radius.or(radius);
        t.heading = t.heading.or(heading);
        Ok(t)
    }

    /// Run the main part from `init`.
    pub fn execute(&self, init: &SwarmState) -> Result<Trajectory> {
        let pot = &self.potential;
        let params = &self.params;
        let c = params.cruise_speed();
        match &self.run {
            RunSpec::Law { law } => {
                let law = law.build(pot, params)?;
                let cfg = SimConfig {
                    dt: self.sim.dt,
                    t_end: init.t + self.sim.t_end,
                    record_every: self.sim.record_every,
                    seed: self.sim.seed,
                    ..SimConfig::default()
                };
                simulate(init, pot, params, &law, &cfg)
            }
            RunSpec::Plan { phases, options } => run_plan(init, pot, params, phases, &self.options(options)),
            RunSpec::FlockPipeline { heading, eps, options } => {
                flock_pipeline(init, pot, params, Vec2::polar(c, *heading), *eps, &self.options(options))
            }
            RunSpec::MillPipeline { clusters, eps, options } => {
                let clusters = if clusters.is_empty() {
                    vec![MillCluster::whole(Vec2::ZERO, self.solved_radius(RingType::Mill)?, params.n)]
                } else {
                    clusters.clone()
                };
                mill_pipeline_clusters(init, pot, params, &clusters, *eps, &self.options(options))
            }
            RunSpec::FlockToFlock {
                theta0,
                theta_t,
                t_total,
                envelope,
                options,
            } => {
                let plan = QuasiStaticPlan::new(params, *theta0, *theta_t, *t_total);
                flock_to_flock(init, pot, params, plan, *envelope, &self.options(options))
            }
            RunSpec::MillToFlock {
                heading, spec, options, ..
            } => {
                let r_f = self.resolved_targets()?.radius.unwrap_or(1.0);
                mill_to_flock(init, pot, params, Vec2::polar(c, *heading), r_f, *spec, &self.options(options))
            }
            RunSpec::Blowup { eta, big_l, options } => {
                blowup_pipeline(init, pot, params, *eta, *big_l, &self.options(options))
            }
            RunSpec::RingConstruction {
                eta,
                big_l,
                radius,
                duration,
                r_bar,
                options,
                ..
            } => {
                let r_to = self.resolved_targets()?.radius.unwrap_or(1.0);
                ring_pipeline(
                    init,
                    pot,
                    params,
                    *eta,
                    *big_l,
                    *radius,
                    r_to,
                    *duration,
                    r_bar.unwrap_or(r_to),
                    self.sim.seed,
                    &self.options(options),
                )
            }
        }
    }

    fn execute_baseline(&self, init: &SwarmState) -> Result<Option<Trajectory>> {
        let Some(law) = &self.baseline else { return Ok(None) };
        let law = law.build(&self.potential, &self.params)?;
        let cfg = SimConfig {
            dt: self.sim.dt,
            t_end: init.t + self.sim.t_end,
            record_every: self.sim.record_every,
            seed: self.sim.seed,
            ..SimConfig::default()
        };
        simulate(init, &self.potential, &self.params, &law, &cfg).map(Some)
    }
}

fn wrap_angle(a: f64) -> f64 {
    a.sin().atan2(a.cos())
}

/// Every metric that applies to `traj`, keyed by its snake_case name.
pub fn compute_metrics(
    traj: &Trajectory,
    params: &ModelParams,
    targets: &Targets,
    dt: f64,
) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    let mut put = |k: Metric, v: f64| {
        m.insert(k.key(), v);
    };
    if traj.is_empty() {
        return m;
    }
    let f = traj.final_state();
    let last = traj.len() - 1;
    let c = params.cruise_speed();
    let o = traj.order[last];
    put(Metric::FinalTime, f.t);
    put(Metric::FinalMaxSpeed, traj.max_speed[last]);
    put(Metric::FinalMaxForce, traj.max_force[last]);
    put(Metric::FinalPolarization, o.polarization);
    put(Metric::FinalAngMomentum, o.ang_momentum);
    put(Metric::FinalMeanSpeed, o.mean_speed);
    put(Metric::FinalMeanRadius, o.mean_radius);
    put(Metric::FinalSpeedDev, f.v.iter().map(|v| (v.norm() - c).abs()).fold(0.0, f64::max));
    if f.n() >= 2 {
        put(Metric::FinalMinDistance, min_pair_distance(&f.x).0);
        let path = traj.states.iter().map(|s| min_pair_distance(&s.x).0).fold(f64::INFINITY, f64::min);
        put(Metric::PathMinDistance, path);
        let placement = traj
            .phases
            .iter()
            .filter(|p| p.name.starts_with("radial:") || p.name == "equidistribute")
            .flat_map(|p| traj.states[p.first_sample..=p.last_sample].iter())
            .map(|s| min_pair_distance(&s.x).0)
            .fold(f64::INFINITY, f64::min);
        if placement.is_finite() {
            put(Metric::PlacementMinDistance, placement);
        }
    }
    put(
        Metric::FinalMillDiagnostics,
        crate::analysis::mill_diagnostics_with(f, params, targets.radius).max(),
    );
    if let Some(r) = targets.radius {
        put(Metric::FinalRadiusAbsError, (o.mean_radius - r).abs());
        put(Metric::FinalRadiusRelError, (o.mean_radius - r).abs() / r);
    }
    if let Some(h) = targets.heading {
        put(Metric::HeadingError, wrap_angle(f.mean_velocity().angle() - h).abs());
        if traj.phases.iter().any(|p| p.name == "rotate") {
            put(Metric::HeadingLag, transition_report(traj, params, h).lag);
        }
    }
    put(Metric::RelativeDrift, relative_drift(&f.x, &traj.states[0].x));
    put(Metric::MaxControl, traj.max_control());
    put(Metric::SaturatedFraction, traj.saturated_fraction(params.m));
    let excess = traj
        .energy
        .windows(2)
        .map(|w| w[1] - w[0] - 10.0 * dt * dt * w[0].abs().max(1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    if excess.is_finite() {
        put(Metric::EnergyExcess, excess);
    }
    let audits = extraction_audit(traj);
    if !audits.is_empty() {
        let worst = audits.iter().map(|a| a.max_decrease / a.end.max(1e-300)).fold(0.0, f64::max);
        put(Metric::ExtractionDecrease, worst);
    }
    m
}

fn evaluate_checks(
    checks: &[Check],
    metrics: &BTreeMap<String, f64>,
    baseline: Option<&BTreeMap<String, f64>>,
) -> Vec<CheckResult> {
    checks
        .iter()
        .map(|ch| {
            let source = match ch.on {
                CheckTarget::Main => Some(metrics),
                CheckTarget::Baseline => baseline,
            };
            let actual = source.and_then(|m| m.get(&ch.metric.key()).copied());
            CheckResult {
                check: ch.describe(),
                actual,
                passed: actual.is_some_and(|a| ch.passes(a)),
            }
        })
        .collect()
}

/// Run a scenario and all its variants. Runs whose initial-condition settings coincide share the
/// (possibly expensive) initial state.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioOutcome> {
    scenario.validate()?;
    let mut cache: Vec<(String, SwarmState)> = Vec::new();
    let mut runs = Vec::new();
    for (label, s) in scenario.expand()? {
        let key = serde_json::to_string(&(&s.init, &s.potential, &s.params, s.sim.seed)).expect("serializes");
        let init = match cache.iter().find(|(k, _)| *k == key) {
            Some((_, st)) => st.clone(),
            None => {
                let st = s.initial_state()?;
                cache.push((key, st.clone()));
                st
            }
        };
        let started = std::time::Instant::now();
        let trajectory = s.execute(&init)?;
        let baseline = s.execute_baseline(&init)?;
        log::info!("scenario {} run '{label}' took {:.1?}", s.name, started.elapsed());
        let targets = s.resolved_targets()?;
        let metrics = compute_metrics(&trajectory, &s.params, &targets, s.sim.dt);
        let baseline_metrics = baseline.as_ref().map(|b| compute_metrics(b, &s.params, &targets, s.sim.dt));
        let checks = evaluate_checks(&s.checks, &metrics, baseline_metrics.as_ref());
        runs.push(RunOutcome {
            label,
            scenario: s,
            targets,
            trajectory,
            baseline,
            metrics,
            baseline_metrics,
            checks,
        });
    }
    Ok(ScenarioOutcome {
        name: scenario.name.clone(),
        seed: scenario.sim.seed,
        runs,
    })
}

/// Used by registry entries to state headings.
pub const HALF_PI: f64 = PI / 2.0;
