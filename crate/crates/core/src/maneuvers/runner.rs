use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::dynamics::{simulate_until, ControlLaw, PhaseRecord, SimConfig, StopPredicate, StopReason, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, RadialPotential, SwarmState};

/// Integration settings shared by every phase of a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineOptions {
    pub dt: f64,
    pub record_every: usize,
    /// Hard cap on phases that end on a state condition.
    pub phase_cap: f64,
    /// Length of the final hold phase.
    pub hold: f64,
    /// Fraction of the cruise speed injected before the heteroclinic phase.
    pub nu: f64,
    /// Duration of the injection and placement ramps.
    pub ramp: f64,
    /// PD gains of double-integrator tracking.
    pub k1: f64,
    pub k2: f64,
    /// JQ gain as a multiple of its lower bound; values near 1 damp the slow modes least.
    pub jq_factor: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            dt: 1e-2,
            record_every: 10,
            phase_cap: 1000.0,
            hold: 30.0,
            nu: 0.1,
            ramp: 10.0,
            k1: 1.0,
            k2: 2.0,
            jq_factor: 1.1,
        }
    }
}

impl PipelineOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.phase_cap > 0.0 && self.hold >= 0.0 && self.ramp > 0.0) {
            return Err(SwarmError::Param("pipeline dt, phase_cap, ramp must be > 0 and hold >= 0".into()));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(SwarmError::Param(format!("nu must lie in (0, 1], got {}", self.nu)));
        }
        if !(self.k1 > 0.0 && self.k2 > 0.0) {
            return Err(SwarmError::Param("PD gains must be positive".into()));
        }
        if !(self.jq_factor > 1.0) {
            return Err(SwarmError::Param(format!("jq_factor must be > 1, got {}", self.jq_factor)));
        }
        if self.record_every == 0 {
            return Err(SwarmError::Param("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Runs phases back to back, concatenating their trajectories and recording boundaries.
pub struct PhaseRunner<'a> {
    pot: &'a RadialPotential,
    params: &'a ModelParams,
    dt: f64,
    record_every: usize,
    state: SwarmState,
    traj: Trajectory,
}

impl<'a> PhaseRunner<'a> {
    pub fn new(init: &SwarmState, pot: &'a RadialPotential, params: &'a ModelParams, dt: f64, record_every: usize) -> Self {
        PhaseRunner {
            pot,
            params,
            dt,
            record_every,
            state: init.clone(),
            traj: Trajectory::default(),
        }
    }

    pub fn with_options(init: &SwarmState, pot: &'a RadialPotential, params: &'a ModelParams, opts: &PipelineOptions) -> Self {
        Self::new(init, pot, params, opts.dt, opts.record_every)
    }

    pub fn state(&self) -> &SwarmState {
        &self.state
    }

    pub fn pot(&self) -> &RadialPotential {
        self.pot
    }

    pub fn params(&self) -> &ModelParams {
        self.params
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    /// Run `law` for at most `max_duration`. With a stop condition, reaching the cap is a
    /// [`SwarmError::PhaseTimeout`] naming it.
    pub fn run(
        &mut self,
        name: &str,
        law: &dyn ControlLaw,
        stop: Option<(&str, &StopPredicate)>,
        max_duration: f64,
    ) -> Result<StopReason> {
        self.run_inner(name, law, stop, max_duration, true)
    }

    /// Like [`run`](Self::run) but the condition is a watchdog: reaching the horizon is the
    /// normal outcome and `StopReason::Predicate` reports that the watchdog fired.
    pub fn run_watched(
        &mut self,
        name: &str,
        law: &dyn ControlLaw,
        watch: (&str, &StopPredicate),
        duration: f64,
    ) -> Result<StopReason> {
        self.run_inner(name, law, Some(watch), duration, false)
    }

    fn run_inner(
        &mut self,
        name: &str,
        law: &dyn ControlLaw,
        stop: Option<(&str, &StopPredicate)>,
        max_duration: f64,
        timeout_is_error: bool,
    ) -> Result<StopReason> {
        let t_start = self.state.t;
        let cfg = SimConfig {
            dt: self.dt,
            t_end: t_start + max_duration,
            record_every: self.record_every,
            ..SimConfig::default()
        };
        let (mut part, reason) = simulate_until(&self.state, self.pot, self.params, law, &cfg, stop.map(|s| s.1))?;
        let predicate = stop.map(|s| s.0.to_string()).unwrap_or_else(|| "horizon".into());
        if timeout_is_error && stop.is_some() && reason == StopReason::Horizon {
            return Err(SwarmError::PhaseTimeout {
                phase: name.into(),
                predicate,
                t: part.final_state().t,
            });
        }
        log::info!("phase '{name}' ({}) ended at t = {:.4} ({reason:?})", law.name(), part.final_state().t);
        self.state = part.final_state().clone();
        part.phases.push(PhaseRecord {
            name: name.into(),
            law: law.name().into(),
            predicate,
            t_start,
            t_end: self.state.t,
            first_sample: 0,
            last_sample: part.len() - 1,
            stop: reason,
        });
        self.traj.append(part);
        Ok(reason)
    }

    pub fn finish(self) -> Trajectory {
        self.traj
    }
}
