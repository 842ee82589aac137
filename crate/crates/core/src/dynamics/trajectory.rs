use serde::{Deserialize, Serialize};

use super::order::OrderParameters;
use crate::model::{SwarmState, Vec2};

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The stop predicate held.
    Predicate,
    /// The time horizon was reached.
    Horizon,
}

/// Boundaries and outcome of one phase of a multi-phase run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub name: String,
    pub law: String,
    pub predicate: String,
    pub t_start: f64,
    pub t_end: f64,
    /// Index of the first and last recorded sample that belong to this phase.
    pub first_sample: usize,
    pub last_sample: usize,
    pub stop: StopReason,
}

/// Time-indexed record of a run.
///
/// Samples are taken every `record_every` steps and always at the final state. Per-step
/// control statistics cover every step, recorded or not.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SwarmState>,
    /// Post-saturation control evaluated at each recorded state.
    pub controls: Vec<Vec<Vec2>>,
    pub energy: Vec<f64>,
    pub order: Vec<OrderParameters>,
    /// `max_i |F_i|` at each recorded state.
    pub max_force: Vec<f64>,
    /// `max_i |v_i|` at each recorded state.
    pub max_speed: Vec<f64>,
    /// Start time of every integration step.
    pub step_times: Vec<f64>,
    /// `max_i |u_i|` after saturation at the start of every step.
    pub step_max_u: Vec<f64>,
    /// `max_i |u_i|` requested by the law before saturation at the start of every step.
    pub step_max_request: Vec<f64>,
    pub phases: Vec<PhaseRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &SwarmState {
        self.states.last().expect("empty trajectory")
    }

    pub fn initial_state(&self) -> &SwarmState {
        self.states.first().expect("empty trajectory")
    }

    pub fn n_agents(&self) -> usize {
        self.states.first().map(|s| s.n()).unwrap_or(0)
    }

    /// Largest post-saturation control over all steps.
    pub fn max_control(&self) -> f64 {
        self.step_max_u.iter().copied().fold(0.0, f64::max)
    }

    /// Fraction of steps at which the law asked for more than `m`. Requests that exceed `m`
    /// only by rounding (laws that sit exactly on the bound) do not count.
    pub fn saturated_fraction(&self, m: f64) -> f64 {
        if self.step_max_request.is_empty() {
            return 0.0;
        }
        let cut = m * (1.0 + 1e-12);
        let k = self.step_max_request.iter().filter(|&&r| r > cut).count();
        k as f64 / self.step_max_request.len() as f64
    }

    /// Index of the last sample with time `<= t`.
    pub fn sample_at(&self, t: f64) -> Option<usize> {
        match self.times.partition_point(|&s| s <= t) {
            0 => None,
            k => Some(k - 1),
        }
    }

    /// Append a later run. A leading sample of `other` that repeats the current final time is
    /// dropped; phase sample indices are shifted.
    pub fn append(&mut self, mut other: Trajectory) {
        let skip = match (self.times.last(), other.times.first()) {
            (Some(&a), Some(&b)) if a == b => 1,
            _ => 0,
        };
        let offset = self.times.len() as isize - skip as isize;
        for p in other.phases.iter_mut() {
            p.first_sample = (p.first_sample as isize + offset).max(0) as usize;
            p.last_sample = (p.last_sample as isize + offset).max(0) as usize;
        }
        self.times.extend(other.times.drain(skip..));
        self.states.extend(other.states.drain(skip..));
        self.controls.extend(other.controls.drain(skip..));
        self.energy.extend(other.energy.drain(skip..));
        self.order.extend(other.order.drain(skip..));
        self.max_force.extend(other.max_force.drain(skip..));
        self.max_speed.extend(other.max_speed.drain(skip..));
        self.step_times.append(&mut other.step_times);
        self.step_max_u.append(&mut other.step_max_u);
        self.step_max_request.append(&mut other.step_max_request);
        self.phases.append(&mut other.phases);
    }

    pub fn polarization(&self) -> Vec<f64> {
        self.order.iter().map(|o| o.polarization).collect()
    }

    pub fn ang_momentum(&self) -> Vec<f64> {
        self.order.iter().map(|o| o.ang_momentum).collect()
    }

    pub fn mean_radius(&self) -> Vec<f64> {
        self.order.iter().map(|o| o.mean_radius).collect()
    }

    pub fn mean_speed(&self) -> Vec<f64> {
        self.order.iter().map(|o| o.mean_speed).collect()
    }

    /// `max_i |u_i|` of the recorded controls.
    pub fn recorded_max_u(&self) -> Vec<f64> {
        self.controls.iter().map(|u| crate::model::sup_norm(u)).collect()
    }
}
