use std::fmt::Write as _;

use serde::Serialize;

use super::trajectory::Trajectory;

/// Trajectory as CSV with header `t,agent,x1,x2,v1,v2,u1,u2`, one row per agent per sample.
///
/// Numbers use Rust's shortest round-trip decimal formatting, so identical trajectories give
/// byte-identical files on every platform.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.n_agents();
    let mut s = String::with_capacity(64 * n * traj.len() + 32);
    s.push_str("t,agent,x1,x2,v1,v2,u1,u2\n");
    for (k, st) in traj.states.iter().enumerate() {
        let u = &traj.controls[k];
        for i in 0..st.n() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                st.t, i, st.x[i].x, st.x[i].y, st.v[i].x, st.v[i].y, u[i].x, u[i].y
            );
        }
    }
    s
}

/// Per-sample scalar series written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Summary<'a> {
    pub times: &'a [f64],
    #[serde(rename = "V")]
    pub energy: &'a [f64],
    pub polarization: Vec<f64>,
    pub ang_momentum: Vec<f64>,
    pub mean_radius: Vec<f64>,
    pub mean_speed: Vec<f64>,
    pub max_speed: &'a [f64],
    pub max_force: &'a [f64],
    pub max_control: Vec<f64>,
    pub phases: &'a [super::trajectory::PhaseRecord],
}

pub fn summary(traj: &Trajectory) -> Summary<'_> {
    Summary {
        times: &traj.times,
        energy: &traj.energy,
        polarization: traj.polarization(),
        ang_momentum: traj.ang_momentum(),
        mean_radius: traj.mean_radius(),
        mean_speed: traj.mean_speed(),
        max_speed: &traj.max_speed,
        max_force: &traj.max_force,
        max_control: traj.recorded_max_u(),
        phases: &traj.phases,
    }
}

/// Summary sidecar as pretty-printed JSON.
pub fn summary_json(traj: &Trajectory) -> String {
    serde_json::to_string_pretty(&summary(traj)).expect("summary serializes")
}
