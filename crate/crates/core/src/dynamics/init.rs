use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};
use crate::model::{SwarmState, Vec2};

/// Uniform positions in an axis-aligned box and uniform velocities in a disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RandomInit {
    /// `[x_min, y_min, x_max, y_max]`.
    #[serde(rename = "box")]
    pub bounds: [f64; 4],
    /// Radius of the velocity disk.
    pub speed_disk: f64,
}

impl RandomInit {
    /// Positions in `[-half, half]^2`, velocities in the disk of radius `speed`.
    pub fn centered(half: f64, speed: f64) -> Self {
        RandomInit {
            bounds: [-half, -half, half, half],
            speed_disk: speed,
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<SwarmState> {
        let [x0, y0, x1, y1] = self.bounds;
        if !(x1 > x0 && y1 > y0) || !(self.speed_disk >= 0.0) {
            return Err(SwarmError::Config(format!(
                "random init needs a nonempty box and a nonnegative speed disk, got {:?} and {}",
                self.bounds, self.speed_disk
            )));
        }
        let mut rng = rng_from_seed(seed);
        let x = (0..n)
            .map(|_| Vec2::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1)))
            .collect();
        let v = (0..n)
            .map(|_| {
                // uniform in the disk: radius ~ sqrt(U)
                let r = self.speed_disk * rng.gen::<f64>().sqrt();
                let th = rng.gen_range(0.0..std::f64::consts::TAU);
                Vec2::polar(r, th)
            })
            .collect();
        SwarmState::new(0.0, x, v)
    }
}

/// The crate-wide deterministic generator.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
