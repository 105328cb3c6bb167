use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::params::ModelParams;
use crate::error::{Error, Result};

/// Largest level a simulated ray may reach before the path is aborted.
pub const LEVEL_CAP: u64 = 1 << 40;

/// A state of the star graph: the shared origin or `(ray, level)` with a
/// one-based ray index and `level >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarState {
    Origin,
    Ray { ray: u32, level: u64 },
}

impl StarState {
    /// Distance from the origin.
    pub fn level(&self) -> u64 {
        match self {
            StarState::Origin => 0,
            StarState::Ray { level, .. } => *level,
        }
    }
}

/// Jump times and post-jump states of one path. The first entry is
/// `(0, Origin)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub seed: u64,
    pub events: Vec<(f64, StarState)>,
}

impl Trajectory {
    /// State occupied at time `t`.
    pub fn state_at(&self, t: f64) -> StarState {
        let idx = self.events.partition_point(|(s, _)| *s <= t);
        self.events[idx.saturating_sub(1)].1
    }

    /// Checks that times increase strictly and every jump is an admissible
    /// transition for `d` rays.
    pub fn check(&self, d: u32) -> std::result::Result<(), String> {
        match self.events.first() {
            Some((t, StarState::Origin)) if *t == 0.0 => {}
            _ => return Err("trajectory must start at (0, Origin)".into()),
        }
        for w in self.events.windows(2) {
            let ((t0, s0), (t1, s1)) = (w[0], w[1]);
            if t1 <= t0 {
                return Err(format!("times not increasing at {t0} -> {t1}"));
            }
            let ok = match (s0, s1) {
                (StarState::Origin, StarState::Ray { ray, level }) => level == 1 && ray >= 1 && ray <= d,
                (StarState::Ray { level: 1, .. }, StarState::Origin) => true,
                (StarState::Ray { ray: r0, level: l0 }, StarState::Ray { ray: r1, level: l1 }) => {
                    r0 == r1 && (l1 == l0 + 1 || l1 + 1 == l0)
                }
                _ => false,
            };
            if !ok {
                return Err(format!("illegal jump {s0:?} -> {s1:?} at t = {t1}"));
            }
        }
        Ok(())
    }
}

/// Random stream for path `index` under `seed`: ChaCha8 keyed from the seed
/// with the path index as stream id, so paths are independent of scheduling.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Performs one jump from `state`; returns the holding time and new state.
#[inline]
pub(crate) fn jump(params: &ModelParams, state: StarState, rng: &mut ChaCha8Rng) -> (f64, StarState) {
    let e: f64 = rng.sample(Exp1);
    match state {
        StarState::Origin => {
            let rate = params.d as f64 * params.alpha;
            let ray = rng.random_range(1..=params.d);
            (e / rate, StarState::Ray { ray, level: 1 })
        }
        StarState::Ray { ray, level } => {
            let k = level as f64;
            let up = params.alpha + params.lambda * k;
            let down = params.mu * k;
            let total = up + down;
            let next = if rng.random::<f64>() * total < up {
                StarState::Ray { ray, level: level + 1 }
            } else if level == 1 {
                StarState::Origin
            } else {
                StarState::Ray { ray, level: level - 1 }
            };
            (e / total, next)
        }
    }
}

/// Advances `state` from time `t` to `t_end` and returns the state at `t_end`.
#[cfg(test)]
pub(crate) fn advance(
    params: &ModelParams,
    mut state: StarState,
    mut t: f64,
    t_end: f64,
    rng: &mut ChaCha8Rng,
) -> Result<StarState> {
    loop {
        let (dt, next) = jump(params, state, rng);
        if t + dt > t_end {
            return Ok(state);
        }
        t += dt;
        state = next;
        if let StarState::Ray { ray, level } = state {
            if level > LEVEL_CAP {
                return Err(Error::LevelOverflow {
                    ray,
                    time: t,
                    cap: LEVEL_CAP,
                });
            }
        }
    }
}

/// Simulates one path on `[0, t_end]` with the Gillespie algorithm, using
/// stream 0 of `seed`.
pub fn simulate_path(params: &ModelParams, t_end: f64, seed: u64) -> Result<Trajectory> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be finite and nonnegative, got {t_end}"
        )));
    }
    let mut rng = path_rng(seed, 0);
    let mut events = vec![(0.0, StarState::Origin)];
    let mut t = 0.0;
    let mut state = StarState::Origin;
    loop {
        let (dt, next) = jump(params, state, &mut rng);
        if t + dt > t_end {
            return Ok(Trajectory { seed, events });
        }
        t += dt;
        state = next;
        if let StarState::Ray { ray, level } = state {
            if level > LEVEL_CAP {
                return Err(Error::LevelOverflow {
                    ray,
                    time: t,
                    cap: LEVEL_CAP,
                });
            }
        }
        events.push((t, state));
    }
}
