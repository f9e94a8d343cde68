//! Correlated random walk: hold a heading for a seeded duration, turn by a
//! Gaussian angle, repeat. The base-code search behavior.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::controller::{BehaviorCommand, GripperAction, SteerLimits};
use crate::strategy::{SearchStrategy, StrategyContext, StrategyEnv, StrategyError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomWalkParams {
    /// Std-dev of each turn angle, radians. Zero walks a straight line.
    pub sigma_turn: f64,
    /// Straight-run duration bounds, seconds.
    pub hold_min_s: f64,
    pub hold_max_s: f64,
}

impl Default for RandomWalkParams {
    fn default() -> Self {
        Self {
            sigma_turn: 0.8,
            hold_min_s: 2.0,
            hold_max_s: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    Hold { ticks_left: u64 },
    Turn { remaining: f64 },
}

pub struct RandomWalk {
    params: RandomWalkParams,
    steer: SteerLimits,
    phase: Option<Phase>,
}

impl RandomWalk {
    pub fn new(params: RandomWalkParams, env: &StrategyEnv) -> Result<Self, StrategyError> {
        if params.sigma_turn < 0.0 {
            return Err(StrategyError::InvalidParam("sigma_turn must be >= 0".into()));
        }
        if !(params.hold_min_s > 0.0) || params.hold_max_s < params.hold_min_s {
            return Err(StrategyError::InvalidParam(
                "hold bounds must satisfy 0 < min <= max".into(),
            ));
        }
        Ok(Self {
            params,
            steer: env.steer,
            phase: None,
        })
    }

    /// One turn-angle draw. Exposed so tests can characterize the
    /// distribution the walk actually samples from.
    pub fn draw_turn(rng: &mut ChaCha8Rng, sigma_turn: f64) -> f64 {
        Normal::new(0.0, sigma_turn)
            .expect("finite sigma")
            .sample(rng)
    }

    fn draw_hold_ticks(&self, rng: &mut ChaCha8Rng, dt: f64) -> u64 {
        let secs = rng.random_range(self.params.hold_min_s..=self.params.hold_max_s);
        ((secs / dt).round() as u64).max(1)
    }
}

impl SearchStrategy for RandomWalk {
    fn name(&self) -> &'static str {
        "random_walk"
    }

    fn propose(&mut self, ctx: &mut StrategyContext<'_>) -> BehaviorCommand {
        loop {
            match &mut self.phase {
                None => {
                    let ticks = self.draw_hold_ticks(ctx.rng, ctx.dt);
                    self.phase = Some(Phase::Hold { ticks_left: ticks });
                }
                Some(Phase::Hold { ticks_left }) if *ticks_left > 0 => {
                    *ticks_left -= 1;
                    return BehaviorCommand {
                        v: self.steer.v_max,
                        omega: 0.0,
                        gripper: GripperAction::None,
                    };
                }
                Some(Phase::Hold { .. }) => {
                    let turn = Self::draw_turn(ctx.rng, self.params.sigma_turn);
                    self.phase = Some(Phase::Turn { remaining: turn });
                }
                Some(Phase::Turn { remaining }) if remaining.abs() > 1e-9 => {
                    let omega = (*remaining / ctx.dt).clamp(-self.steer.omega_max, self.steer.omega_max);
                    *remaining -= omega * ctx.dt;
                    return BehaviorCommand {
                        v: 0.0,
                        omega,
                        gripper: GripperAction::None,
                    };
                }
                Some(Phase::Turn { .. }) => {
                    let ticks = self.draw_hold_ticks(ctx.rng, ctx.dt);
                    self.phase = Some(Phase::Hold { ticks_left: ticks });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ekf::PoseEstimatePair;
    use crate::params::EkfParams;
    use crate::rng::{stream, stream_rng};
    use crate::world::Pose;

    fn env() -> StrategyEnv {
        StrategyEnv {
            robot_id: 0,
            robot_count: 3,
            arena_side: 15.0,
            zone_side: 1.0,
            camera_range: 1.0,
            steer: SteerLimits {
                v_max: 0.2,
                omega_max: 1.0,
                k_heading: 2.0,
            },
            goal_tolerance: 0.5,
        }
    }

    fn collect_commands(seed: u64, sigma: f64, n: usize) -> Vec<BehaviorCommand> {
        let e = env();
        let mut s = RandomWalk::new(
            RandomWalkParams {
                sigma_turn: sigma,
                ..Default::default()
            },
            &e,
        )
        .unwrap();
        let est = PoseEstimatePair::at_pose(&Pose::new(0.0, 0.0, 0.0), &EkfParams::default());
        let mut rng = stream_rng(seed, stream::STRATEGY, 0);
        let mut out = Vec::new();
        for tick in 0..n as u64 {
            let mut ctx = StrategyContext {
                robot_id: 0,
                robot_count: 3,
                arena_side: 15.0,
                zone_side: 1.0,
                est: &est,
                tick,
                dt: 0.1,
                just_grasped: false,
                rng: &mut rng,
                blackboard: None,
            };
            out.push(s.propose(&mut ctx));
        }
        out
    }

    #[test]
    fn zero_sigma_walks_straight() {
        let cmds = collect_commands(3, 0.0, 500);
        assert!(cmds.iter().all(|c| c.omega == 0.0 && c.v == 0.2));
    }

    #[test]
    fn same_seed_gives_identical_command_sequence() {
        let a = collect_commands(42, 0.8, 800);
        let b = collect_commands(42, 0.8, 800);
        assert_eq!(a, b);
        let c = collect_commands(43, 0.8, 800);
        assert_ne!(a, c, "different seed should change the walk");
    }

    #[test]
    fn turn_angle_mean_within_clt_bound() {
        // 10,000 draws; |sample mean| <= 3 sigma / sqrt(n).
        let sigma = 0.8;
        let n = 10_000;
        let mut rng = stream_rng(7, stream::STRATEGY, 0);
        let sum: f64 = (0..n).map(|_| RandomWalk::draw_turn(&mut rng, sigma)).sum();
        let mean = sum / n as f64;
        let bound = 3.0 * sigma / (n as f64).sqrt();
        assert!(mean.abs() <= bound, "mean {mean} outside +-{bound}");
    }
}
