//! Boustrophedon coverage: the arena splits into one vertical stripe per
//! robot; each robot mows its stripe in alternating full-height tracks
//! spaced so the camera sweep leaves no gaps.

use serde::{Deserialize, Serialize};

use crate::controller::{goal_reached, navigate_to, BehaviorCommand, SteerLimits};
use crate::strategy::{SearchStrategy, StrategyContext, StrategyEnv, StrategyError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LawnmowerParams {
    /// Track spacing as a fraction of twice the camera range; values below 1
    /// overlap adjacent sweeps.
    pub overlap: f64,
    /// Clearance kept from the walls, meters.
    pub wall_margin: f64,
}

impl Default for LawnmowerParams {
    fn default() -> Self {
        Self {
            overlap: 0.75,
            wall_margin: 0.3,
        }
    }
}

pub struct Lawnmower {
    waypoints: Vec<(f64, f64)>,
    index: usize,
    steer: SteerLimits,
    goal_tolerance: f64,
}

impl Lawnmower {
    pub fn new(params: LawnmowerParams, env: &StrategyEnv) -> Result<Self, StrategyError> {
        if !(params.overlap > 0.0 && params.overlap <= 1.0) {
            return Err(StrategyError::InvalidParam("overlap must be in (0, 1]".into()));
        }
        let waypoints = plan_waypoints(
            env.robot_id,
            env.robot_count,
            env.arena_side,
            env.camera_range,
            params.overlap,
            params.wall_margin,
        );
        let half = env.arena_side / 2.0;
        if waypoints.iter().any(|&(x, y)| x.abs() > half || y.abs() > half) {
            return Err(StrategyError::InvalidParam("waypoint outside arena".into()));
        }
        Ok(Self {
            waypoints,
            index: 0,
            steer: env.steer,
            goal_tolerance: env.goal_tolerance,
        })
    }

    /// The planned track polyline (exposed for coverage checks).
    pub fn waypoints(&self) -> &[(f64, f64)] {
        &self.waypoints
    }
}

/// Boustrophedon waypoints for robot `robot_id` of `robot_count`.
///
/// Stripe i spans x in [lo + i*w, lo + (i+1)*w] with w = side/count. Track
/// x-positions are centered within the stripe at spacing <= 2 * camera_range
/// * overlap, so every point of the stripe lies within camera range of some
/// track. Tracks run the full arena height minus the wall margin, and the
/// path alternates direction track to track.
pub fn plan_waypoints(
    robot_id: u32,
    robot_count: u32,
    arena_side: f64,
    camera_range: f64,
    overlap: f64,
    wall_margin: f64,
) -> Vec<(f64, f64)> {
    let half = arena_side / 2.0;
    let stripe_w = arena_side / robot_count as f64;
    let x_lo = -half + robot_id as f64 * stripe_w;

    let max_spacing = 2.0 * camera_range * overlap;
    let tracks = (stripe_w / max_spacing).ceil().max(1.0) as usize;
    let spacing = stripe_w / tracks as f64;

    let y_lo = -(half - wall_margin);
    let y_hi = half - wall_margin;
    let x_lim = half - wall_margin;

    let mut waypoints = Vec::with_capacity(tracks * 2);
    for j in 0..tracks {
        let x = (x_lo + (j as f64 + 0.5) * spacing).clamp(-x_lim, x_lim);
        if j % 2 == 0 {
            waypoints.push((x, y_lo));
            waypoints.push((x, y_hi));
        } else {
            waypoints.push((x, y_hi));
            waypoints.push((x, y_lo));
        }
    }
    waypoints
}

/// Stripe x-interval owned by one robot.
pub fn stripe_bounds(robot_id: u32, robot_count: u32, arena_side: f64) -> (f64, f64) {
    let half = arena_side / 2.0;
    let w = arena_side / robot_count as f64;
    (-half + robot_id as f64 * w, -half + (robot_id + 1) as f64 * w)
}

impl SearchStrategy for Lawnmower {
    fn name(&self) -> &'static str {
        "lawnmower"
    }

    fn propose(&mut self, ctx: &mut StrategyContext<'_>) -> BehaviorCommand {
        let (x, y) = ctx.est.global.position();
        if goal_reached(self.waypoints[self.index], x, y, self.goal_tolerance) {
            self.index = (self.index + 1) % self.waypoints.len(); // wrap to restart
        }
        navigate_to(self.waypoints[self.index], x, y, ctx.est.global.heading(), &self.steer)
    }
}
