//! Radial out-and-back search: each trip drives a spoke from the zone
//! vicinity to near the wall and returns, with a golden-ratio stagger so
//! successive trips sweep fresh bearings.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::controller::{goal_reached, navigate_to, BehaviorCommand, SteerLimits};
use crate::strategy::{SearchStrategy, StrategyContext, StrategyEnv, StrategyError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpokeParams {
    /// Angular resolution of the wheel: spoke k points at 2*pi*k/n_spokes.
    pub n_spokes: u32,
    /// Per-trip stagger fraction (golden ratio by default).
    pub gamma: f64,
    /// Spoke endpoint as a fraction of the arena half-side.
    pub endpoint_frac: f64,
    /// Radius of the return point near the zone, meters.
    pub return_radius: f64,
}

impl Default for SpokeParams {
    fn default() -> Self {
        Self {
            n_spokes: 8,
            gamma: 0.618,
            endpoint_frac: 0.9,
            return_radius: 1.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Leg {
    Outbound,
    Inbound,
}

pub struct Spoke {
    params: SpokeParams,
    steer: SteerLimits,
    goal_tolerance: f64,
    robot_id: u32,
    robot_count: u32,
    half_side: f64,
    trip: u64,
    leg: Leg,
}

impl Spoke {
    pub fn new(params: SpokeParams, env: &StrategyEnv) -> Result<Self, StrategyError> {
        if params.n_spokes == 0 {
            return Err(StrategyError::InvalidParam("n_spokes must be >= 1".into()));
        }
        if !(0.0 < params.endpoint_frac && params.endpoint_frac < 1.0) {
            return Err(StrategyError::InvalidParam(
                "endpoint_frac must be in (0, 1)".into(),
            ));
        }
        if params.return_radius >= env.arena_side / 2.0 {
            return Err(StrategyError::InvalidParam(
                "return_radius must be inside the arena".into(),
            ));
        }
        Ok(Self {
            params,
            steer: env.steer,
            goal_tolerance: env.goal_tolerance,
            robot_id: env.robot_id,
            robot_count: env.robot_count,
            half_side: env.arena_side / 2.0,
            trip: 0,
            leg: Leg::Outbound,
        })
    }

    /// Outbound bearing of trip `k` for this robot.
    pub fn bearing(&self, trip: u64) -> f64 {
        TAU * (self.robot_id as f64
            + trip as f64 * self.robot_count as f64 * self.params.gamma)
            / self.params.n_spokes as f64
    }

    /// Spoke endpoint, clamped inside the walls.
    pub fn outbound_target(&self, trip: u64) -> (f64, f64) {
        let b = self.bearing(trip);
        let r = self.params.endpoint_frac * self.half_side;
        let lim = self.half_side - 0.3;
        ((r * b.cos()).clamp(-lim, lim), (r * b.sin()).clamp(-lim, lim))
    }

    /// Return point near the zone, pre-aligned with the next spoke.
    fn inbound_target(&self, trip: u64) -> (f64, f64) {
        let b = self.bearing(trip + 1);
        (self.params.return_radius * b.cos(), self.params.return_radius * b.sin())
    }

    fn current_target(&self) -> (f64, f64) {
        match self.leg {
            Leg::Outbound => self.outbound_target(self.trip),
            Leg::Inbound => self.inbound_target(self.trip),
        }
    }
}

impl SearchStrategy for Spoke {
    fn name(&self) -> &'static str {
        "spoke"
    }

    fn propose(&mut self, ctx: &mut StrategyContext<'_>) -> BehaviorCommand {
        let (x, y) = ctx.est.global.position();
        if goal_reached(self.current_target(), x, y, self.goal_tolerance) {
            match self.leg {
                Leg::Outbound => self.leg = Leg::Inbound,
                Leg::Inbound => {
                    self.leg = Leg::Outbound;
                    self.trip += 1;
                }
            }
        }
        navigate_to(self.current_target(), x, y, ctx.est.global.heading(), &self.steer)
    }
}
