//! Explore-exploit role split over any base strategy.
//!
//! A robot that grasps a cube while seeing several more in the same frame
//! announces the spot on the shared blackboard. A configured fraction of the
//! swarm (lowest ids) exploits: they travel to the freshest site and comb it
//! with a local spiral. Everyone else keeps exploring with the base strategy.

use serde::{Deserialize, Serialize};

use crate::controller::{goal_reached, navigate_to, BehaviorCommand, SteerLimits};
use crate::sensors::{SensorFrame, TagKind};
use crate::strategy::{SearchStrategy, SitePost, StrategyContext, StrategyEnv, StrategyError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExploreExploitParams {
    /// Fraction of robots (by id order) assigned the exploiter role.
    pub rho: f64,
    /// Minimum other-cube detections in the grasp frame to call it a site.
    pub site_threshold: usize,
    /// Sites with no refresh for this long are dropped, seconds.
    pub t_stale_s: f64,
    /// Posts within this distance of an existing site refresh it, meters.
    pub merge_radius: f64,
}

impl Default for ExploreExploitParams {
    fn default() -> Self {
        Self {
            rho: 0.5,
            site_threshold: 2,
            t_stale_s: 120.0,
            merge_radius: 1.0,
        }
    }
}

/// Spiral sweep around a site anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SpiralState {
    anchor: (f64, f64),
    leg: u32,
}

pub struct ExploreExploit {
    params: ExploreExploitParams,
    base: Box<dyn SearchStrategy>,
    exploiter: bool,
    spiral: Option<SpiralState>,
    steer: SteerLimits,
    goal_tolerance: f64,
    half_side: f64,
}

/// Spiral legs advance ~0.9 rad per waypoint, growing out from the anchor so
/// consecutive rings stay within one camera sweep of each other.
const SPIRAL_STEP_ANGLE: f64 = 0.9;
const SPIRAL_R0: f64 = 0.4;
const SPIRAL_GROWTH: f64 = 0.2;
const SPIRAL_MAX_LEGS: u32 = 40;

impl ExploreExploit {
    pub fn new(
        params: ExploreExploitParams,
        base: Box<dyn SearchStrategy>,
        env: &StrategyEnv,
    ) -> Result<Self, StrategyError> {
        if !(0.0..=1.0).contains(&params.rho) {
            return Err(StrategyError::InvalidParam("rho must be in [0, 1]".into()));
        }
        if params.t_stale_s <= 0.0 {
            return Err(StrategyError::InvalidParam("t_stale_s must be > 0".into()));
        }
        let exploiter = (env.robot_id as f64) < params.rho * env.robot_count as f64;
        Ok(Self {
            params,
            base,
            exploiter,
            spiral: None,
            steer: env.steer,
            goal_tolerance: env.goal_tolerance,
            half_side: env.arena_side / 2.0,
        })
    }

    pub fn is_exploiter(&self) -> bool {
        self.exploiter
    }

    fn spiral_waypoint(&self, s: &SpiralState) -> (f64, f64) {
        let a = s.leg as f64 * SPIRAL_STEP_ANGLE;
        let r = SPIRAL_R0 + SPIRAL_GROWTH * s.leg as f64 * SPIRAL_STEP_ANGLE / std::f64::consts::TAU;
        let lim = self.half_side - 0.3;
        (
            (s.anchor.0 + r * a.cos()).clamp(-lim, lim),
            (s.anchor.1 + r * a.sin()).clamp(-lim, lim),
        )
    }
}

impl SearchStrategy for ExploreExploit {
    fn name(&self) -> &'static str {
        "explore_exploit"
    }

    fn observe(&mut self, ctx: &mut StrategyContext<'_>, frame: &SensorFrame) -> Option<SitePost> {
        if !ctx.just_grasped {
            return None;
        }
        let others = frame
            .detections
            .iter()
            .filter(|d| d.kind == TagKind::ResourceCube)
            .count();
        if others >= self.params.site_threshold {
            let (x, y) = ctx.est.global.position();
            return Some(SitePost { x, y });
        }
        None
    }

    fn propose(&mut self, ctx: &mut StrategyContext<'_>) -> BehaviorCommand {
        if self.exploiter {
            if let Some(site) = ctx.blackboard.and_then(|b| b.freshest()) {
                let anchor = (site.x, site.y);
                if self.spiral.is_none_or(|s| s.anchor != anchor) {
                    self.spiral = Some(SpiralState { anchor, leg: 0 });
                }
                let (x, y) = ctx.est.global.position();
                let theta = ctx.est.global.heading();
                let s = self.spiral.as_mut().expect("just set");

                // Travel leg: head for the anchor until close.
                if s.leg == 0 && !goal_reached(anchor, x, y, 2.0 * self.goal_tolerance) {
                    return navigate_to(anchor, x, y, theta, &self.steer);
                }
                if s.leg == 0 {
                    s.leg = 1;
                }
                let target = self.spiral_waypoint(self.spiral.as_ref().expect("set above"));
                if goal_reached(target, x, y, self.goal_tolerance) {
                    let s = self.spiral.as_mut().expect("set above");
                    s.leg = if s.leg >= SPIRAL_MAX_LEGS { 1 } else { s.leg + 1 };
                }
                let target = self.spiral_waypoint(self.spiral.as_ref().expect("set above"));
                return navigate_to(target, x, y, theta, &self.steer);
            }
            self.spiral = None;
        }
        self.base.propose(ctx)
    }
}
