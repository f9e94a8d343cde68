//! Pluggable search strategies behind one interface.
//!
//! Strategies see only a [`StrategyContext`] — estimates, arena dimensions,
//! their own seeded stream, and the optional shared blackboard. There is no
//! path from here to ground truth.

mod explore_exploit;
mod lawnmower;
mod random_walk;
mod spoke;

pub use explore_exploit::{ExploreExploit, ExploreExploitParams};
pub use lawnmower::{plan_waypoints, stripe_bounds, Lawnmower, LawnmowerParams};
pub use random_walk::{RandomWalk, RandomWalkParams};
pub use spoke::{Spoke, SpokeParams};

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::controller::{BehaviorCommand, SteerLimits};
use crate::sensors::SensorFrame;

/// Everything a strategy may consult when proposing a command.
pub struct StrategyContext<'a> {
    pub robot_id: u32,
    pub robot_count: u32,
    pub arena_side: f64,
    pub zone_side: f64,
    pub est: &'a crate::ekf::PoseEstimatePair,
    pub tick: u64,
    pub dt: f64,
    /// True on the tick right after this robot's grasp succeeded.
    pub just_grasped: bool,
    /// This robot's dedicated strategy stream.
    pub rng: &'a mut ChaCha8Rng,
    /// Shared found-site announcements, if the strategy opted in.
    pub blackboard: Option<&'a Blackboard>,
}

/// A found-site announcement a strategy wants to publish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SitePost {
    pub x: f64,
    pub y: f64,
}

/// A search strategy: observes every tick, proposes when the search layer
/// is active. Output must be a pure function of (context, own stream).
pub trait SearchStrategy {
    fn name(&self) -> &'static str;

    /// Called once per tick with the robot's percepts, regardless of which
    /// behavior layer won arbitration. May announce a site.
    fn observe(&mut self, _ctx: &mut StrategyContext<'_>, _frame: &SensorFrame) -> Option<SitePost> {
        None
    }

    /// Called when no higher-priority layer claimed the tick.
    fn propose(&mut self, ctx: &mut StrategyContext<'_>) -> BehaviorCommand;
}

/// A published cluster site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub x: f64,
    pub y: f64,
    pub last_refresh_tick: u64,
}

/// Shared site announcements. Posts queue during a tick and apply between
/// ticks in submission order, so rounds stay deterministic regardless of the
/// order robots are evaluated. An optional latency models the wireless link.
#[derive(Debug, Clone)]
pub struct Blackboard {
    sites: Vec<Site>,
    pending: Vec<(SitePost, u64)>,
    latency_ticks: u64,
    t_stale_ticks: u64,
    merge_radius: f64,
}

impl Blackboard {
    pub fn new(latency_ticks: u64, t_stale_ticks: u64, merge_radius: f64) -> Self {
        Self {
            sites: Vec::new(),
            pending: Vec::new(),
            latency_ticks,
            t_stale_ticks,
            merge_radius,
        }
    }

    /// Queue a post made during `now_tick`; it becomes visible after the
    /// configured latency.
    pub fn submit(&mut self, post: SitePost, now_tick: u64) {
        self.pending.push((post, now_tick + self.latency_ticks));
    }

    /// Apply due posts and drop stale sites. Call exactly once between ticks.
    pub fn end_of_tick(&mut self, now_tick: u64) {
        let mut due = Vec::new();
        self.pending.retain(|(post, visible_at)| {
            if *visible_at <= now_tick {
                due.push(*post);
                false
            } else {
                true
            }
        });
        for post in due {
            let merged = self.sites.iter_mut().find(|s| {
                (s.x - post.x).hypot(s.y - post.y) <= self.merge_radius
            });
            match merged {
                Some(site) => {
                    site.x = post.x;
                    site.y = post.y;
                    site.last_refresh_tick = now_tick;
                }
                None => self.sites.push(Site {
                    x: post.x,
                    y: post.y,
                    last_refresh_tick: now_tick,
                }),
            }
        }
        let stale = self.t_stale_ticks;
        self.sites
            .retain(|s| now_tick.saturating_sub(s.last_refresh_tick) < stale);
    }

    /// The most recently refreshed site (earliest such, on ties).
    pub fn freshest(&self) -> Option<&Site> {
        let mut best: Option<&Site> = None;
        for s in &self.sites {
            if best.is_none_or(|b| s.last_refresh_tick > b.last_refresh_tick) {
                best = Some(s);
            }
        }
        best
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("invalid strategy parameter: {0}")]
    InvalidParam(String),
}

/// Which strategy to run, with its parameters. Built once per robot per
/// round.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategySpec {
    RandomWalk(RandomWalkParams),
    Spoke(SpokeParams),
    Lawnmower(LawnmowerParams),
    ExploreExploit {
        params: ExploreExploitParams,
        base: Box<StrategySpec>,
    },
}

impl StrategySpec {
    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::RandomWalk(_) => "random_walk",
            StrategySpec::Spoke(_) => "spoke",
            StrategySpec::Lawnmower(_) => "lawnmower",
            StrategySpec::ExploreExploit { .. } => "explore_exploit",
        }
    }

    /// Does this strategy family need the shared blackboard?
    pub fn uses_blackboard(&self) -> bool {
        matches!(self, StrategySpec::ExploreExploit { .. })
    }
}

/// Per-robot facts a strategy needs at construction time.
#[derive(Debug, Clone, Copy)]
pub struct StrategyEnv {
    pub robot_id: u32,
    pub robot_count: u32,
    pub arena_side: f64,
    pub zone_side: f64,
    pub camera_range: f64,
    pub steer: SteerLimits,
    pub goal_tolerance: f64,
}

/// Validate the spec and build a strategy instance for one robot. All static
/// waypoints are constructed inside the arena or the build is rejected.
pub fn build_strategy(
    spec: &StrategySpec,
    env: &StrategyEnv,
) -> Result<Box<dyn SearchStrategy>, StrategyError> {
    match spec {
        StrategySpec::RandomWalk(p) => Ok(Box::new(RandomWalk::new(p.clone(), env)?)),
        StrategySpec::Spoke(p) => Ok(Box::new(Spoke::new(p.clone(), env)?)),
        StrategySpec::Lawnmower(p) => Ok(Box::new(Lawnmower::new(p.clone(), env)?)),
        StrategySpec::ExploreExploit { params, base } => {
            if matches!(**base, StrategySpec::ExploreExploit { .. }) {
                return Err(StrategyError::InvalidParam(
                    "explore_exploit cannot wrap itself".into(),
                ));
            }
            let base_built = build_strategy(base, env)?;
            Ok(Box::new(ExploreExploit::new(params.clone(), base_built, env)?))
        }
    }
}
