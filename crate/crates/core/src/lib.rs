//! Deterministic 2D central-place-foraging swarm simulation.
//!
//! A small team of differential-drive robots with local sensing and noisy
//! localization searches a square arena for tagged resource cubes and hauls
//! them to a central collection zone. The crate provides the ground-truth
//! world and integrator, sensor and noise models, dual-EKF pose estimation,
//! a subsumption behavior controller, pluggable search strategies, and
//! seeded world generation. Rounds are bit-reproducible: the same seed and
//! configuration always produce the same world history.

pub mod controller;
pub mod ekf;
pub mod error;
pub mod params;
pub mod rng;
pub mod sensors;
pub mod setup;
pub mod sim;
pub mod strategy;
pub mod world;

pub use controller::{
    approach_and_grasp, controller_tick, goal_reached, navigate_to, BehaviorCommand,
    ControllerConfig, ControllerState, GripperAction, Mode, SteerLimits, TaskMode,
};
pub use ekf::{ekf_predict, ekf_update_gps, ekf_update_heading, EkfState, PoseEstimatePair};
pub use error::{SetupError, SimError};
pub use params::{ControllerParams, EkfParams, NoiseParams, SensorParams, SimConfig, SimParams};
pub use sensors::{
    gps_due, sample_nav, sense_camera, sense_ultrasound, RawNavSamples, SensorFrame, TagDetection,
    TagKind, UltrasoundReading,
};
pub use setup::{generate_world, ArenaPreset, ClusterSpec, DistributionKind, DistributionSpec};
pub use sim::{
    attempt_pickup, drop_cube, push_cube, step_world, ExecutedMotion, PushEffect, RobotCommand,
    StepEvent, StepOutcome,
};
pub use strategy::{
    build_strategy, plan_waypoints, stripe_bounds, Blackboard, ExploreExploitParams,
    LawnmowerParams, RandomWalkParams, SearchStrategy, Site, SitePost, SpokeParams,
    StrategyContext, StrategyEnv, StrategyError, StrategySpec,
};
pub use world::{
    unicycle_delta, wrap_angle, Arena, Cube, CubeState, Pose, RobotBody, WorldState,
};
