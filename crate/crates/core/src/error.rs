//! Error types for world stepping and world generation.

use thiserror::Error;

/// Errors raised while advancing the world.
#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("command references unknown robot id {0}")]
    UnknownRobot(u32),
    #[error("missing command for robot id {0}")]
    MissingCommand(u32),
    #[error("duplicate command for robot id {0}")]
    DuplicateCommand(u32),
    #[error("timestep must be positive and finite, got {0}")]
    InvalidTimestep(f64),
}

/// Errors raised while generating an initial world.
#[derive(Debug, Error, PartialEq)]
pub enum SetupError {
    #[error("robot count {0} outside the competition range 3..=6 for preset arenas")]
    RobotCount(u32),
    #[error(
        "infeasible packing: placed {placed} of {requested} cubes in a {side_length} m arena \
         (exclusion radius {exclusion_radius} m, min separation {min_separation} m)"
    )]
    InfeasiblePacking {
        requested: usize,
        placed: usize,
        side_length: f64,
        exclusion_radius: f64,
        min_separation: f64,
    },
    #[error("arena side {0} m cannot hold the collection zone and spawn ring")]
    ArenaTooSmall(f64),
    #[error("cluster spec invalid: {0}")]
    BadClusterSpec(String),
}
