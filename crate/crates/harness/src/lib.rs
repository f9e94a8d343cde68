//! Competition harness: round configs, the seeded round runner, tournament
//! matrices, trace files, and SVG rendering.

pub mod config;
pub mod error;
pub mod round;
pub mod svg;
pub mod tournament;
pub mod trace;

pub use config::{
    ArenaConfig, ClusterEntry, DistributionConfig, FeatureFlags, RoundConfig, StrategyConfig,
};
pub use error::HarnessError;
pub use round::{
    run_round, run_round_observed, run_round_scored, RobotStats, RoundResult, TickObservation,
};
pub use svg::render_trace;
pub use tournament::{
    median, run_tournament, CellStats, MatrixConfig, RoundRecord, TournamentResult,
};
pub use trace::{parse_trace, EventRow, StateRow, TraceData, TraceWriter, TRACE_HEADER};
