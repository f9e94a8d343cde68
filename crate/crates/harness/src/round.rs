//! Seeded round execution: generate the world, loop sense -> control ->
//! step -> localize, score at the final tick, and emit the trace.
//!
//! A round is a pure function of its configuration. Wall-clock runtime is
//! measured for reporting but deliberately kept out of every serialized
//! artifact.

use std::time::{Duration, Instant};

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use forage_core::{
    build_strategy, controller_tick, generate_world, rng, sample_nav, sense_camera,
    sense_ultrasound, step_world, Blackboard, ControllerConfig, ControllerState, PoseEstimatePair,
    RawNavSamples, RobotCommand, SearchStrategy, SensorFrame, SimConfig, SitePost, StepEvent,
    StrategyContext, StrategyEnv, StrategySpec, WorldState,
};

use crate::config::RoundConfig;
use crate::error::HarnessError;
use crate::trace::TraceWriter;

/// Per-robot bookkeeping for the result record.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RobotStats {
    pub robot_id: u32,
    pub distance_traveled: f64,
    /// Successful banked drops (pushed-out cubes do not subtract here;
    /// they subtract from the score).
    pub cubes_banked: u32,
    pub grasp_attempts: u64,
    pub grasp_successes: u64,
    pub collisions_avoided: u64,
}

/// Scored outcome of one round.
#[derive(Debug, Clone, Serialize)]
pub struct RoundResult {
    pub score: u32,
    pub robots: Vec<RobotStats>,
    pub config_digest: String,
    /// Measured, not reproducible; excluded from serialization so result
    /// files stay byte-identical across reruns.
    #[serde(skip)]
    pub runtime: Duration,
}

/// Snapshot handed to observers after each tick: ground truth plus the
/// estimates that correspond to it.
pub struct TickObservation<'a> {
    pub tick: u64,
    pub world: &'a WorldState,
    pub estimates: &'a [PoseEstimatePair],
}

/// Run a round and keep the trace.
pub fn run_round(cfg: &RoundConfig) -> Result<(RoundResult, String), HarnessError> {
    let (result, trace) = run_round_inner(cfg, true, |_| {})?;
    Ok((result, trace.expect("trace requested")))
}

/// Run a round, invoking `observer` after every tick.
pub fn run_round_observed(
    cfg: &RoundConfig,
    observer: impl FnMut(&TickObservation<'_>),
) -> Result<(RoundResult, String), HarnessError> {
    let (result, trace) = run_round_inner(cfg, true, observer)?;
    Ok((result, trace.expect("trace requested")))
}

/// Score-only runner used by tournaments (skips trace assembly).
pub fn run_round_scored(cfg: &RoundConfig) -> Result<RoundResult, HarnessError> {
    Ok(run_round_inner(cfg, false, |_| {})?.0)
}

fn run_round_inner(
    cfg: &RoundConfig,
    want_trace: bool,
    mut observer: impl FnMut(&TickObservation<'_>),
) -> Result<(RoundResult, Option<String>), HarnessError> {
    cfg.validate()?;
    let started = Instant::now();

    let preset = cfg.arena.to_preset()?;
    let dist = cfg.distribution.to_spec()?;
    let spec = cfg.strategy.to_spec()?;

    let mut sim_cfg = SimConfig::default();
    sim_cfg.noise = cfg.noise.clone();
    sim_cfg.sim.pushing_enabled = cfg.features.pushing;
    let dt = sim_cfg.sim.dt;

    let mut world = generate_world(preset, cfg.robot_count, &dist, cfg.seed, &sim_cfg.sim)?;
    let ctrl_cfg = ControllerConfig::new(
        &sim_cfg.sim,
        &sim_cfg.sensors,
        &sim_cfg.controller,
        &world.arena,
    );
    let n = world.robots.len();

    // Per-robot state and streams.
    let mut estimates: Vec<PoseEstimatePair> = world
        .robots
        .iter()
        .map(|r| PoseEstimatePair::at_pose(&r.pose, &sim_cfg.ekf))
        .collect();
    let mut controllers: Vec<ControllerState> = vec![ControllerState::default(); n];
    let mut strategies: Vec<Box<dyn SearchStrategy>> = Vec::with_capacity(n);
    for r in &world.robots {
        let env = StrategyEnv {
            robot_id: r.id,
            robot_count: cfg.robot_count,
            arena_side: world.arena.side_length,
            zone_side: world.arena.zone_side,
            camera_range: sim_cfg.sensors.camera_range,
            steer: ctrl_cfg.steer,
            goal_tolerance: sim_cfg.controller.goal_tolerance,
        };
        strategies.push(build_strategy(&spec, &env)?);
    }
    let mut nav_rngs: Vec<ChaCha8Rng> = (0..n)
        .map(|i| rng::stream_rng(cfg.seed, rng::stream::NAV, i as u64))
        .collect();
    let mut cam_rngs: Vec<ChaCha8Rng> = (0..n)
        .map(|i| rng::stream_rng(cfg.seed, rng::stream::CAMERA, i as u64))
        .collect();
    let mut strat_rngs: Vec<ChaCha8Rng> = (0..n)
        .map(|i| rng::stream_rng(cfg.seed, rng::stream::STRATEGY, i as u64))
        .collect();
    let mut mech_rngs: Vec<ChaCha8Rng> = (0..n)
        .map(|i| rng::stream_rng(cfg.seed, rng::stream::MECH, i as u64))
        .collect();

    let mut blackboard = match &spec {
        StrategySpec::ExploreExploit { params, .. } => Blackboard::new(
            cfg.features.blackboard_latency_ticks,
            ((params.t_stale_s / dt).round() as u64).max(1),
            params.merge_radius,
        ),
        _ => Blackboard::new(cfg.features.blackboard_latency_ticks, 1, 1.0),
    };

    let digest = cfg.digest();
    let mut trace = want_trace.then(|| {
        TraceWriter::new(
            world.arena.side_length,
            world.arena.zone_side,
            dt,
            cfg.robot_count,
        )
    });
    if let Some(t) = trace.as_mut() {
        for (i, r) in world.robots.iter().enumerate() {
            t.state_row(
                0,
                0.0,
                r.id,
                &r.pose,
                &estimates[i].global.pose(),
                controllers[i].mode.label(),
                false,
                world.score(),
            );
        }
    }

    let mut stats: Vec<RobotStats> = world
        .robots
        .iter()
        .map(|r| RobotStats {
            robot_id: r.id,
            distance_traveled: 0.0,
            cubes_banked: 0,
            grasp_attempts: 0,
            grasp_successes: 0,
            collisions_avoided: 0,
        })
        .collect();

    // Navigation samples from "before the first step": zero executed motion.
    let mut nav_prev: Vec<RawNavSamples> = (0..n)
        .map(|i| {
            sample_nav(
                &world,
                world.robots[i].id,
                &Default::default(),
                &sim_cfg.noise,
                dt,
                &mut nav_rngs[i],
            )
        })
        .collect();
    let mut just_grasped = vec![false; n];

    let n_ticks = (cfg.duration_s / dt).round() as u64;
    for tick in 1..=n_ticks {
        // Sense the current world (state after tick-1 steps).
        let frames: Vec<SensorFrame> = (0..n)
            .map(|i| {
                let id = world.robots[i].id;
                SensorFrame {
                    robot_id: id,
                    tick,
                    ultrasound: sense_ultrasound(&world, id, &sim_cfg.sensors),
                    detections: sense_camera(
                        &world,
                        id,
                        &sim_cfg.sensors,
                        &sim_cfg.noise,
                        &mut cam_rngs[i],
                    ),
                    nav: nav_prev[i],
                    carrying: world.robots[i].carried_cube.is_some(),
                }
            })
            .collect();

        // Strategies watch every tick; posts queue for the blackboard.
        let mut posts: Vec<SitePost> = Vec::new();
        for i in 0..n {
            let mut ctx = StrategyContext {
                robot_id: world.robots[i].id,
                robot_count: cfg.robot_count,
                arena_side: world.arena.side_length,
                zone_side: world.arena.zone_side,
                est: &estimates[i],
                tick,
                dt,
                just_grasped: just_grasped[i],
                rng: &mut strat_rngs[i],
                blackboard: Some(&blackboard),
            };
            if let Some(post) = strategies[i].observe(&mut ctx, &frames[i]) {
                posts.push(post);
            }
        }
        for post in posts {
            blackboard.submit(post, tick);
        }

        // Controllers arbitrate and emit one command each.
        let mut commands: Vec<RobotCommand> = Vec::with_capacity(n);
        for i in 0..n {
            let mut ctx = StrategyContext {
                robot_id: world.robots[i].id,
                robot_count: cfg.robot_count,
                arena_side: world.arena.side_length,
                zone_side: world.arena.zone_side,
                est: &estimates[i],
                tick,
                dt,
                just_grasped: just_grasped[i],
                rng: &mut strat_rngs[i],
                blackboard: Some(&blackboard),
            };
            let command = controller_tick(
                &mut controllers[i],
                &frames[i],
                &estimates[i],
                strategies[i].as_mut(),
                &mut ctx,
                &ctrl_cfg,
            );
            commands.push(RobotCommand {
                robot_id: world.robots[i].id,
                command,
            });
        }

        let outcome = step_world(&mut world, &commands, dt, &sim_cfg.sim, &mut mech_rngs)?;

        // Localize against the post-step world so estimates line up with
        // ground truth at every observation point.
        for i in 0..n {
            nav_prev[i] = sample_nav(
                &world,
                world.robots[i].id,
                &outcome.executed[i],
                &sim_cfg.noise,
                dt,
                &mut nav_rngs[i],
            );
            estimates[i].advance(&nav_prev[i], dt, &sim_cfg.ekf, &sim_cfg.noise);
        }

        blackboard.end_of_tick(tick);

        just_grasped = vec![false; n];
        let time_s = world.sim_time;
        for event in &outcome.events {
            match *event {
                StepEvent::Pickup {
                    robot_id,
                    cube_id,
                    success,
                } => {
                    let i = world.robot_index(robot_id).expect("robot exists");
                    stats[i].grasp_attempts += 1;
                    if success {
                        stats[i].grasp_successes += 1;
                        just_grasped[i] = true;
                    }
                    if let Some(t) = trace.as_mut() {
                        let cube = cube_id.map_or_else(|| "-".to_string(), |c| c.to_string());
                        t.event_row(
                            tick,
                            time_s,
                            "PICKUP",
                            &[
                                &robot_id.to_string(),
                                &cube,
                                if success { "1" } else { "0" },
                            ],
                        );
                    }
                }
                StepEvent::Drop {
                    robot_id,
                    cube_id,
                    banked,
                } => {
                    if banked {
                        let i = world.robot_index(robot_id).expect("robot exists");
                        stats[i].cubes_banked += 1;
                    }
                    if let Some(t) = trace.as_mut() {
                        t.event_row(
                            tick,
                            time_s,
                            "DROP",
                            &[
                                &robot_id.to_string(),
                                &cube_id.to_string(),
                                if banked { "1" } else { "0" },
                            ],
                        );
                    }
                }
                StepEvent::PushOut { robot_id, cube_id } => {
                    if let Some(t) = trace.as_mut() {
                        t.event_row(
                            tick,
                            time_s,
                            "PUSH_OUT",
                            &[&robot_id.to_string(), &cube_id.to_string()],
                        );
                    }
                }
            }
        }

        if let Some(t) = trace.as_mut() {
            if tick % cfg.trace_interval_ticks == 0 {
                let score = world.score();
                for i in 0..n {
                    let r = &world.robots[i];
                    t.state_row(
                        tick,
                        time_s,
                        r.id,
                        &r.pose,
                        &estimates[i].global.pose(),
                        controllers[i].mode.label(),
                        r.carried_cube.is_some(),
                        score,
                    );
                }
            }
        }

        observer(&TickObservation {
            tick,
            world: &world,
            estimates: &estimates,
        });
    }

    for i in 0..n {
        stats[i].distance_traveled = world.robots[i].distance_traveled;
        stats[i].collisions_avoided = controllers[i].avoid_activations;
    }

    let trace_text = trace.map(|mut t| {
        t.final_cubes(&world, world.sim_time);
        t.finish()
    });

    let result = RoundResult {
        score: world.score(),
        robots: stats,
        config_digest: digest,
        runtime: started.elapsed(),
    };
    Ok((result, trace_text))
}
