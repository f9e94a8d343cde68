//! Per-robot subsumption controller.
//!
//! Four prioritized layers arbitrate every tick; exactly one emits the
//! command: collision avoidance, zone dropoff while carrying, cube
//! approach/grasp, and the pluggable search strategy. The controller sees
//! only its own robot's sensor frame and pose estimates — never ground
//! truth.

use thiserror::Error;

use crate::ekf::PoseEstimatePair;
use crate::params::{ControllerParams, SensorParams, SimParams};
use crate::sensors::{SensorFrame, TagDetection, TagKind};
use crate::strategy::{SearchStrategy, StrategyContext};
use crate::world::{wrap_angle, Arena};

/// What the gripper should do this tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GripperAction {
    #[default]
    None,
    Grasp,
    Release,
}

/// One tick's actuation request: forward speed, turn rate, gripper.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorCommand {
    /// m/s, in [0, v_max].
    pub v: f64,
    /// rad/s, in [-omega_max, omega_max].
    pub omega: f64,
    pub gripper: GripperAction,
}

impl BehaviorCommand {
    pub fn stop() -> Self {
        Self {
            v: 0.0,
            omega: 0.0,
            gripper: GripperAction::None,
        }
    }
}

/// The task the robot is working on when no obstacle preempts it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskMode {
    Searching,
    Approaching,
    Grasping,
    Transporting,
    Dropping,
}

/// Controller mode; `Avoiding` wraps the task it will resume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Task(TaskMode),
    Avoiding { resume: TaskMode },
}

impl Mode {
    pub fn task(&self) -> TaskMode {
        match *self {
            Mode::Task(t) => t,
            Mode::Avoiding { resume } => resume,
        }
    }

    /// Short label used in trace files.
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Avoiding { .. } => "Avoiding",
            Mode::Task(TaskMode::Searching) => "Searching",
            Mode::Task(TaskMode::Approaching) => "Approaching",
            Mode::Task(TaskMode::Grasping) => "Grasping",
            Mode::Task(TaskMode::Transporting) => "Transporting",
            Mode::Task(TaskMode::Dropping) => "Dropping",
        }
    }
}

/// Marker-scan sub-state used while homing blind near the zone.
#[derive(Debug, Clone, Copy, PartialEq)]
enum HomingScan {
    Rotate { turned: f64 },
    Nudge { remaining: f64 },
}

/// Committed avoidance maneuver: turn away until the readings clear, then
/// drive a short escape leg so mirrored robots actually separate instead of
/// oscillating against each other.
#[derive(Debug, Clone, Copy, PartialEq)]
enum AvoidPhase {
    Turning { omega_sign: f64 },
    Escaping { remaining: f64 },
}

/// Mutable per-robot controller memory.
#[derive(Debug, Clone)]
pub struct ControllerState {
    pub mode: Mode,
    scan: Option<HomingScan>,
    avoid: Option<AvoidPhase>,
    /// Number of times the avoidance layer preempted (entries, not ticks).
    pub avoid_activations: u64,
}

impl Default for ControllerState {
    fn default() -> Self {
        Self {
            mode: Mode::Task(TaskMode::Searching),
            scan: None,
            avoid: None,
            avoid_activations: 0,
        }
    }
}

/// Speed/turn limits plus the waypoint gain, shared with the strategies.
#[derive(Debug, Clone, Copy)]
pub struct SteerLimits {
    pub v_max: f64,
    pub omega_max: f64,
    pub k_heading: f64,
}

/// Heading controller toward a waypoint: proportional turn, full speed when
/// roughly aligned, turn in place otherwise.
pub fn navigate_to(goal: (f64, f64), x: f64, y: f64, theta: f64, lim: &SteerLimits) -> BehaviorCommand {
    let heading_err = wrap_angle((goal.1 - y).atan2(goal.0 - x) - theta);
    let omega = (lim.k_heading * heading_err).clamp(-lim.omega_max, lim.omega_max);
    let v = if heading_err.abs() < 0.5 { lim.v_max } else { 0.0 };
    BehaviorCommand {
        v,
        omega,
        gripper: GripperAction::None,
    }
}

/// Goal reached when the estimated distance drops below the tolerance.
pub fn goal_reached(goal: (f64, f64), x: f64, y: f64, tolerance: f64) -> bool {
    (goal.0 - x).hypot(goal.1 - y) < tolerance
}

#[derive(Debug, Error, PartialEq)]
pub enum ControllerError {
    #[error("approach_and_grasp requires a resource-cube detection")]
    NotAResource,
}

/// Static controller configuration, derived from the round parameters. The
/// zone geometry (and therefore its marker layout) is public competition
/// knowledge, not ground truth.
#[derive(Debug, Clone)]
pub struct ControllerConfig {
    pub steer: SteerLimits,
    pub params: ControllerParams,
    pub dt: f64,
    pub zone_half: f64,
    pub zone_markers: Vec<(f64, f64)>,
    /// Where a released cube comes to rest, ahead of the robot center.
    pub placement_offset: f64,
}

impl ControllerConfig {
    pub fn new(
        sim: &SimParams,
        sensors: &SensorParams,
        params: &ControllerParams,
        arena: &Arena,
    ) -> Self {
        Self {
            steer: SteerLimits {
                v_max: sim.v_max,
                omega_max: sim.omega_max,
                k_heading: params.k_heading,
            },
            params: params.clone(),
            dt: sim.dt,
            zone_half: arena.zone_half(),
            zone_markers: arena.zone_marker_positions(sensors.zone_marker_count),
            placement_offset: sim.placement_offset(),
        }
    }
}

/// Proportional servo onto a cube detection; emits Grasp once the cube sits
/// safely inside the grasp envelope. Zone-boundary tags are not graspable.
pub fn approach_and_grasp(
    det: &TagDetection,
    cfg: &ControllerConfig,
) -> Result<BehaviorCommand, ControllerError> {
    if det.kind != TagKind::ResourceCube {
        return Err(ControllerError::NotAResource);
    }
    let p = &cfg.params;
    let omega = (p.k_approach * det.relative_bearing).clamp(-cfg.steer.omega_max, cfg.steer.omega_max);
    if det.distance <= p.grasp_trigger_dist && det.relative_bearing.abs() <= p.grasp_trigger_bearing {
        return Ok(BehaviorCommand {
            v: p.approach_creep_v,
            omega,
            gripper: GripperAction::Grasp,
        });
    }
    let v = if det.relative_bearing.abs() > 0.35 {
        0.0 // align first
    } else if det.distance > p.approach_slow_radius {
        cfg.steer.v_max
    } else {
        (cfg.steer.v_max * det.distance / p.approach_slow_radius).max(p.approach_creep_v)
    };
    Ok(BehaviorCommand {
        v,
        omega,
        gripper: GripperAction::None,
    })
}

/// Run one controller tick: arbitrate the layers and emit exactly one
/// command.
pub fn controller_tick(
    ctrl: &mut ControllerState,
    frame: &SensorFrame,
    est: &PoseEstimatePair,
    strategy: &mut dyn SearchStrategy,
    sctx: &mut StrategyContext<'_>,
    cfg: &ControllerConfig,
) -> BehaviorCommand {
    reconcile_carry(ctrl, frame.carrying);

    // Layer 1: collision avoidance preempts everything.
    if let Some(cmd) = avoidance(ctrl, frame, cfg) {
        return cmd;
    }

    // Layer 2: carry it home.
    if frame.carrying {
        return transport(ctrl, frame, est, cfg);
    }
    ctrl.scan = None;

    // Layer 3: a visible cube wins over searching. Cubes that appear to sit
    // inside the zone are banked stock and not pickup targets.
    if let Some(det) = nearest_collectable(frame, est, cfg) {
        let cmd = approach_and_grasp(&det, cfg).expect("filtered to resource detections");
        ctrl.mode = Mode::Task(if cmd.gripper == GripperAction::Grasp {
            TaskMode::Grasping
        } else {
            TaskMode::Approaching
        });
        return cmd;
    }

    ctrl.mode = Mode::Task(TaskMode::Searching);

    // Empty robots clear the zone before searching so they do not plow
    // banked cubes back out of it.
    let (x, y) = est.global.position();
    if x.hypot(y) < cfg.params.zone_exit_radius {
        let away = exit_goal(x, y, est.global.heading(), cfg);
        return navigate_to(away, x, y, est.global.heading(), &cfg.steer);
    }

    // Layer 4: delegate to the search strategy verbatim.
    strategy.propose(sctx)
}

/// Outward radial goal used to leave the zone neighborhood.
fn exit_goal(x: f64, y: f64, theta: f64, cfg: &ControllerConfig) -> (f64, f64) {
    let r = x.hypot(y);
    let target_r = cfg.params.zone_exit_radius + 1.0;
    if r > 1e-6 {
        (x / r * target_r, y / r * target_r)
    } else {
        (target_r * theta.cos(), target_r * theta.sin())
    }
}

/// The avoidance layer. Returns the command to emit while a maneuver is in
/// progress, or None when the task layers may run.
///
/// A fresh threat (any reading under the threshold) starts a committed
/// maneuver: turn away from the most-threatening sensor (ties break right)
/// while creeping, until every reading clears the threshold plus hysteresis,
/// then drive a short escape leg. A new threat during the escape restarts
/// the turn.
fn avoidance(
    ctrl: &mut ControllerState,
    frame: &SensorFrame,
    cfg: &ControllerConfig,
) -> Option<BehaviorCommand> {
    let p = &cfg.params;
    let (threat_idx, threat_range) = most_threatening(frame);
    let threatened = threat_range < p.avoid_threshold;

    if ctrl.avoid.is_none() {
        if !threatened {
            return None;
        }
        let omega_sign = if threat_idx == 2 { 1.0 } else { -1.0 };
        ctrl.avoid = Some(AvoidPhase::Turning { omega_sign });
        ctrl.avoid_activations += 1;
        if let Mode::Task(t) = ctrl.mode {
            ctrl.mode = Mode::Avoiding { resume: t };
        }
    } else if threatened {
        // Re-threatened mid-maneuver: turn away from the current threat.
        let omega_sign = if threat_idx == 2 { 1.0 } else { -1.0 };
        ctrl.avoid = Some(AvoidPhase::Turning { omega_sign });
    }

    match ctrl.avoid {
        Some(AvoidPhase::Turning { omega_sign }) => {
            if frame.min_ultrasound() >= p.avoid_threshold + p.avoid_hysteresis {
                ctrl.avoid = Some(AvoidPhase::Escaping {
                    remaining: p.avoid_escape_dist,
                });
                return Some(BehaviorCommand {
                    v: cfg.steer.v_max,
                    omega: 0.0,
                    gripper: GripperAction::None,
                });
            }
            Some(BehaviorCommand {
                v: p.avoid_creep_v,
                omega: omega_sign * cfg.steer.omega_max,
                gripper: GripperAction::None,
            })
        }
        Some(AvoidPhase::Escaping { remaining }) => {
            if remaining <= 0.0 {
                ctrl.avoid = None;
                if let Mode::Avoiding { resume } = ctrl.mode {
                    ctrl.mode = Mode::Task(resume);
                }
                return None;
            }
            ctrl.avoid = Some(AvoidPhase::Escaping {
                remaining: remaining - cfg.steer.v_max * cfg.dt,
            });
            Some(BehaviorCommand {
                v: cfg.steer.v_max,
                omega: 0.0,
                gripper: GripperAction::None,
            })
        }
        None => None,
    }
}

/// Keep the task mode consistent with the gripper feedback at every tick
/// boundary: carrying implies a transport-family task and vice versa.
fn reconcile_carry(ctrl: &mut ControllerState, carrying: bool) {
    let in_transport = matches!(ctrl.mode.task(), TaskMode::Transporting | TaskMode::Dropping);
    if carrying && !in_transport {
        ctrl.mode = match ctrl.mode {
            Mode::Avoiding { .. } => Mode::Avoiding {
                resume: TaskMode::Transporting,
            },
            Mode::Task(_) => Mode::Task(TaskMode::Transporting),
        };
    } else if !carrying && in_transport {
        ctrl.mode = match ctrl.mode {
            Mode::Avoiding { .. } => Mode::Avoiding {
                resume: TaskMode::Searching,
            },
            Mode::Task(_) => Mode::Task(TaskMode::Searching),
        };
        ctrl.scan = None;
    }
}

/// Index and range of the smallest ultrasound reading; scan order makes ties
/// resolve toward a right turn.
fn most_threatening(frame: &SensorFrame) -> (usize, f64) {
    let mut idx = 0;
    let mut best = frame.ultrasound[0].range;
    for (i, u) in frame.ultrasound.iter().enumerate().skip(1) {
        if u.range < best {
            best = u.range;
            idx = i;
        }
    }
    (idx, best)
}

/// Nearest cube detection that does not look like banked stock: its world
/// position, estimated from the detection geometry and the global filter,
/// must fall outside the zone plus a safety margin.
fn nearest_collectable(
    frame: &SensorFrame,
    est: &PoseEstimatePair,
    cfg: &ControllerConfig,
) -> Option<TagDetection> {
    let (x, y) = est.global.position();
    let theta = est.odom.heading();
    let banked_limit = cfg.zone_half + cfg.params.banked_filter_margin;
    frame
        .detections
        .iter()
        .filter(|d| d.kind == TagKind::ResourceCube)
        .filter(|d| {
            let ray = theta + d.relative_bearing;
            let cx = x + d.distance * ray.cos();
            let cy = y + d.distance * ray.sin();
            cx.abs() > banked_limit || cy.abs() > banked_limit
        })
        .min_by(|a, b| {
            a.distance
                .partial_cmp(&b.distance)
                .expect("finite distances")
                .then(a.tag_id.cmp(&b.tag_id))
        })
        .copied()
}

fn nearest_zone_marker(frame: &SensorFrame) -> Option<TagDetection> {
    frame
        .detections
        .iter()
        .filter(|d| d.kind == TagKind::ZoneBoundary)
        .min_by(|a, b| {
            a.distance
                .partial_cmp(&b.distance)
                .expect("finite distances")
                .then(a.tag_id.cmp(&b.tag_id))
        })
        .copied()
}

/// Transport layer: servo home on zone markers when one is visible, fall
/// back to the global filter, and rotate-scan when close but blind.
fn transport(
    ctrl: &mut ControllerState,
    frame: &SensorFrame,
    est: &PoseEstimatePair,
    cfg: &ControllerConfig,
) -> BehaviorCommand {
    ctrl.mode = Mode::Task(TaskMode::Transporting);
    let p = &cfg.params;

    if let Some(marker) = nearest_zone_marker(frame) {
        ctrl.scan = None;
        // A marker sighting plus the IMU-pinned heading gives a position fix
        // relative to the known zone layout.
        if let Some(&(mx, my)) = cfg.zone_markers.get(marker.tag_id as usize) {
            let theta = est.odom.heading();
            let ray = theta + marker.relative_bearing;
            let px = mx - marker.distance * ray.cos();
            let py = my - marker.distance * ray.sin();
            let gx = px + cfg.placement_offset * theta.cos();
            let gy = py + cfg.placement_offset * theta.sin();
            let inner = cfg.zone_half - p.drop_margin;
            if gx.abs() <= inner && gy.abs() <= inner {
                ctrl.mode = Mode::Task(TaskMode::Dropping);
                return BehaviorCommand {
                    v: 0.0,
                    omega: 0.0,
                    gripper: GripperAction::Release,
                };
            }
            return navigate_to((0.0, 0.0), px, py, theta, &cfg.steer);
        }
    }

    let (x, y) = est.global.position();
    let theta = est.global.heading();
    if x.hypot(y) > p.zone_approach_radius {
        ctrl.scan = None;
        return navigate_to((0.0, 0.0), x, y, theta, &cfg.steer);
    }

    // Close but no marker in view: spin to sweep the camera arc, stepping
    // toward the estimated center between full rotations.
    let scan_omega = p.scan_omega_frac * cfg.steer.omega_max;
    loop {
        match ctrl.scan {
            None => ctrl.scan = Some(HomingScan::Rotate { turned: 0.0 }),
            Some(HomingScan::Rotate { turned }) => {
                if turned < std::f64::consts::TAU {
                    ctrl.scan = Some(HomingScan::Rotate {
                        turned: turned + scan_omega * cfg.dt,
                    });
                    return BehaviorCommand {
                        v: 0.0,
                        omega: scan_omega,
                        gripper: GripperAction::None,
                    };
                }
                ctrl.scan = Some(HomingScan::Nudge {
                    remaining: p.scan_nudge_dist,
                });
            }
            Some(HomingScan::Nudge { remaining }) => {
                if remaining > 0.0 {
                    ctrl.scan = Some(HomingScan::Nudge {
                        remaining: remaining - cfg.steer.v_max * cfg.dt,
                    });
                    return navigate_to((0.0, 0.0), x, y, theta, &cfg.steer);
                }
                ctrl.scan = Some(HomingScan::Rotate { turned: 0.0 });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ekf::PoseEstimatePair;
    use crate::params::{EkfParams, NoiseParams};
    use crate::rng::{stream, stream_rng};
    use crate::sensors::{RawNavSamples, UltrasoundReading};
    use crate::strategy::{SitePost, StrategyContext};
    use crate::world::Pose;
    use proptest::prelude::*;

    struct FixedStrategy(BehaviorCommand);
    impl SearchStrategy for FixedStrategy {
        fn name(&self) -> &'static str {
            "fixed"
        }
        fn propose(&mut self, _ctx: &mut StrategyContext<'_>) -> BehaviorCommand {
            self.0.clone()
        }
        fn observe(
            &mut self,
            _ctx: &mut StrategyContext<'_>,
            _frame: &SensorFrame,
        ) -> Option<SitePost> {
            None
        }
    }

    fn test_cfg() -> ControllerConfig {
        ControllerConfig::new(
            &SimParams::default(),
            &SensorParams::default(),
            &ControllerParams::default(),
            &Arena::new(15.0, 1.0),
        )
    }

    fn frame(ranges: [f64; 3], detections: Vec<TagDetection>, carrying: bool) -> SensorFrame {
        SensorFrame {
            robot_id: 0,
            tick: 1,
            ultrasound: [
                UltrasoundReading { sensor_index: 0, range: ranges[0] },
                UltrasoundReading { sensor_index: 1, range: ranges[1] },
                UltrasoundReading { sensor_index: 2, range: ranges[2] },
            ],
            detections,
            nav: RawNavSamples {
                encoder_v: 0.0,
                encoder_omega: 0.0,
                imu_heading: 0.0,
                gps_fix: None,
            },
            carrying,
        }
    }

    fn estimates(pose: Pose) -> PoseEstimatePair {
        PoseEstimatePair::at_pose(&pose, &EkfParams::default())
    }

    fn run_tick(
        ctrl: &mut ControllerState,
        f: &SensorFrame,
        est: &PoseEstimatePair,
        strategy: &mut dyn SearchStrategy,
        cfg: &ControllerConfig,
    ) -> BehaviorCommand {
        let mut rng = stream_rng(0, stream::STRATEGY, 0);
        let mut sctx = StrategyContext {
            robot_id: 0,
            robot_count: 1,
            arena_side: 15.0,
            zone_side: 1.0,
            est,
            tick: f.tick,
            dt: 0.1,
            just_grasped: false,
            rng: &mut rng,
            blackboard: None,
        };
        controller_tick(ctrl, f, est, strategy, &mut sctx, cfg)
    }

    #[test]
    fn close_obstacle_triggers_avoidance_with_resume() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        let mut strat = FixedStrategy(BehaviorCommand::stop());
        let est = estimates(Pose::new(0.0, 0.0, 0.0));
        let f = frame([3.0, 0.25, 3.0], vec![], false);
        let cmd = run_tick(&mut ctrl, &f, &est, &mut strat, &cfg);
        assert!(cmd.omega != 0.0);
        assert_eq!(ctrl.mode, Mode::Avoiding { resume: TaskMode::Searching });
        assert_eq!(ctrl.avoid_activations, 1);

        // Clear readings finish the maneuver (turn, then a short escape
        // leg), after which the task resumes without a second activation.
        let f2 = frame([3.0, 3.0, 3.0], vec![], false);
        for _ in 0..40 {
            run_tick(&mut ctrl, &f2, &est, &mut strat, &cfg);
            if ctrl.mode == Mode::Task(TaskMode::Searching) {
                break;
            }
        }
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Searching));
        assert_eq!(ctrl.avoid_activations, 1);
    }

    #[test]
    fn avoidance_turns_away_ties_break_right() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        let mut strat = FixedStrategy(BehaviorCommand::stop());
        let est = estimates(Pose::new(0.0, 0.0, 0.0));

        // Threat on the left: turn right (negative omega).
        let cmd = run_tick(&mut ctrl, &frame([0.2, 3.0, 3.0], vec![], false), &est, &mut strat, &cfg);
        assert!(cmd.omega < 0.0);
        // Threat on the right: turn left.
        let cmd = run_tick(&mut ctrl, &frame([3.0, 3.0, 0.2], vec![], false), &est, &mut strat, &cfg);
        assert!(cmd.omega > 0.0);
        // Dead ahead (tie between sides): break right.
        let cmd = run_tick(&mut ctrl, &frame([3.0, 0.2, 3.0], vec![], false), &est, &mut strat, &cfg);
        assert!(cmd.omega < 0.0);
    }

    #[test]
    fn delegation_passes_strategy_command_through() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        let want = BehaviorCommand {
            v: 0.13,
            omega: -0.4,
            gripper: GripperAction::None,
        };
        let mut strat = FixedStrategy(want.clone());
        let est = estimates(Pose::new(3.0, 1.0, 0.0));
        let cmd = run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![], false), &est, &mut strat, &cfg);
        assert_eq!(cmd, want);
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Searching));
    }

    #[test]
    fn empty_robot_leaves_the_zone_before_searching() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        let mut strat = FixedStrategy(BehaviorCommand { v: 0.19, omega: 0.0, gripper: GripperAction::None });
        // Just inside the exit radius, facing outward: drive out, not search.
        let est = estimates(Pose::new(0.8, 0.0, 0.0));
        let cmd = run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![], false), &est, &mut strat, &cfg);
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Searching));
        assert!(cmd.v > 0.0 && cmd.v != 0.19, "outward drive, not the strategy command");
    }

    #[test]
    fn banked_looking_detections_are_not_pickup_targets() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        let mut strat = FixedStrategy(BehaviorCommand::stop());
        // Robot just outside the zone looking at a cube sitting inside it.
        let est = estimates(Pose::new(1.2, 0.0, std::f64::consts::PI));
        let det = TagDetection {
            kind: TagKind::ResourceCube,
            tag_id: 3,
            relative_bearing: 0.0,
            distance: 0.8, // estimated position (0.4, 0): inside the zone
        };
        run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![det], false), &est, &mut strat, &cfg);
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Searching));

        // The same detection geometry away from the zone is approached.
        let est = estimates(Pose::new(5.0, 0.0, std::f64::consts::PI));
        run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![det], false), &est, &mut strat, &cfg);
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Approaching));
    }

    #[test]
    fn approach_steers_then_grasps() {
        let cfg = test_cfg();
        let far = TagDetection {
            kind: TagKind::ResourceCube,
            tag_id: 5,
            relative_bearing: 0.4,
            distance: 0.8,
        };
        let cmd = approach_and_grasp(&far, &cfg).unwrap();
        assert!(cmd.omega > 0.0);
        assert_eq!(cmd.gripper, GripperAction::None);

        let near = TagDetection {
            kind: TagKind::ResourceCube,
            tag_id: 5,
            relative_bearing: 0.0,
            distance: 0.2,
        };
        let cmd = approach_and_grasp(&near, &cfg).unwrap();
        assert_eq!(cmd.gripper, GripperAction::Grasp);

        let marker = TagDetection {
            kind: TagKind::ZoneBoundary,
            tag_id: 0,
            relative_bearing: 0.0,
            distance: 0.2,
        };
        assert_eq!(approach_and_grasp(&marker, &cfg), Err(ControllerError::NotAResource));
    }

    #[test]
    fn failed_grasp_returns_to_approaching() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        ctrl.mode = Mode::Task(TaskMode::Grasping);
        let mut strat = FixedStrategy(BehaviorCommand::stop());
        let est = estimates(Pose::new(4.0, 0.0, 0.0));
        // Not carrying, cube still visible ahead: back to approach, not transport.
        let det = TagDetection {
            kind: TagKind::ResourceCube,
            tag_id: 1,
            relative_bearing: 0.05,
            distance: 0.4,
        };
        run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![det], false), &est, &mut strat, &cfg);
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Approaching));
    }

    #[test]
    fn successful_grasp_switches_to_transporting() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        ctrl.mode = Mode::Task(TaskMode::Grasping);
        let mut strat = FixedStrategy(BehaviorCommand::stop());
        let est = estimates(Pose::new(3.0, 0.0, 0.0));
        run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![], true), &est, &mut strat, &cfg);
        assert!(matches!(ctrl.mode, Mode::Task(TaskMode::Transporting)));
    }

    #[test]
    fn marker_homing_drives_then_releases() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        let mut strat = FixedStrategy(BehaviorCommand::stop());

        // Robot at (0.8, 0) heading west; marker index 2 sits at (0.5, 0).
        let est = estimates(Pose::new(0.8, 0.0, std::f64::consts::PI));
        let det = TagDetection {
            kind: TagKind::ZoneBoundary,
            tag_id: 2,
            relative_bearing: 0.0,
            distance: 0.3,
        };
        let cmd = run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![det], true), &est, &mut strat, &cfg);
        assert!(cmd.v > 0.0, "should drive toward the zone");
        assert_eq!(cmd.gripper, GripperAction::None);
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Transporting));

        // Deeper in: marker index 10 at (-0.5, 0) seen 0.8 m ahead; the
        // placement estimate lands inside the zone, so release.
        let est = estimates(Pose::new(0.3, 0.0, std::f64::consts::PI));
        let det = TagDetection {
            kind: TagKind::ZoneBoundary,
            tag_id: 10,
            relative_bearing: 0.0,
            distance: 0.8,
        };
        let cmd = run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![det], true), &est, &mut strat, &cfg);
        assert_eq!(cmd.gripper, GripperAction::Release);
        assert_eq!(ctrl.mode, Mode::Task(TaskMode::Dropping));
    }

    #[test]
    fn blind_homing_scans_in_place_near_zone() {
        let cfg = test_cfg();
        let mut ctrl = ControllerState::default();
        let mut strat = FixedStrategy(BehaviorCommand::stop());
        let est = estimates(Pose::new(0.9, 0.0, 0.0));
        let cmd = run_tick(&mut ctrl, &frame([3.0, 3.0, 3.0], vec![], true), &est, &mut strat, &cfg);
        assert_eq!(cmd.v, 0.0);
        assert!(cmd.omega > 0.0, "rotating to sweep the camera");
    }

    #[test]
    fn navigate_examples() {
        let lim = SteerLimits {
            v_max: 0.2,
            omega_max: 1.0,
            k_heading: 2.0,
        };
        let ahead = navigate_to((5.0, 0.0), 0.0, 0.0, 0.0, &lim);
        assert_eq!(ahead.v, 0.2);
        assert!(ahead.omega.abs() < 1e-12);

        let behind = navigate_to((-5.0, 0.0), 0.0, 0.0, 0.0, &lim);
        assert_eq!(behind.v, 0.0);
        assert_eq!(behind.omega.abs(), 1.0, "saturated turn toward the goal");
        assert!(goal_reached((0.1, 0.0), 0.0, 0.0, 0.5));
    }

    proptest! {
        /// Whenever any reading is below the threshold, the emitted command
        /// is the avoidance command (creep + saturated turn), no matter the
        /// rest of the frame.
        #[test]
        fn subsumption_priority(
            r0 in 0.05f64..3.0,
            r1 in 0.05f64..3.0,
            r2 in 0.05f64..3.0,
            carrying in proptest::bool::ANY,
            with_cube in proptest::bool::ANY,
        ) {
            let cfg = test_cfg();
            let mut ctrl = ControllerState::default();
            let mut strat = FixedStrategy(BehaviorCommand { v: 0.11, omega: 0.22, gripper: GripperAction::None });
            let est = estimates(Pose::new(2.0, 2.0, 0.3));
            let dets = if with_cube {
                vec![TagDetection { kind: TagKind::ResourceCube, tag_id: 0, relative_bearing: 0.1, distance: 0.5 }]
            } else {
                vec![]
            };
            let f = frame([r0, r1, r2], dets, carrying);
            let cmd = run_tick(&mut ctrl, &f, &est, &mut strat, &cfg);
            let min = r0.min(r1).min(r2);
            if min < cfg.params.avoid_threshold {
                prop_assert_eq!(cmd.v, cfg.params.avoid_creep_v);
                prop_assert_eq!(cmd.omega.abs(), cfg.steer.omega_max);
                let avoiding = matches!(ctrl.mode, Mode::Avoiding { .. });
                prop_assert!(avoiding);
            }
            // Command bounds hold in every case.
            prop_assert!(cmd.v >= 0.0 && cmd.v <= cfg.steer.v_max);
            prop_assert!(cmd.omega.abs() <= cfg.steer.omega_max);
        }
    }
}
