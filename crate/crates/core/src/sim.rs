//! Fixed-timestep world integrator: differential-drive kinematics, wall and
//! robot collisions, cube pushing, and pickup/drop mechanics.
//!
//! Robots advance in id order within a step. Collisions are resolved by
//! clamping the translation along the commanded direction; there is no bounce
//! or force model. All randomness (grasp outcomes, fumble jitter) comes from
//! per-robot streams handed in by the caller.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::controller::{BehaviorCommand, GripperAction};
use crate::error::SimError;
use crate::params::SimParams;
use crate::world::{unicycle_delta, CubeState, WorldState};

/// Safety gap kept between surfaces when motion is clamped, meters. Large
/// enough to absorb floating-point round-off in the contact solve, small
/// enough to be invisible at robot scale.
const CONTACT_MARGIN: f64 = 1e-9;

/// A command addressed to one robot.
#[derive(Debug, Clone)]
pub struct RobotCommand {
    pub robot_id: u32,
    pub command: BehaviorCommand,
}

/// Discrete things that happened during one step, in occurrence order.
#[derive(Debug, Clone, PartialEq)]
pub enum StepEvent {
    Pickup {
        robot_id: u32,
        cube_id: Option<u32>,
        success: bool,
    },
    Drop {
        robot_id: u32,
        cube_id: u32,
        banked: bool,
    },
    /// A banked cube was shoved across the zone boundary and reverted to
    /// loose; the score just dropped by one.
    PushOut { robot_id: u32, cube_id: u32 },
}

/// What one robot's actuators actually did after clamping, used by the
/// encoder model.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ExecutedMotion {
    pub v: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepOutcome {
    pub events: Vec<StepEvent>,
    /// Indexed like `world.robots`.
    pub executed: Vec<ExecutedMotion>,
}

/// Advance the world by one timestep.
///
/// `mech_rngs` holds one stream per robot (same order as `world.robots`) for
/// grasp outcomes and fumbles. Exactly one command per robot is required.
pub fn step_world(
    world: &mut WorldState,
    commands: &[RobotCommand],
    dt: f64,
    params: &SimParams,
    mech_rngs: &mut [ChaCha8Rng],
) -> Result<StepOutcome, SimError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SimError::InvalidTimestep(dt));
    }
    let n = world.robots.len();
    let mut slots: Vec<Option<&BehaviorCommand>> = vec![None; n];
    for rc in commands {
        let idx = world
            .robot_index(rc.robot_id)
            .ok_or(SimError::UnknownRobot(rc.robot_id))?;
        if slots[idx].is_some() {
            return Err(SimError::DuplicateCommand(rc.robot_id));
        }
        slots[idx] = Some(&rc.command);
    }
    if let Some(i) = slots.iter().position(|s| s.is_none()) {
        return Err(SimError::MissingCommand(world.robots[i].id));
    }

    let mut outcome = StepOutcome {
        events: Vec::new(),
        executed: vec![ExecutedMotion::default(); n],
    };

    // Motion, in id order.
    for i in 0..n {
        let cmd = slots[i].expect("validated above");
        let v = cmd.v.clamp(0.0, params.v_max);
        let omega = cmd.omega.clamp(-params.omega_max, params.omega_max);
        let exec = advance_robot(world, i, v, omega, dt);
        outcome.executed[i] = exec;
    }

    // Cube pushing: any loose or banked cube overlapped by a footprint is
    // displaced out of it.
    if params.pushing_enabled {
        let cube_count = world.cubes.len();
        for c in 0..cube_count {
            for r in 0..n {
                if let Some(effect) = push_cube(world, world.robots[r].id, world.cubes[c].id, params)
                {
                    if effect.pushed_out {
                        outcome.events.push(StepEvent::PushOut {
                            robot_id: world.robots[r].id,
                            cube_id: world.cubes[c].id,
                        });
                    }
                }
            }
        }
    }

    // Gripper actuation, in id order.
    for i in 0..n {
        let robot_id = world.robots[i].id;
        match slots[i].expect("validated above").gripper {
            GripperAction::None => {}
            GripperAction::Grasp => {
                let (cube_id, success) = attempt_pickup(world, robot_id, params, &mut mech_rngs[i]);
                outcome.events.push(StepEvent::Pickup {
                    robot_id,
                    cube_id,
                    success,
                });
            }
            GripperAction::Release => {
                if let Some((cube_id, banked)) = drop_cube(world, robot_id, params) {
                    outcome.events.push(StepEvent::Drop {
                        robot_id,
                        cube_id,
                        banked,
                    });
                }
            }
        }
    }

    world.tick += 1;
    world.sim_time = world.tick as f64 * dt;
    Ok(outcome)
}

/// Move one robot, honoring the distance budget and clamping against walls
/// and the other robots' discs. Returns the executed motion.
fn advance_robot(world: &mut WorldState, idx: usize, v: f64, omega: f64, dt: f64) -> ExecutedMotion {
    if world.robots[idx].exhausted() {
        return ExecutedMotion { v: 0.0, omega: 0.0 };
    }

    let (pose, radius) = {
        let r = &world.robots[idx];
        (r.pose, r.radius)
    };

    // Partial final step so the odometer lands exactly on max_range.
    let step_len = v * dt;
    let remaining = world.robots[idx].max_range - world.robots[idx].distance_traveled;
    let (range_scale, finishing) = if step_len > 0.0 && step_len >= remaining {
        (remaining / step_len, true)
    } else {
        (1.0, false)
    };

    let v_ranged = v * range_scale;
    let (dx, dy, theta_new) = unicycle_delta(pose.theta, v_ranged, omega, dt);
    let t = collision_scale(world, idx, pose.x, pose.y, radius, dx, dy);

    // Recompute the displacement from the executed speed so the encoder model
    // and the EKF prediction see the exact same arithmetic.
    let v_exec = v_ranged * t;
    let (ex, ey, _) = unicycle_delta(pose.theta, v_exec, omega, dt);
    let (nx, ny) = (pose.x + ex, pose.y + ey);

    // The margin built into the clamp normally guarantees this; if round-off
    // still lands on a contact, stay put rather than overlap.
    let (nx, ny, v_exec) = if placement_ok(world, idx, nx, ny, radius) {
        (nx, ny, v_exec)
    } else {
        (pose.x, pose.y, 0.0)
    };

    let robot = &mut world.robots[idx];
    robot.pose.x = nx;
    robot.pose.y = ny;
    robot.pose.theta = theta_new;
    if finishing && v_exec == v_ranged {
        robot.distance_traveled = robot.max_range;
    } else {
        robot.distance_traveled += v_exec.abs() * dt;
    }
    ExecutedMotion { v: v_exec, omega }
}

/// Largest fraction `t` of the displacement (dx, dy) that keeps the disc
/// inside the walls and clear of every other robot.
fn collision_scale(
    world: &WorldState,
    idx: usize,
    x: f64,
    y: f64,
    radius: f64,
    dx: f64,
    dy: f64,
) -> f64 {
    if dx == 0.0 && dy == 0.0 {
        return 1.0;
    }
    let mut t = 1.0_f64;

    let lim = world.arena.half_side() - radius - CONTACT_MARGIN;
    for (pos, d) in [(x, dx), (y, dy)] {
        if d > 0.0 {
            t = t.min(((lim - pos) / d).max(0.0));
        } else if d < 0.0 {
            t = t.min(((-lim - pos) / d).max(0.0));
        }
    }

    for (j, other) in world.robots.iter().enumerate() {
        if j == idx {
            continue;
        }
        let cx = other.pose.x;
        let cy = other.pose.y;
        let rr = radius + other.radius + CONTACT_MARGIN;
        let px = x - cx;
        let py = y - cy;
        let a = dx * dx + dy * dy;
        let b = 2.0 * (px * dx + py * dy);
        let c = px * px + py * py - rr * rr;
        if c <= 0.0 {
            // Already within the margin shell: block approach, allow escape.
            if b < 0.0 {
                return 0.0;
            }
            continue;
        }
        let disc = b * b - 4.0 * a * c;
        if disc <= 0.0 {
            continue;
        }
        let t_hit = (-b - disc.sqrt()) / (2.0 * a);
        if t_hit >= 0.0 {
            t = t.min(t_hit);
        }
    }
    t.clamp(0.0, 1.0)
}

/// Exact (margin-free) feasibility check used as a final guard.
fn placement_ok(world: &WorldState, idx: usize, x: f64, y: f64, radius: f64) -> bool {
    if !world.arena.disc_inside(x, y, radius) {
        return false;
    }
    world.robots.iter().enumerate().all(|(j, other)| {
        if j == idx {
            return true;
        }
        let rr = radius + other.radius;
        let dx = x - other.pose.x;
        let dy = y - other.pose.y;
        dx * dx + dy * dy >= rr * rr
    })
}

/// Result of a push: where the cube went and whether it left the zone.
#[derive(Debug, Clone, Copy)]
pub struct PushEffect {
    pub new_position: (f64, f64),
    pub pushed_out: bool,
}

/// Displace a loose or banked cube out of a robot's footprint, along the ray
/// from the robot center through the cube. A banked cube displaced outside
/// the collection zone reverts to loose. No-op (returns None) when the
/// footprint does not overlap the cube.
pub fn push_cube(
    world: &mut WorldState,
    robot_id: u32,
    cube_id: u32,
    params: &SimParams,
) -> Option<PushEffect> {
    let r_idx = world.robot_index(robot_id)?;
    let c_idx = world.cubes.iter().position(|c| c.id == cube_id)?;
    let (rx, ry) = (world.robots[r_idx].pose.x, world.robots[r_idx].pose.y);
    let heading = world.robots[r_idx].pose.heading();

    let (cx, cy, was_banked) = match world.cubes[c_idx].state {
        CubeState::Loose { x, y } => (x, y, false),
        CubeState::Banked { x, y } => (x, y, true),
        CubeState::Carried { .. } => return None,
    };

    let contact = world.robots[r_idx].radius + params.cube_radius;
    let dx = cx - rx;
    let dy = cy - ry;
    let d = dx.hypot(dy);
    if d >= contact {
        return None;
    }

    let dir = if d > 1e-12 { (dx / d, dy / d) } else { heading };
    let reach = contact + params.push_epsilon;
    let lim = world.arena.half_side() - params.cube_radius;
    let nx = (rx + dir.0 * reach).clamp(-lim, lim);
    let ny = (ry + dir.1 * reach).clamp(-lim, lim);

    let still_in_zone = world.arena.in_zone(nx, ny);
    let pushed_out = was_banked && !still_in_zone;
    world.cubes[c_idx].state = if was_banked && still_in_zone {
        CubeState::Banked { x: nx, y: ny }
    } else {
        CubeState::Loose { x: nx, y: ny }
    };
    Some(PushEffect {
        new_position: (nx, ny),
        pushed_out,
    })
}

/// Try to grasp the nearest loose cube inside the grasp envelope (within
/// `grasp_reach` of the gripper point and `grasp_half_angle` of the heading).
///
/// Success is a Bernoulli draw from the robot's mechanics stream; on failure
/// the cube is fumbled a few millimeters. Attempting while already carrying,
/// or with no eligible cube, leaves the world unchanged.
pub fn attempt_pickup(
    world: &mut WorldState,
    robot_id: u32,
    params: &SimParams,
    rng: &mut ChaCha8Rng,
) -> (Option<u32>, bool) {
    let Some(r_idx) = world.robot_index(robot_id) else {
        return (None, false);
    };
    if world.robots[r_idx].carried_cube.is_some() {
        return (None, false);
    }
    let (fx, fy) = world.robots[r_idx].front_point();
    let pose = world.robots[r_idx].pose;

    let mut best: Option<(usize, f64)> = None;
    for (i, cube) in world.cubes.iter().enumerate() {
        let CubeState::Loose { x, y } = cube.state else {
            continue;
        };
        let front_dist = (x - fx).hypot(y - fy);
        if front_dist > params.grasp_reach {
            continue;
        }
        if pose.bearing_to(x, y).abs() > params.grasp_half_angle {
            continue;
        }
        if best.is_none_or(|(_, d)| front_dist < d) {
            best = Some((i, front_dist));
        }
    }
    let Some((c_idx, _)) = best else {
        return (None, false);
    };

    let cube_id = world.cubes[c_idx].id;
    let success = rng.random_bool(params.grasp_success_prob);
    if success {
        world.cubes[c_idx].state = CubeState::Carried { robot_id };
        world.robots[r_idx].carried_cube = Some(cube_id);
    } else if let CubeState::Loose { x, y } = world.cubes[c_idx].state {
        // Fumble: the gripper knocked the cube without seizing it.
        let jitter = Normal::new(0.0, params.fumble_sigma).expect("finite sigma");
        let lim = world.arena.half_side() - params.cube_radius;
        let nx = (x + jitter.sample(rng)).clamp(-lim, lim);
        let ny = (y + jitter.sample(rng)).clamp(-lim, lim);
        world.cubes[c_idx].state = CubeState::Loose { x: nx, y: ny };
    }
    (Some(cube_id), success)
}

/// Set the carried cube down just ahead of the footprint. It banks if the
/// placement point is inside the collection zone, otherwise it goes loose.
/// No-op when the robot carries nothing.
pub fn drop_cube(world: &mut WorldState, robot_id: u32, params: &SimParams) -> Option<(u32, bool)> {
    let r_idx = world.robot_index(robot_id)?;
    let cube_id = world.robots[r_idx].carried_cube?;
    let (hx, hy) = world.robots[r_idx].pose.heading();
    let reach = params.placement_offset();
    let lim = world.arena.half_side() - params.cube_radius;
    let x = (world.robots[r_idx].pose.x + reach * hx).clamp(-lim, lim);
    let y = (world.robots[r_idx].pose.y + reach * hy).clamp(-lim, lim);

    let banked = world.arena.in_zone(x, y);
    let c_idx = world.cubes.iter().position(|c| c.id == cube_id)?;
    world.cubes[c_idx].state = if banked {
        CubeState::Banked { x, y }
    } else {
        CubeState::Loose { x, y }
    };
    world.robots[r_idx].carried_cube = None;
    Some((cube_id, banked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, stream};
    use crate::world::{Arena, Cube, Pose, RobotBody};
    use approx::assert_abs_diff_eq;

    fn world_with_robots(side: f64, poses: &[(f64, f64, f64)]) -> WorldState {
        let params = SimParams::default();
        WorldState {
            arena: Arena::new(side, 1.0),
            robots: poses
                .iter()
                .enumerate()
                .map(|(i, &(x, y, th))| RobotBody {
                    id: i as u32,
                    pose: Pose::new(x, y, th),
                    radius: params.robot_radius,
                    carried_cube: None,
                    distance_traveled: 0.0,
                    max_range: params.max_range,
                })
                .collect(),
            cubes: Vec::new(),
            tick: 0,
            sim_time: 0.0,
        }
    }

    fn drive(v: f64, omega: f64) -> BehaviorCommand {
        BehaviorCommand {
            v,
            omega,
            gripper: GripperAction::None,
        }
    }

    fn cmds(world: &WorldState, c: BehaviorCommand) -> Vec<RobotCommand> {
        world
            .robots
            .iter()
            .map(|r| RobotCommand {
                robot_id: r.id,
                command: c.clone(),
            })
            .collect()
    }

    fn mech_streams(n: usize) -> Vec<ChaCha8Rng> {
        (0..n).map(|i| stream_rng(99, stream::MECH, i as u64)).collect()
    }

    #[test]
    fn straight_line_kinematics() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        let mut mech = mech_streams(1);
        let c = cmds(&w, drive(0.2, 0.0));
        step_world(&mut w, &c, 0.1, &params, &mut mech).unwrap();
        assert_abs_diff_eq!(w.robots[0].pose.x, 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(w.robots[0].pose.y, 0.0, epsilon = 1e-15);
        assert_eq!(w.robots[0].pose.theta, 0.0);
        assert_eq!(w.tick, 1);
        assert_eq!(w.sim_time, 0.1);
    }

    #[test]
    fn range_budget_lands_exactly_and_freezes() {
        let params = SimParams::default();
        let mut w = world_with_robots(100.0, &[(-40.0, 0.0, 0.0)]);
        w.robots[0].max_range = 1.0;
        let mut mech = mech_streams(1);
        let c = cmds(&w, drive(0.2, 0.0));
        for _ in 0..60 {
            step_world(&mut w, &c, 0.1, &params, &mut mech).unwrap();
        }
        assert_eq!(w.robots[0].distance_traveled, 1.0);
        let frozen = w.robots[0].pose;
        step_world(&mut w, &c, 0.1, &params, &mut mech).unwrap();
        assert_eq!(w.robots[0].pose, frozen);
    }

    #[test]
    fn wall_clamp_leaves_footprint_tangent() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(7.2, 0.0, 0.0)]);
        let mut mech = mech_streams(1);
        let c = cmds(&w, drive(0.2, 0.0));
        for _ in 0..20 {
            step_world(&mut w, &c, 1.0, &params, &mut mech).unwrap();
        }
        let lim = 7.5 - params.robot_radius;
        assert!(w.robots[0].pose.x <= lim);
        assert_abs_diff_eq!(w.robots[0].pose.x, lim, epsilon = 1e-6);
        w.check_invariants(1.0).unwrap();
    }

    #[test]
    fn head_on_robots_stop_before_contact() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(-0.5, 0.0, 0.0), (0.5, 0.0, std::f64::consts::PI)]);
        let mut mech = mech_streams(2);
        let c = cmds(&w, drive(0.2, 0.0));
        for _ in 0..50 {
            step_world(&mut w, &c, 0.5, &params, &mut mech).unwrap();
            w.check_invariants(0.5).ok(); // sim_time uses varying dt here
            let d = w.robots[0].pose.distance_to(w.robots[1].pose.x, w.robots[1].pose.y);
            assert!(d >= 0.3, "interpenetration: {d}");
        }
    }

    #[test]
    fn tangent_robots_can_separate() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(-0.15, 0.0, std::f64::consts::PI), (0.15, 0.0, 0.0)]);
        let mut mech = mech_streams(2);
        let c = cmds(&w, drive(0.2, 0.0));
        step_world(&mut w, &c, 0.1, &params, &mut mech).unwrap();
        let d = w.robots[0].pose.distance_to(w.robots[1].pose.x, w.robots[1].pose.y);
        assert!(d > 0.3 + 0.03, "robots failed to separate: {d}");
    }

    #[test]
    fn push_geometry_matches_displacement_rule() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        w.cubes.push(Cube {
            id: 0,
            state: CubeState::Loose { x: 0.10, y: 0.0 },
        });
        let effect = push_cube(&mut w, 0, 0, &params).expect("overlap");
        assert_abs_diff_eq!(effect.new_position.0, 0.19, epsilon = 1e-12);
        assert_abs_diff_eq!(effect.new_position.1, 0.0, epsilon = 1e-12);
        assert!(!effect.pushed_out);
    }

    #[test]
    fn push_is_noop_without_overlap() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        w.cubes.push(Cube {
            id: 0,
            state: CubeState::Loose { x: 1.0, y: 0.0 },
        });
        assert!(push_cube(&mut w, 0, 0, &params).is_none());
        assert_eq!(w.cubes[0].state, CubeState::Loose { x: 1.0, y: 0.0 });
    }

    #[test]
    fn push_clamps_at_wall() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(7.30, 0.0, 0.0)]);
        w.cubes.push(Cube {
            id: 0,
            state: CubeState::Loose { x: 7.40, y: 0.0 },
        });
        let effect = push_cube(&mut w, 0, 0, &params).expect("overlap");
        assert!(effect.new_position.0 <= 7.5 - params.cube_radius + 1e-12);
    }

    #[test]
    fn banked_cube_pushed_out_reverts_to_loose() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.40, 0.0, 0.0)]);
        w.cubes.push(Cube {
            id: 7,
            state: CubeState::Banked { x: 0.48, y: 0.0 },
        });
        assert_eq!(w.score(), 1);
        let effect = push_cube(&mut w, 0, 7, &params).expect("overlap");
        assert!(effect.pushed_out);
        assert!(matches!(w.cubes[0].state, CubeState::Loose { .. }));
        assert_eq!(w.score(), 0);
    }

    #[test]
    fn forced_pickup_succeeds_in_envelope() {
        let mut params = SimParams::default();
        params.grasp_success_prob = 1.0;
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        // 0.03 m ahead of the gripper point.
        w.cubes.push(Cube {
            id: 3,
            state: CubeState::Loose { x: 0.18, y: 0.0 },
        });
        let mut rng = stream_rng(1, stream::MECH, 0);
        let (cube, success) = attempt_pickup(&mut w, 0, &params, &mut rng);
        assert_eq!(cube, Some(3));
        assert!(success);
        assert_eq!(w.cubes[0].state, CubeState::Carried { robot_id: 0 });
        assert_eq!(w.robots[0].carried_cube, Some(3));
    }

    #[test]
    fn pickup_without_eligible_cube_is_noop() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        w.cubes.push(Cube {
            id: 0,
            state: CubeState::Loose { x: 1.0, y: 0.0 },
        });
        let mut rng = stream_rng(1, stream::MECH, 0);
        let before = w.cubes[0].state;
        let (cube, success) = attempt_pickup(&mut w, 0, &params, &mut rng);
        assert_eq!(cube, None);
        assert!(!success);
        assert_eq!(w.cubes[0].state, before);
    }

    #[test]
    fn pickup_while_carrying_is_rejected() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        w.cubes.push(Cube {
            id: 0,
            state: CubeState::Carried { robot_id: 0 },
        });
        w.robots[0].carried_cube = Some(0);
        w.cubes.push(Cube {
            id: 1,
            state: CubeState::Loose { x: 0.18, y: 0.0 },
        });
        let mut rng = stream_rng(1, stream::MECH, 0);
        let (cube, success) = attempt_pickup(&mut w, 0, &params, &mut rng);
        assert_eq!((cube, success), (None, false));
        assert_eq!(w.cubes[1].state, CubeState::Loose { x: 0.18, y: 0.0 });
    }

    #[test]
    fn grasp_success_rate_within_binomial_bounds() {
        // 1000 seeded attempts at p = 0.9; mean 900, two sigma ~ 19.
        let mut params = SimParams::default();
        params.grasp_success_prob = 0.9;
        let mut rng = stream_rng(2024, stream::MECH, 0);
        let mut successes = 0u32;
        for _ in 0..1000 {
            let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
            w.cubes.push(Cube {
                id: 0,
                state: CubeState::Loose { x: 0.18, y: 0.0 },
            });
            let (_, ok) = attempt_pickup(&mut w, 0, &params, &mut rng);
            if ok {
                successes += 1;
            }
        }
        assert!(
            (881..=919).contains(&successes),
            "successes {successes} outside mean +- 2 sigma"
        );
    }

    #[test]
    fn drop_banks_inside_zone_and_not_outside() {
        let params = SimParams::default();
        // Gripper placement lands at x + 0.19.
        let mut w = world_with_robots(15.0, &[(0.2, 0.0, 0.0)]);
        w.cubes.push(Cube {
            id: 0,
            state: CubeState::Carried { robot_id: 0 },
        });
        w.robots[0].carried_cube = Some(0);
        let (id, banked) = drop_cube(&mut w, 0, &params).unwrap();
        assert_eq!(id, 0);
        assert!(banked, "placement at 0.39 is inside the 0.5 half-side zone");
        assert_eq!(w.score(), 1);

        let mut w2 = world_with_robots(15.0, &[(3.0, 0.0, 0.0)]);
        w2.cubes.push(Cube {
            id: 0,
            state: CubeState::Carried { robot_id: 0 },
        });
        w2.robots[0].carried_cube = Some(0);
        let (_, banked2) = drop_cube(&mut w2, 0, &params).unwrap();
        assert!(!banked2);
        assert_eq!(w2.score(), 0);
    }

    #[test]
    fn drop_without_cargo_is_noop() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        assert!(drop_cube(&mut w, 0, &params).is_none());
    }

    #[test]
    fn score_equals_banked_count_after_k_bankings() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.2, 0.0, 0.0)]);
        for k in 0..4u32 {
            w.cubes.push(Cube {
                id: k,
                state: CubeState::Carried { robot_id: 0 },
            });
            w.robots[0].carried_cube = Some(k);
            drop_cube(&mut w, 0, &params).unwrap();
            assert_eq!(w.score(), k + 1);
        }
    }

    #[test]
    fn unknown_and_missing_commands_error() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0), (2.0, 0.0, 0.0)]);
        let mut mech = mech_streams(2);
        let bad = vec![RobotCommand {
            robot_id: 9,
            command: drive(0.1, 0.0),
        }];
        assert_eq!(
            step_world(&mut w, &bad, 0.1, &params, &mut mech),
            Err(SimError::UnknownRobot(9))
        );
        let missing = vec![RobotCommand {
            robot_id: 0,
            command: drive(0.1, 0.0),
        }];
        assert_eq!(
            step_world(&mut w, &missing, 0.1, &params, &mut mech),
            Err(SimError::MissingCommand(1))
        );
    }

    #[test]
    fn commands_are_clamped_to_actuator_limits() {
        let params = SimParams::default();
        let mut w = world_with_robots(15.0, &[(0.0, 0.0, 0.0)]);
        let mut mech = mech_streams(1);
        let c = cmds(&w, drive(5.0, -9.0));
        let out = step_world(&mut w, &c, 0.1, &params, &mut mech).unwrap();
        assert_eq!(out.executed[0].v, params.v_max);
        assert_eq!(out.executed[0].omega, -params.omega_max);
    }
}
