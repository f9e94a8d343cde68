//! Whole-world stepping properties: conservation, containment, determinism.

use forage_core::{
    generate_world, rng::{stream, stream_rng}, step_world, ArenaPreset, BehaviorCommand,
    CubeState, DistributionKind, DistributionSpec, GripperAction, RobotCommand, SimParams,
    WorldState,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn spawn(seed: u64, cubes: usize, robots: u32) -> WorldState {
    let dist = DistributionSpec {
        kind: DistributionKind::Uniform { count: cubes },
        exclusion_radius: 1.5,
    };
    generate_world(ArenaPreset::Small15, robots, &dist, seed, &SimParams::default()).unwrap()
}

fn random_commands(world: &WorldState, rng: &mut ChaCha8Rng) -> Vec<RobotCommand> {
    world
        .robots
        .iter()
        .map(|r| RobotCommand {
            robot_id: r.id,
            command: BehaviorCommand {
                v: rng.random_range(0.0..0.2),
                omega: rng.random_range(-1.0..1.0),
                gripper: match rng.random_range(0..10) {
                    0 => GripperAction::Grasp,
                    1 => GripperAction::Release,
                    _ => GripperAction::None,
                },
            },
        })
        .collect()
}

fn cube_census(world: &WorldState) -> (usize, usize, usize) {
    let mut loose = 0;
    let mut carried = 0;
    let mut banked = 0;
    for c in &world.cubes {
        match c.state {
            CubeState::Loose { .. } => loose += 1,
            CubeState::Carried { .. } => carried += 1,
            CubeState::Banked { .. } => banked += 1,
        }
    }
    (loose, carried, banked)
}

fn world_fingerprint(world: &WorldState) -> Vec<u64> {
    let mut bits = Vec::new();
    for r in &world.robots {
        bits.push(r.pose.x.to_bits());
        bits.push(r.pose.y.to_bits());
        bits.push(r.pose.theta.to_bits());
        bits.push(r.distance_traveled.to_bits());
    }
    for c in &world.cubes {
        match c.state {
            CubeState::Loose { x, y } => {
                bits.push(0);
                bits.push(x.to_bits());
                bits.push(y.to_bits());
            }
            CubeState::Carried { robot_id } => {
                bits.push(1);
                bits.push(robot_id as u64);
            }
            CubeState::Banked { x, y } => {
                bits.push(2);
                bits.push(x.to_bits());
                bits.push(y.to_bits());
            }
        }
    }
    bits
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Arbitrary command streams preserve every structural invariant and
    /// conserve the cube census total.
    #[test]
    fn stepping_preserves_invariants(seed in 0u64..1000, steps in 1usize..120) {
        let params = SimParams::default();
        let mut world = spawn(seed, 24, 4);
        let total = world.cubes.len();
        let mut cmd_rng = stream_rng(seed, 7777, 0);
        let mut mech: Vec<ChaCha8Rng> =
            (0..4).map(|i| stream_rng(seed, stream::MECH, i)).collect();
        for _ in 0..steps {
            let cmds = random_commands(&world, &mut cmd_rng);
            step_world(&mut world, &cmds, 0.1, &params, &mut mech).unwrap();
            let (l, c, b) = cube_census(&world);
            prop_assert_eq!(l + c + b, total);
            if let Err(e) = world.check_invariants(0.1) {
                return Err(TestCaseError::fail(e));
            }
        }
    }
}

#[test]
fn identical_inputs_give_bit_identical_worlds() {
    let params = SimParams::default();
    let run = || {
        let mut world = spawn(3, 32, 3);
        let mut cmd_rng = stream_rng(3, 7777, 0);
        let mut mech: Vec<ChaCha8Rng> = (0..3).map(|i| stream_rng(3, stream::MECH, i)).collect();
        for _ in 0..400 {
            let cmds = random_commands(&world, &mut cmd_rng);
            step_world(&mut world, &cmds, 0.1, &params, &mut mech).unwrap();
        }
        world_fingerprint(&world)
    };
    assert_eq!(run(), run());
}

#[test]
fn range_law_stops_motion_at_budget() {
    // v = 0.2 continuously: motion must stop after max_range / 0.2 seconds.
    let mut params = SimParams::default();
    params.max_range = 5750.0;
    let mut world = spawn(1, 0, 3);
    world.robots.truncate(1);
    world.robots[0].max_range = 2.0; // 10 seconds at cruise
    let mut mech = vec![stream_rng(1, stream::MECH, 0)];
    let cmds = vec![RobotCommand {
        robot_id: 0,
        command: BehaviorCommand {
            v: 0.2,
            omega: 0.05, // gentle arc so the wall never interferes
            gripper: GripperAction::None,
        },
    }];
    let dt = 0.1;
    let mut stopped_at = None;
    for step in 1..=200u32 {
        let before = world.robots[0].pose;
        step_world(&mut world, &cmds, dt, &params, &mut mech).unwrap();
        if world.robots[0].pose == before && stopped_at.is_none() {
            stopped_at = Some(step);
        }
    }
    assert_eq!(world.robots[0].distance_traveled, 2.0);
    // 2.0 m / 0.2 m/s = 10 s = 100 ticks; frozen from tick 101 on.
    assert_eq!(stopped_at, Some(101));
}
