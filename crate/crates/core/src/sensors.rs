//! Sensor models: three ultrasound rangefinders, a fiducial-detecting
//! camera, and noisy navigation samples (encoders, IMU heading, GPS fixes).
//!
//! All functions are pure in (world, rng stream); frames for different robots
//! can be produced in any order without affecting each other.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::params::{NoiseParams, SensorParams};
use crate::sim::ExecutedMotion;
use crate::world::{wrap_angle, WorldState};

/// Ultrasound readings never report zero; a transducer has a dead zone.
const ULTRASOUND_MIN: f64 = 1e-6;

/// One rangefinder sample. `sensor_index`: 0 = left, 1 = center, 2 = right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltrasoundReading {
    pub sensor_index: u8,
    pub range: f64,
}

/// What kind of fiducial the camera recognized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagKind {
    ResourceCube,
    ZoneBoundary,
}

/// A symbolic fiducial detection: which tag, where, relative to the robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TagDetection {
    pub kind: TagKind,
    pub tag_id: u32,
    pub relative_bearing: f64,
    pub distance: f64,
}

/// Raw navigation samples for one tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawNavSamples {
    pub encoder_v: f64,
    pub encoder_omega: f64,
    pub imu_heading: f64,
    /// Present only on ticks aligned with the GPS period.
    pub gps_fix: Option<(f64, f64)>,
}

/// Everything one robot perceives in one tick.
#[derive(Debug, Clone)]
pub struct SensorFrame {
    pub robot_id: u32,
    pub tick: u64,
    pub ultrasound: [UltrasoundReading; 3],
    pub detections: Vec<TagDetection>,
    pub nav: RawNavSamples,
    /// Gripper load feedback: whether the gripper currently holds a cube.
    pub carrying: bool,
}

impl SensorFrame {
    /// Smallest of the three ranges.
    pub fn min_ultrasound(&self) -> f64 {
        self.ultrasound
            .iter()
            .map(|u| u.range)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Cast the three ultrasound rays. Each ray starts on the footprint edge
/// along its mount bearing; range is the distance to the nearest wall or
/// other-robot disc, capped at the sensor range. Cubes are too small to
/// register.
pub fn sense_ultrasound(
    world: &WorldState,
    robot_id: u32,
    params: &SensorParams,
) -> [UltrasoundReading; 3] {
    let robot = world.robot(robot_id).expect("robot exists");
    let mut out = [UltrasoundReading {
        sensor_index: 0,
        range: params.ultrasound_range,
    }; 3];
    for (i, mount) in params.ultrasound_mounts.iter().enumerate() {
        let dir_angle = robot.pose.theta + mount;
        let (dx, dy) = (dir_angle.cos(), dir_angle.sin());
        let ox = robot.pose.x + robot.radius * dx;
        let oy = robot.pose.y + robot.radius * dy;

        let mut range = ray_to_walls(world.arena.half_side(), ox, oy, dx, dy);
        for other in &world.robots {
            if other.id == robot_id {
                continue;
            }
            if let Some(t) = ray_disc(ox, oy, dx, dy, other.pose.x, other.pose.y, other.radius) {
                range = range.min(t);
            }
        }
        out[i] = UltrasoundReading {
            sensor_index: i as u8,
            range: range.clamp(ULTRASOUND_MIN, params.ultrasound_range),
        };
    }
    out
}

/// Distance along (dx, dy) from an interior point to the arena boundary.
fn ray_to_walls(half: f64, ox: f64, oy: f64, dx: f64, dy: f64) -> f64 {
    let mut t = f64::INFINITY;
    if dx > 0.0 {
        t = t.min((half - ox) / dx);
    } else if dx < 0.0 {
        t = t.min((-half - ox) / dx);
    }
    if dy > 0.0 {
        t = t.min((half - oy) / dy);
    } else if dy < 0.0 {
        t = t.min((-half - oy) / dy);
    }
    t.max(0.0)
}

/// First intersection of a unit-direction ray with a disc, if ahead.
fn ray_disc(ox: f64, oy: f64, dx: f64, dy: f64, cx: f64, cy: f64, r: f64) -> Option<f64> {
    let px = ox - cx;
    let py = oy - cy;
    let b = 2.0 * (px * dx + py * dy);
    let c = px * px + py * py - r * r;
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return None;
    }
    let t = (-b - disc.sqrt()) / 2.0;
    if t >= 0.0 {
        Some(t)
    } else if c < 0.0 {
        // Origin inside the disc: contact at zero range.
        Some(0.0)
    } else {
        None
    }
}

/// Camera sweep: every loose or banked cube and every zone-perimeter tag
/// whose center is within range and inside the field of view. Occlusion is
/// ignored; carried cubes are invisible. Bearings and distances are exact
/// unless detection noise is enabled.
pub fn sense_camera(
    world: &WorldState,
    robot_id: u32,
    params: &SensorParams,
    noise: &NoiseParams,
    rng: &mut ChaCha8Rng,
) -> Vec<TagDetection> {
    let robot = world.robot(robot_id).expect("robot exists");
    let pose = robot.pose;
    let mut out = Vec::new();

    let mut consider = |kind: TagKind, tag_id: u32, x: f64, y: f64, out: &mut Vec<TagDetection>| {
        let distance = pose.distance_to(x, y);
        if distance > params.camera_range {
            return;
        }
        let bearing = pose.bearing_to(x, y);
        if bearing.abs() > params.camera_half_angle {
            return;
        }
        let (distance, bearing) =
            if noise.sigma_detection_range > 0.0 || noise.sigma_detection_bearing > 0.0 {
                let dn = Normal::new(0.0, noise.sigma_detection_range).expect("finite sigma");
                let bn = Normal::new(0.0, noise.sigma_detection_bearing).expect("finite sigma");
                (
                    (distance + dn.sample(rng)).clamp(ULTRASOUND_MIN, params.camera_range),
                    (bearing + bn.sample(rng))
                        .clamp(-params.camera_half_angle, params.camera_half_angle),
                )
            } else {
                (distance, bearing)
            };
        out.push(TagDetection {
            kind,
            tag_id,
            relative_bearing: bearing,
            distance,
        });
    };

    for cube in &world.cubes {
        if let Some((x, y)) = cube.position() {
            consider(TagKind::ResourceCube, cube.id, x, y, &mut out);
        }
    }
    for (k, (x, y)) in world
        .arena
        .zone_marker_positions(params.zone_marker_count)
        .into_iter()
        .enumerate()
    {
        consider(TagKind::ZoneBoundary, k as u32, x, y, &mut out);
    }
    out
}

/// Whether a GPS fix is due at `tick` given the fix period.
pub fn gps_due(tick: u64, gps_period_s: f64, dt: f64) -> bool {
    let ticks_per_fix = (gps_period_s / dt).round().max(1.0) as u64;
    tick % ticks_per_fix == 0
}

/// Noisy navigation samples for the motion just executed. Call once per tick
/// after the world step; encoder values describe what the wheels actually
/// did, so clamped motion is reflected honestly.
pub fn sample_nav(
    world: &WorldState,
    robot_id: u32,
    executed: &ExecutedMotion,
    noise: &NoiseParams,
    dt: f64,
    rng: &mut ChaCha8Rng,
) -> RawNavSamples {
    let robot = world.robot(robot_id).expect("robot exists");
    let enc = Normal::new(0.0, noise.sigma_encoder).expect("finite sigma");
    let imu = Normal::new(0.0, noise.sigma_imu).expect("finite sigma");

    let encoder_v = executed.v * (1.0 + enc.sample(rng));
    let encoder_omega = executed.omega * (1.0 + enc.sample(rng));
    let imu_heading = wrap_angle(robot.pose.theta + imu.sample(rng));

    let gps_fix = if gps_due(world.tick, noise.gps_period_s, dt) {
        let gn = Normal::new(0.0, noise.sigma_gps).expect("finite sigma");
        Some((
            robot.pose.x + gn.sample(rng),
            robot.pose.y + gn.sample(rng),
        ))
    } else {
        None
    };

    RawNavSamples {
        encoder_v,
        encoder_omega,
        imu_heading,
        gps_fix,
    }
}
