//! Tunable parameters, grouped by subsystem, with competition defaults.
//!
//! Everything here can be overridden from a round-config file; unknown keys
//! are rejected at parse time.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Physical and mechanical constants of the simulated world.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimParams {
    /// Fixed integrator timestep, seconds.
    pub dt: f64,
    /// Robot footprint disc radius, meters.
    pub robot_radius: f64,
    /// Resource cube disc radius, meters.
    pub cube_radius: f64,
    /// Collection-zone side length, meters.
    pub zone_side: f64,
    /// Top linear speed, m/s.
    pub v_max: f64,
    /// Top turn rate, rad/s.
    pub omega_max: f64,
    /// Per-robot distance budget, meters (8 h at cruise speed).
    pub max_range: f64,
    /// Grasp reach beyond the footprint front, meters.
    pub grasp_reach: f64,
    /// Grasp half-angle about the heading, radians.
    pub grasp_half_angle: f64,
    /// Probability a grasp attempt on an eligible cube succeeds.
    pub grasp_success_prob: f64,
    /// Std-dev of the position jitter applied to a fumbled cube, meters.
    pub fumble_sigma: f64,
    /// Clearance placed between a pushed cube and the pushing robot, meters.
    pub push_epsilon: f64,
    /// Whether robots displace loose/banked cubes they drive over.
    pub pushing_enabled: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            dt: 0.1,
            robot_radius: 0.15,
            cube_radius: 0.035,
            zone_side: 1.0,
            v_max: 0.2,
            omega_max: 1.0,
            max_range: 5750.0,
            grasp_reach: 0.1,
            grasp_half_angle: 0.3,
            grasp_success_prob: 0.95,
            fumble_sigma: 0.01,
            push_epsilon: 0.005,
            pushing_enabled: true,
        }
    }
}

impl SimParams {
    /// Distance from robot center at which a dropped or pushed cube comes to
    /// rest: footprint radius + cube radius + clearance.
    pub fn placement_offset(&self) -> f64 {
        self.robot_radius + self.cube_radius + self.push_epsilon
    }
}

/// Sensor envelopes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorParams {
    /// Ultrasound max range, meters.
    pub ultrasound_range: f64,
    /// Mount bearings of the three ultrasounds relative to heading,
    /// index 0 = left, 1 = center, 2 = right.
    pub ultrasound_mounts: [f64; 3],
    /// Camera detection range, meters.
    pub camera_range: f64,
    /// Camera half-angle (1 rad arc), radians.
    pub camera_half_angle: f64,
    /// Number of fiducial tags on the collection-zone perimeter.
    pub zone_marker_count: usize,
}

impl Default for SensorParams {
    fn default() -> Self {
        Self {
            ultrasound_range: 3.0,
            ultrasound_mounts: [PI / 6.0, 0.0, -PI / 6.0],
            camera_range: 1.0,
            camera_half_angle: 0.5,
            zone_marker_count: 16,
        }
    }
}

/// Sensor noise magnitudes. All zero means every sample reproduces ground
/// truth exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseParams {
    /// Multiplicative encoder noise: measured = executed * (1 + N(0, sigma)).
    pub sigma_encoder: f64,
    /// Additive absolute-heading noise on the IMU/magnetometer, radians.
    pub sigma_imu: f64,
    /// Additive per-axis GPS noise, meters.
    pub sigma_gps: f64,
    /// GPS fix period, seconds.
    pub gps_period_s: f64,
    /// Optional camera range noise, meters (0 = exact detections).
    pub sigma_detection_range: f64,
    /// Optional camera bearing noise, radians (0 = exact detections).
    pub sigma_detection_bearing: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            sigma_encoder: 0.02,
            sigma_imu: 0.05,
            sigma_gps: 1.0,
            gps_period_s: 1.0,
            sigma_detection_range: 0.0,
            sigma_detection_bearing: 0.0,
        }
    }
}

/// Filter tuning.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EkfParams {
    /// Process-noise floor on x/y, m^2 per second.
    pub q_pos_floor: f64,
    /// Process-noise floor on heading, rad^2 per second.
    pub q_theta_floor: f64,
    /// Initial variance on every state dimension (robots start at known
    /// poses beside the collection zone).
    pub init_var: f64,
}

impl Default for EkfParams {
    fn default() -> Self {
        Self {
            q_pos_floor: 1e-6,
            q_theta_floor: 1e-6,
            init_var: 1e-4,
        }
    }
}

/// Behavior-layer gains and thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerParams {
    /// Ultrasound reading below which the avoidance layer preempts, meters.
    pub avoid_threshold: f64,
    /// Forward creep speed while avoiding, m/s.
    pub avoid_creep_v: f64,
    /// The avoidance turn holds until every reading clears the threshold
    /// plus this hysteresis, meters.
    pub avoid_hysteresis: f64,
    /// Forward escape distance driven after the turn clears, meters.
    pub avoid_escape_dist: f64,
    /// Proportional heading gain for waypoint navigation.
    pub k_heading: f64,
    /// Proportional bearing gain while approaching a cube.
    pub k_approach: f64,
    /// Waypoint reached when the estimated distance drops below this, meters.
    pub goal_tolerance: f64,
    /// Emit Grasp when a cube detection is nearer than this (from robot
    /// center), meters. Must keep the cube inside the true grasp envelope.
    pub grasp_trigger_dist: f64,
    /// ... and its bearing magnitude is below this, radians.
    pub grasp_trigger_bearing: f64,
    /// Creep speed while closing the last centimeters on a cube, m/s.
    pub approach_creep_v: f64,
    /// Distance below which approach speed scales down, meters.
    pub approach_slow_radius: f64,
    /// Release only when the estimated placement point is this far inside
    /// the zone boundary, meters.
    pub drop_margin: f64,
    /// Start scanning for zone markers when the estimated distance to the
    /// zone center falls below this, meters.
    pub zone_approach_radius: f64,
    /// Fraction of omega_max used for the in-place marker scan.
    pub scan_omega_frac: f64,
    /// Forward distance of one scan-relocation nudge, meters.
    pub scan_nudge_dist: f64,
    /// Cube detections whose estimated position is within the zone half-side
    /// plus this margin are treated as banked stock, not pickup targets.
    pub banked_filter_margin: f64,
    /// An empty robot closer to the zone center than this drives clear
    /// before searching, so it does not plow banked cubes back out.
    pub zone_exit_radius: f64,
}

impl Default for ControllerParams {
    fn default() -> Self {
        Self {
            avoid_threshold: 0.4,
            avoid_creep_v: 0.05,
            avoid_hysteresis: 0.15,
            avoid_escape_dist: 0.35,
            k_heading: 2.0,
            k_approach: 2.0,
            goal_tolerance: 0.5,
            grasp_trigger_dist: 0.23,
            grasp_trigger_bearing: 0.2,
            approach_creep_v: 0.04,
            approach_slow_radius: 0.5,
            drop_margin: 0.08,
            zone_approach_radius: 1.2,
            scan_omega_frac: 0.6,
            scan_nudge_dist: 0.5,
            banked_filter_margin: 0.1,
            zone_exit_radius: 1.1,
        }
    }
}

/// Aggregate of everything a round needs besides the world itself.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub sim: SimParams,
    pub sensors: SensorParams,
    pub noise: NoiseParams,
    pub ekf: EkfParams,
    pub controller: ControllerParams,
}
