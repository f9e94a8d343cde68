//! Ground-truth world model: poses, robot bodies, resource cubes, arena.
//!
//! Coordinates are arena-centered: the origin is the center of the collection
//! zone, +x east, +y north, headings counterclockwise from +x.

use std::f64::consts::{PI, TAU};

/// Normalize an angle to the half-open interval (-pi, pi].
///
/// Already-normalized inputs are returned unchanged (bit-identical), which
/// lets the estimator reproduce ground truth exactly in zero-noise runs.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// One timestep of the unicycle model: heading first, then translation with
/// the updated heading (semi-implicit Euler).
///
/// Returns `(dx, dy, theta_new)`. The ground-truth integrator and the EKF
/// prediction both call this, so with exact inputs they advance identically.
pub fn unicycle_delta(theta: f64, v: f64, omega: f64, dt: f64) -> (f64, f64, f64) {
    let theta_new = wrap_angle(theta + omega * dt);
    (v * theta_new.cos() * dt, v * theta_new.sin() * dt, theta_new)
}

/// Planar position plus heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, always in (-pi, pi].
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    /// Unit heading vector.
    pub fn heading(&self) -> (f64, f64) {
        (self.theta.cos(), self.theta.sin())
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        (self.x - x).hypot(self.y - y)
    }

    /// Bearing of a point relative to this pose's heading, wrapped.
    pub fn bearing_to(&self, x: f64, y: f64) -> f64 {
        wrap_angle((y - self.y).atan2(x - self.x) - self.theta)
    }
}

/// One robot's physical state. The footprint is a disc.
#[derive(Debug, Clone)]
pub struct RobotBody {
    pub id: u32,
    pub pose: Pose,
    pub radius: f64,
    /// Id of the cube currently held by the gripper, if any.
    pub carried_cube: Option<u32>,
    /// Total path length driven so far, meters.
    pub distance_traveled: f64,
    /// Distance budget; once exhausted the robot no longer moves.
    pub max_range: f64,
}

impl RobotBody {
    /// Gripper mount point on the footprint boundary, along the heading.
    pub fn front_point(&self) -> (f64, f64) {
        let (hx, hy) = self.pose.heading();
        (self.pose.x + self.radius * hx, self.pose.y + self.radius * hy)
    }

    /// True once the distance budget is spent; commands then yield zero motion.
    pub fn exhausted(&self) -> bool {
        self.distance_traveled >= self.max_range
    }
}

/// Where a cube is. Exactly one variant at a time; the total cube count is
/// conserved over a round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubeState {
    /// On the ground, collectable.
    Loose { x: f64, y: f64 },
    /// In a robot's gripper.
    Carried { robot_id: u32 },
    /// Delivered inside the collection zone. Counts toward the score until
    /// (and unless) it is pushed back out, which reverts it to `Loose`.
    Banked { x: f64, y: f64 },
}

#[derive(Debug, Clone)]
pub struct Cube {
    pub id: u32,
    pub state: CubeState,
}

impl Cube {
    /// Ground position for cubes that have one.
    pub fn position(&self) -> Option<(f64, f64)> {
        match self.state {
            CubeState::Loose { x, y } | CubeState::Banked { x, y } => Some((x, y)),
            CubeState::Carried { .. } => None,
        }
    }
}

/// Square arena with a centered square collection zone. Walls at
/// +-side_length/2 on both axes.
#[derive(Debug, Clone, Copy)]
pub struct Arena {
    pub side_length: f64,
    pub zone_side: f64,
}

impl Arena {
    pub fn new(side_length: f64, zone_side: f64) -> Self {
        assert!(
            zone_side < side_length,
            "collection zone must fit strictly inside the arena"
        );
        Self {
            side_length,
            zone_side,
        }
    }

    pub fn half_side(&self) -> f64 {
        self.side_length / 2.0
    }

    pub fn zone_half(&self) -> f64 {
        self.zone_side / 2.0
    }

    /// Is the point inside the collection zone (boundary inclusive)?
    pub fn in_zone(&self, x: f64, y: f64) -> bool {
        let zh = self.zone_half();
        x.abs() <= zh && y.abs() <= zh
    }

    /// Does a disc of radius `r` at (x, y) lie fully inside the walls?
    pub fn disc_inside(&self, x: f64, y: f64, r: f64) -> bool {
        let lim = self.half_side() - r;
        x.abs() <= lim && y.abs() <= lim
    }

    /// Positions of `count` tags spaced evenly along the collection-zone
    /// perimeter, walking counterclockwise from the (+zh, -zh) corner.
    pub fn zone_marker_positions(&self, count: usize) -> Vec<(f64, f64)> {
        let zh = self.zone_half();
        let perimeter = 8.0 * zh;
        // Corners in walking order: SE -> NE -> NW -> SW.
        let corners = [(zh, -zh), (zh, zh), (-zh, zh), (-zh, -zh)];
        let dirs = [(0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)];
        let edge = 2.0 * zh;
        (0..count)
            .map(|k| {
                let s = perimeter * k as f64 / count as f64;
                let seg = ((s / edge) as usize).min(3);
                let along = s - seg as f64 * edge;
                let (cx, cy) = corners[seg];
                let (dx, dy) = dirs[seg];
                (cx + dx * along, cy + dy * along)
            })
            .collect()
    }
}

/// Complete ground-truth simulation state.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub arena: Arena,
    pub robots: Vec<RobotBody>,
    pub cubes: Vec<Cube>,
    /// Number of completed steps.
    pub tick: u64,
    /// Simulated seconds; always exactly `tick * dt`.
    pub sim_time: f64,
}

impl WorldState {
    /// Round score: cubes currently banked in the collection zone.
    pub fn score(&self) -> u32 {
        self.cubes
            .iter()
            .filter(|c| matches!(c.state, CubeState::Banked { .. }))
            .count() as u32
    }

    pub fn robot(&self, id: u32) -> Option<&RobotBody> {
        self.robots.iter().find(|r| r.id == id)
    }

    pub fn robot_index(&self, id: u32) -> Option<usize> {
        self.robots.iter().position(|r| r.id == id)
    }

    /// Validate the structural invariants. Returns a description of the
    /// first violation found. Intended for tests and debug builds.
    pub fn check_invariants(&self, dt: f64) -> Result<(), String> {
        for r in &self.robots {
            if !(r.pose.theta > -PI && r.pose.theta <= PI) {
                return Err(format!("robot {} heading not normalized: {}", r.id, r.pose.theta));
            }
            if !self.arena.disc_inside(r.pose.x, r.pose.y, r.radius) {
                return Err(format!(
                    "robot {} outside walls at ({}, {})",
                    r.id, r.pose.x, r.pose.y
                ));
            }
            if r.distance_traveled < 0.0 {
                return Err(format!("robot {} negative distance", r.id));
            }
            if let Some(cid) = r.carried_cube {
                let held = self.cubes.iter().find(|c| c.id == cid);
                match held {
                    Some(c) if c.state == (CubeState::Carried { robot_id: r.id }) => {}
                    _ => return Err(format!("robot {} carry link broken for cube {}", r.id, cid)),
                }
            }
        }
        for (i, a) in self.robots.iter().enumerate() {
            for b in self.robots.iter().skip(i + 1) {
                let d = a.pose.distance_to(b.pose.x, b.pose.y);
                if d < a.radius + b.radius {
                    return Err(format!(
                        "robots {} and {} interpenetrate: {} < {}",
                        a.id,
                        b.id,
                        d,
                        a.radius + b.radius
                    ));
                }
            }
        }
        for c in &self.cubes {
            if let CubeState::Carried { robot_id } = c.state {
                let holder = self.robot(robot_id);
                if holder.map(|r| r.carried_cube) != Some(Some(c.id)) {
                    return Err(format!("cube {} carried by {} without back-link", c.id, robot_id));
                }
            }
        }
        let expect = self.tick as f64 * dt;
        if self.sim_time != expect {
            return Err(format!("sim_time {} != tick*dt {}", self.sim_time, expect));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wrap_angle_covers_boundaries() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_abs_diff_eq!(wrap_angle(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(-2.5 * PI), -0.5 * PI, epsilon = 1e-12);
        assert_eq!(wrap_angle(0.3), 0.3);
        // Identity on already-normalized values must be bit-exact.
        let v = -1.234567891234_f64;
        assert_eq!(wrap_angle(v).to_bits(), v.to_bits());
    }

    #[test]
    fn unicycle_straight_line() {
        let (dx, dy, th) = unicycle_delta(0.0, 0.2, 0.0, 0.1);
        assert_abs_diff_eq!(dx, 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(dy, 0.0, epsilon = 1e-15);
        assert_eq!(th, 0.0);
    }

    #[test]
    fn zone_markers_lie_on_perimeter() {
        let a = Arena::new(15.0, 1.0);
        let markers = a.zone_marker_positions(16);
        assert_eq!(markers.len(), 16);
        for (x, y) in markers {
            let zh = a.zone_half();
            let on_vertical = (x.abs() - zh).abs() < 1e-12 && y.abs() <= zh + 1e-12;
            let on_horizontal = (y.abs() - zh).abs() < 1e-12 && x.abs() <= zh + 1e-12;
            assert!(on_vertical || on_horizontal, "({x}, {y}) off the perimeter");
        }
        // Evenly spaced: consecutive arc distance is perimeter/16.
        let m = a.zone_marker_positions(16);
        let step = 8.0 * a.zone_half() / 16.0;
        for w in m.windows(2) {
            let d = (w[0].0 - w[1].0).hypot(w[0].1 - w[1].1);
            // Across a corner the chord is shorter than the arc.
            assert!(d <= step + 1e-12);
        }
    }

    #[test]
    fn bearing_wraps() {
        let p = Pose::new(0.0, 0.0, 3.0);
        let b = p.bearing_to(-1.0, -0.5);
        assert!(b.abs() <= PI);
    }
}
