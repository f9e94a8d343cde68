//! Trace file format: delimited text, one state row per robot per interval,
//! with event rows interleaved under a sentinel robot id.
//!
//! Every row has exactly twelve comma-separated fields. State rows follow
//! the header; event rows put the event name in the fourth field and their
//! arguments after it, padded with empty fields. Floats are written with
//! fixed precision so identical runs produce identical bytes.

use forage_core::{CubeState, Pose, WorldState};

use crate::error::HarnessError;

pub const TRACE_HEADER: &str =
    "tick,time_s,robot_id,true_x,true_y,true_theta,est_x,est_y,est_theta,mode,carrying,score";

/// robot_id used by event and metadata rows.
pub const EVENT_SENTINEL: &str = "-1";

const FIELDS: usize = 12;

fn fmt_f(v: f64) -> String {
    format!("{v:.6}")
}

/// Incremental trace builder.
pub struct TraceWriter {
    out: String,
}

impl TraceWriter {
    /// Start a trace: header row, then a META event row carrying the arena
    /// geometry a renderer needs.
    pub fn new(arena_side: f64, zone_side: f64, dt: f64, robot_count: u32) -> Self {
        let mut out = String::with_capacity(64 * 1024);
        out.push_str(TRACE_HEADER);
        out.push('\n');
        let mut w = Self { out };
        w.event_row(
            0,
            0.0,
            "META",
            &[
                &fmt_f(arena_side),
                &fmt_f(zone_side),
                &fmt_f(dt),
                &robot_count.to_string(),
            ],
        );
        w
    }

    pub fn state_row(
        &mut self,
        tick: u64,
        time_s: f64,
        robot_id: u32,
        truth: &Pose,
        est: &Pose,
        mode: &str,
        carrying: bool,
        score: u32,
    ) {
        let row = [
            tick.to_string(),
            fmt_f(time_s),
            robot_id.to_string(),
            fmt_f(truth.x),
            fmt_f(truth.y),
            fmt_f(truth.theta),
            fmt_f(est.x),
            fmt_f(est.y),
            fmt_f(est.theta),
            mode.to_string(),
            carrying.to_string(),
            score.to_string(),
        ];
        self.push_row(&row);
    }

    /// Event row: sentinel robot id, event name, then arguments.
    pub fn event_row(&mut self, tick: u64, time_s: f64, name: &str, args: &[&str]) {
        let mut row = vec![tick.to_string(), fmt_f(time_s), EVENT_SENTINEL.to_string()];
        row.push(name.to_string());
        for a in args {
            row.push((*a).to_string());
        }
        while row.len() < FIELDS {
            row.push(String::new());
        }
        debug_assert!(row.len() == FIELDS, "event row too wide");
        self.push_row(&row);
    }

    /// Final cube positions, one CUBE row each, so a renderer can draw the
    /// end state. Carried cubes are written at their robot's gripper point.
    pub fn final_cubes(&mut self, world: &WorldState, time_s: f64) {
        for cube in &world.cubes {
            let (state, x, y) = match cube.state {
                CubeState::Loose { x, y } => ("Loose", x, y),
                CubeState::Banked { x, y } => ("Banked", x, y),
                CubeState::Carried { robot_id } => {
                    let (x, y) = world
                        .robot(robot_id)
                        .map(|r| r.front_point())
                        .unwrap_or((0.0, 0.0));
                    ("Carried", x, y)
                }
            };
            self.event_row(
                world.tick,
                time_s,
                "CUBE",
                &[&cube.id.to_string(), state, &fmt_f(x), &fmt_f(y)],
            );
        }
    }

    pub fn finish(self) -> String {
        self.out
    }

    fn push_row(&mut self, fields: &[String]) {
        self.out.push_str(&fields.join(","));
        self.out.push('\n');
    }
}

/// One parsed state row.
#[derive(Debug, Clone, PartialEq)]
pub struct StateRow {
    pub tick: u64,
    pub time_s: f64,
    pub robot_id: u32,
    pub true_x: f64,
    pub true_y: f64,
    pub true_theta: f64,
    pub est_x: f64,
    pub est_y: f64,
    pub est_theta: f64,
    pub mode: String,
    pub carrying: bool,
    pub score: u32,
}

/// One parsed event row (including META and CUBE rows).
#[derive(Debug, Clone, PartialEq)]
pub struct EventRow {
    pub tick: u64,
    pub time_s: f64,
    pub name: String,
    pub args: Vec<String>,
}

/// A decoded trace.
#[derive(Debug, Clone, Default)]
pub struct TraceData {
    pub arena_side: f64,
    pub zone_side: f64,
    pub states: Vec<StateRow>,
    pub events: Vec<EventRow>,
}

impl TraceData {
    /// Robot ids in first-appearance order.
    pub fn robot_ids(&self) -> Vec<u32> {
        let mut ids = Vec::new();
        for s in &self.states {
            if !ids.contains(&s.robot_id) {
                ids.push(s.robot_id);
            }
        }
        ids
    }

    /// Final CUBE rows: (id, state, x, y).
    pub fn final_cubes(&self) -> Vec<(u32, String, f64, f64)> {
        self.events
            .iter()
            .filter(|e| e.name == "CUBE")
            .filter_map(|e| {
                Some((
                    e.args.first()?.parse().ok()?,
                    e.args.get(1)?.clone(),
                    e.args.get(2)?.parse().ok()?,
                    e.args.get(3)?.parse().ok()?,
                ))
            })
            .collect()
    }
}

pub fn parse_trace(text: &str) -> Result<TraceData, HarnessError> {
    let mut data = TraceData {
        // Sensible default geometry for handwritten or header-only traces.
        arena_side: 15.0,
        zone_side: 1.0,
        ..Default::default()
    };
    let bad = |line: usize, message: &str| HarnessError::TraceParse {
        line,
        message: message.to_string(),
    };

    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line != TRACE_HEADER {
                return Err(bad(1, "missing or malformed header row"));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != FIELDS {
            return Err(bad(i + 1, &format!("expected {FIELDS} fields, got {}", fields.len())));
        }
        let tick: u64 = fields[0].parse().map_err(|_| bad(i + 1, "bad tick"))?;
        let time_s: f64 = fields[1].parse().map_err(|_| bad(i + 1, "bad time_s"))?;
        if fields[2] == EVENT_SENTINEL {
            let name = fields[3].to_string();
            let args: Vec<String> = fields[4..]
                .iter()
                .take_while(|f| !f.is_empty())
                .map(|f| f.to_string())
                .collect();
            if name == "META" {
                data.arena_side = args
                    .first()
                    .and_then(|a| a.parse().ok())
                    .ok_or_else(|| bad(i + 1, "META row needs arena_side"))?;
                data.zone_side = args
                    .get(1)
                    .and_then(|a| a.parse().ok())
                    .ok_or_else(|| bad(i + 1, "META row needs zone_side"))?;
            }
            data.events.push(EventRow {
                tick,
                time_s,
                name,
                args,
            });
        } else {
            let f = |idx: usize, what: &str| -> Result<f64, HarnessError> {
                fields[idx].parse().map_err(|_| bad(i + 1, what))
            };
            data.states.push(StateRow {
                tick,
                time_s,
                robot_id: fields[2].parse().map_err(|_| bad(i + 1, "bad robot_id"))?,
                true_x: f(3, "bad true_x")?,
                true_y: f(4, "bad true_y")?,
                true_theta: f(5, "bad true_theta")?,
                est_x: f(6, "bad est_x")?,
                est_y: f(7, "bad est_y")?,
                est_theta: f(8, "bad est_theta")?,
                mode: fields[9].to_string(),
                carrying: fields[10]
                    .parse()
                    .map_err(|_| bad(i + 1, "bad carrying flag"))?,
                score: fields[11].parse().map_err(|_| bad(i + 1, "bad score"))?,
            });
        }
    }
    Ok(data)
}
