//! Initial-world generation: arena presets, the robot spawn ring, and the
//! competition resource distributions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::SetupError;
use crate::params::SimParams;
use crate::rng::{stream, stream_rng};
use crate::world::{Arena, Cube, CubeState, Pose, RobotBody, WorldState};

/// Competition arena presets plus a free-size escape hatch for tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArenaPreset {
    /// 15 m x 15 m (225 m^2).
    Small15,
    /// 22 m x 22 m (484 m^2).
    Large22,
    Custom { side_length: f64 },
}

impl ArenaPreset {
    pub fn side_length(&self) -> f64 {
        match *self {
            ArenaPreset::Small15 => 15.0,
            ArenaPreset::Large22 => 22.0,
            ArenaPreset::Custom { side_length } => side_length,
        }
    }

    pub fn is_competition(&self) -> bool {
        !matches!(self, ArenaPreset::Custom { .. })
    }

    pub fn label(&self) -> String {
        match self {
            ArenaPreset::Small15 => "small15".into(),
            ArenaPreset::Large22 => "large22".into(),
            ArenaPreset::Custom { side_length } => format!("custom{side_length}"),
        }
    }
}

/// One cube pile: `count` cubes laid out `cubes_per_row` wide on a jittered
/// square grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSpec {
    pub count: usize,
    pub cubes_per_row: usize,
}

/// How resources are strewn over the arena.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    /// Independently uniform positions.
    Uniform { count: usize },
    /// Several piles of configurable size and shape.
    Clustered { clusters: Vec<ClusterSpec> },
    /// One big pile on a square grid.
    LargeCluster { count: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    /// No cube spawns closer than this to the zone center, meters.
    pub exclusion_radius: f64,
}

impl DistributionSpec {
    pub fn total_cubes(&self) -> usize {
        match &self.kind {
            DistributionKind::Uniform { count } | DistributionKind::LargeCluster { count } => *count,
            DistributionKind::Clustered { clusters } => clusters.iter().map(|c| c.count).sum(),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            DistributionKind::Uniform { count } => format!("uniform({count})"),
            DistributionKind::LargeCluster { count } => format!("large_cluster({count})"),
            DistributionKind::Clustered { clusters } => {
                let parts: Vec<String> = clusters
                    .iter()
                    .map(|c| format!("{}x{}", c.count, c.cubes_per_row))
                    .collect();
                format!("clustered({})", parts.join("+"))
            }
        }
    }
}

impl Default for DistributionSpec {
    fn default() -> Self {
        Self {
            kind: DistributionKind::Uniform { count: 128 },
            exclusion_radius: 1.5,
        }
    }
}

/// Grid pitch between pile neighbors.
fn pile_spacing(params: &SimParams) -> f64 {
    2.2 * params.cube_radius
}

/// Pile jitter: sigma 5 mm, truncated at 3 sigma so pile extents are bounded
/// and in-pile separations stay above a cube diameter after redraws.
const PILE_JITTER_SIGMA: f64 = 0.005;
const PILE_JITTER_MAX: f64 = 0.015;

const PLACEMENT_ATTEMPTS_PER_CUBE: usize = 200;

/// Build a legal starting world: robots on a ring just outside the
/// collection zone facing outward, cubes per the distribution, everything
/// deterministic in the seed.
pub fn generate_world(
    preset: ArenaPreset,
    robot_count: u32,
    dist: &DistributionSpec,
    seed: u64,
    params: &SimParams,
) -> Result<WorldState, SetupError> {
    if preset.is_competition() && !(3..=6).contains(&robot_count) {
        return Err(SetupError::RobotCount(robot_count));
    }
    let side = preset.side_length();
    let arena = Arena::new(side, params.zone_side);

    let ring_radius = arena.zone_half() + params.robot_radius + 0.1;
    if ring_radius + params.robot_radius >= arena.half_side() {
        return Err(SetupError::ArenaTooSmall(side));
    }

    let robots = (0..robot_count)
        .map(|i| {
            let angle = std::f64::consts::TAU * i as f64 / robot_count as f64;
            RobotBody {
                id: i,
                pose: Pose::new(ring_radius * angle.cos(), ring_radius * angle.sin(), angle),
                radius: params.robot_radius,
                carried_cube: None,
                distance_traveled: 0.0,
                max_range: params.max_range,
            }
        })
        .collect();

    let mut rng = stream_rng(seed, stream::SETUP, 0);
    let positions = place_cubes(&arena, dist, params, &mut rng)?;
    let cubes = positions
        .into_iter()
        .enumerate()
        .map(|(i, (x, y))| Cube {
            id: i as u32,
            state: CubeState::Loose { x, y },
        })
        .collect();

    Ok(WorldState {
        arena,
        robots,
        cubes,
        tick: 0,
        sim_time: 0.0,
    })
}

fn place_cubes(
    arena: &Arena,
    dist: &DistributionSpec,
    params: &SimParams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(f64, f64)>, SetupError> {
    match &dist.kind {
        DistributionKind::Uniform { count } => {
            place_uniform(arena, *count, dist.exclusion_radius, params, rng)
        }
        DistributionKind::Clustered { clusters } => {
            for c in clusters {
                if c.count == 0 || c.cubes_per_row == 0 {
                    return Err(SetupError::BadClusterSpec(
                        "cluster count and cubes_per_row must be >= 1".into(),
                    ));
                }
            }
            place_piles(arena, clusters, dist.exclusion_radius, params, rng)
        }
        DistributionKind::LargeCluster { count } => {
            if *count == 0 {
                return Err(SetupError::BadClusterSpec("cluster count must be >= 1".into()));
            }
            let per_row = (*count as f64).sqrt().ceil() as usize;
            place_piles(
                arena,
                &[ClusterSpec {
                    count: *count,
                    cubes_per_row: per_row,
                }],
                dist.exclusion_radius,
                params,
                rng,
            )
        }
    }
}

fn place_uniform(
    arena: &Arena,
    count: usize,
    exclusion_radius: f64,
    params: &SimParams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(f64, f64)>, SetupError> {
    let min_sep = 2.0 * params.cube_radius;
    let lim = arena.half_side() - params.cube_radius - 0.01;
    if lim <= exclusion_radius {
        return Err(SetupError::InfeasiblePacking {
            requested: count,
            placed: 0,
            side_length: arena.side_length,
            exclusion_radius,
            min_separation: min_sep,
        });
    }
    let mut placed: Vec<(f64, f64)> = Vec::with_capacity(count);
    let budget = count.max(1) * PLACEMENT_ATTEMPTS_PER_CUBE;
    let mut attempts = 0usize;
    while placed.len() < count {
        if attempts >= budget {
            return Err(SetupError::InfeasiblePacking {
                requested: count,
                placed: placed.len(),
                side_length: arena.side_length,
                exclusion_radius,
                min_separation: min_sep,
            });
        }
        attempts += 1;
        let x = rng.random_range(-lim..=lim);
        let y = rng.random_range(-lim..=lim);
        if x.hypot(y) < exclusion_radius {
            continue;
        }
        if placed.iter().any(|&(px, py)| (px - x).hypot(py - y) < min_sep) {
            continue;
        }
        placed.push((x, y));
    }
    Ok(placed)
}

fn place_piles(
    arena: &Arena,
    clusters: &[ClusterSpec],
    exclusion_radius: f64,
    params: &SimParams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(f64, f64)>, SetupError> {
    let spacing = pile_spacing(params);
    let min_sep = 2.0 * params.cube_radius;
    let jitter = Normal::new(0.0, PILE_JITTER_SIGMA).expect("finite sigma");
    let mut cubes: Vec<(f64, f64)> = Vec::new();
    let mut pile_footprints: Vec<(f64, f64, f64)> = Vec::new(); // (x, y, half-extent)

    for cluster in clusters {
        let cols = cluster.cubes_per_row;
        let rows = cluster.count.div_ceil(cols);
        let half_w = (cols - 1) as f64 * spacing / 2.0;
        let half_h = (rows - 1) as f64 * spacing / 2.0;
        let extent = half_w.max(half_h) + PILE_JITTER_MAX + params.cube_radius;

        let lim = arena.half_side() - extent - 0.05;
        if lim <= 0.0 || lim <= exclusion_radius - extent {
            return Err(SetupError::InfeasiblePacking {
                requested: cluster.count,
                placed: cubes.len(),
                side_length: arena.side_length,
                exclusion_radius,
                min_separation: min_sep,
            });
        }

        // Seeded rejection sampling for the pile center.
        let mut center = None;
        for _ in 0..10_000 {
            let cx = rng.random_range(-lim..=lim);
            let cy = rng.random_range(-lim..=lim);
            if cx.hypot(cy) < exclusion_radius + extent {
                continue;
            }
            let clear = pile_footprints
                .iter()
                .all(|&(px, py, pe)| (px - cx).hypot(py - cy) > pe + extent + 0.2);
            if clear {
                center = Some((cx, cy));
                break;
            }
        }
        let (cx, cy) = center.ok_or(SetupError::InfeasiblePacking {
            requested: cluster.count,
            placed: cubes.len(),
            side_length: arena.side_length,
            exclusion_radius,
            min_separation: min_sep,
        })?;
        pile_footprints.push((cx, cy, extent));

        let wall = arena.half_side() - params.cube_radius;
        for i in 0..cluster.count {
            let col = i % cols;
            let row = i / cols;
            let gx = cx + (col as f64 * spacing - half_w);
            let gy = cy + (row as f64 * spacing - half_h);
            // Redraw jitter until the cube clears its neighbors.
            let mut ok = None;
            for _ in 0..PLACEMENT_ATTEMPTS_PER_CUBE {
                let jx = jitter.sample(rng).clamp(-PILE_JITTER_MAX, PILE_JITTER_MAX);
                let jy = jitter.sample(rng).clamp(-PILE_JITTER_MAX, PILE_JITTER_MAX);
                let x = (gx + jx).clamp(-wall, wall);
                let y = (gy + jy).clamp(-wall, wall);
                if cubes.iter().all(|&(px, py)| (px - x).hypot(py - y) >= min_sep) {
                    ok = Some((x, y));
                    break;
                }
            }
            let pos = ok.ok_or(SetupError::InfeasiblePacking {
                requested: cluster.count,
                placed: cubes.len(),
                side_length: arena.side_length,
                exclusion_radius,
                min_separation: min_sep,
            })?;
            cubes.push(pos);
        }
    }
    Ok(cubes)
}
