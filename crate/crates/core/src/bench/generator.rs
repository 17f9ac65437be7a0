//! Deterministic synthetic road networks.
//!
//! Roads start on a jittered grid over a `WORLD_SIZE` square and walk with
//! random turns whose magnitude is uniform in `[MIN_TURN_DEG, MAX_TURN_DEG]`.
//! Candidate segments are rejection-sampled so that
//!
//! - every vertex stays inside the world square,
//! - non-adjacent segments of the same road stay `CLEARANCE` apart,
//! - each segment is at least `CLEARANCE * tan(turn / 2)` long for the turns
//!   at both of its ends.
//!
//! A stroke up to `CLEARANCE` world units wide therefore never folds onto
//! itself, and the bisector trimming in the tessellator always applies.
//! Each road aims for `max(1, round(density * MAX_TURNS))` turns and stops
//! early if no candidate fits, so its vertex count lies in
//! `[2, max(1, round(density * MAX_TURNS)) + 2]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, Polyline, Vec2};
use crate::ingest::Scene;

pub const WORLD_SIZE: f64 = 1000.0;
pub const CLEARANCE: f64 = 16.0;
pub const MAX_TURNS: usize = 12;
pub const MIN_TURN_DEG: f64 = 5.0;
pub const MAX_TURN_DEG: f64 = 175.0;
const BASE_LENGTH: (f64, f64) = (40.0, 140.0);
const MAX_TRIES: usize = 200;

/// Target number of turns per road for a density.
pub fn turns_per_road(density: f64) -> usize {
    ((density * MAX_TURNS as f64).round() as usize).max(1)
}

pub fn gen_network(seed: u64, n_roads: usize, density: f64) -> Result<Scene> {
    if n_roads == 0 {
        return Err(Error::InvalidArgument("network needs at least one road".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!("density must lie in (0, 1], got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = (n_roads as f64).sqrt().ceil() as usize;
    let cell = WORLD_SIZE / grid as f64;
    let turns = turns_per_road(density);

    let roads = (0..n_roads)
        .map(|r| {
            let (gx, gy) = ((r % grid) as f64, (r / grid) as f64);
            let start = Vec2::new(
                (gx + 0.5 + rng.gen_range(-0.25..0.25)) * cell,
                (gy + 0.5 + rng.gen_range(-0.25..0.25)) * cell,
            );
            gen_road(&mut rng, start, turns)
        })
        .collect::<Result<Vec<_>>>()?;
    Scene::new(roads)
}

/// `count` networks with seeds `first_seed..first_seed + count` and
/// densities `1/count, 2/count, ..., 1`.
pub fn standard_networks(first_seed: u64, count: usize, n_roads: usize) -> Result<Vec<(u64, Scene)>> {
    (0..count)
        .map(|i| {
            let seed = first_seed + i as u64;
            Ok((seed, gen_network(seed, n_roads, (i + 1) as f64 / count as f64)?))
        })
        .collect()
}

fn gen_road(rng: &mut ChaCha8Rng, start: Vec2, turns: usize) -> Result<Polyline> {
    let min_turn = MIN_TURN_DEG.to_radians();
    let max_turn = MAX_TURN_DEG.to_radians();
    let mut verts = vec![start];
    let mut heading = rng.gen_range(0.0..std::f64::consts::TAU);
    // turn taken at the start of the segment being placed
    let mut prev_turn = 0.0f64;

    'segments: while verts.len() < turns + 2 {
        let is_last = verts.len() == turns + 1;
        for _ in 0..MAX_TRIES {
            let next_turn = if is_last {
                0.0
            } else {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * rng.gen_range(min_turn..=max_turn)
            };
            let len = rng
                .gen_range(BASE_LENGTH.0..BASE_LENGTH.1)
                .max(CLEARANCE * (prev_turn.abs() * 0.5).tan())
                .max(CLEARANCE * (next_turn.abs() * 0.5).tan());
            let from = *verts.last().unwrap();
            let to = from + Vec2::new(heading.cos(), heading.sin()) * len;
            if fits(&verts, from, to) {
                verts.push(to);
                heading += next_turn;
                prev_turn = next_turn;
                continue 'segments;
            }
            if verts.len() == 1 {
                heading = rng.gen_range(0.0..std::f64::consts::TAU);
            }
        }
        break;
    }
    Polyline::new(verts)
}

fn fits(verts: &[Vec2], from: Vec2, to: Vec2) -> bool {
    let inside = |p: Vec2| (0.0..=WORLD_SIZE).contains(&p.x) && (0.0..=WORLD_SIZE).contains(&p.y);
    if !inside(to) {
        return false;
    }
    // the new segment starts at verts[n-1]; segment verts[n-2]..verts[n-1] is adjacent
    let n = verts.len();
    (0..n.saturating_sub(2)).all(|i| segment_distance(verts[i], verts[i + 1], from, to) >= CLEARANCE)
}

fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

pub(crate) fn segment_distance(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}
