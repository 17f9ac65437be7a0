//! Vector math and the join construction used by the stroker.
//!
//! A join is built on the outer side of a turn only. Given the incoming and
//! outgoing segment directions at a shared `pivot`, the outer offset edges of
//! both segments end at `b_in` and start at `b_out` (each `W/2` from the
//! pivot), and their extensions meet at the miter tip. Everything here is in
//! a right-handed frame: `Side::Left` is a counterclockwise quarter turn.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vectors shorter than this cannot be normalized.
pub const UNIT_EPSILON: f64 = 1e-12;
/// Minimum distance between consecutive polyline vertices.
pub const VERTEX_EPSILON: f64 = 1e-9;
/// Turns smaller than this (radians) produce no join.
pub const COLLINEAR_EPSILON: f64 = 1e-6;
/// Turns within this distance of pi are rejected by [`make_join`].
pub const REVERSAL_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Checked constructor for values coming from outside the library.
    pub fn try_new(x: f64, y: f64) -> Option<Self> {
        (x.is_finite() && y.is_finite()).then_some(Vec2 { x, y })
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn length(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).length()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Counterclockwise rotation by `angle` radians.
    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

pub fn unit(v: Vec2) -> Result<Vec2> {
    let norm = v.length();
    if !(norm > UNIT_EPSILON) {
        return Err(Error::DegenerateVector { norm });
    }
    Ok(v / norm)
}

/// Quarter-turn of `v`: counterclockwise for `Left`, clockwise for `Right`.
#[inline]
pub fn perp(v: Vec2, side: Side) -> Vec2 {
    match side {
        Side::Left => Vec2::new(-v.y, v.x),
        Side::Right => Vec2::new(v.y, -v.x),
    }
}

/// Signed exterior angle from `dir_in` to `dir_out`, in `(-pi, pi]`.
/// Positive values are left (counterclockwise) turns.
pub fn signed_turn_angle(dir_in: Vec2, dir_out: Vec2) -> f64 {
    dir_in.cross(dir_out).atan2(dir_in.dot(dir_out))
}

/// An open polyline with at least two vertices and no repeated consecutive
/// vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec2>", into = "Vec<Vec2>")]
pub struct Polyline {
    vertices: Vec<Vec2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline(format!("needs at least 2 vertices, got {}", vertices.len())));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPolyline(format!("vertex {i} is not finite")));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0].distance(w[1]) <= VERTEX_EPSILON {
                return Err(Error::InvalidPolyline(format!("vertices {} and {} coincide", i, i + 1)));
            }
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Applies `f` to every vertex, re-validating the result.
    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> Result<Polyline> {
        Polyline::new(self.vertices.iter().map(|&v| f(v)).collect())
    }

    pub fn into_vertices(self) -> Vec<Vec2> {
        self.vertices
    }
}

impl TryFrom<Vec<Vec2>> for Polyline {
    type Error = Error;
    fn try_from(v: Vec<Vec2>) -> Result<Self> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Vec2> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}

/// Outer-side construction at an interior polyline vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JoinGeometry {
    /// Shared centerline vertex.
    pub pivot: Vec2,
    /// End of the incoming segment's outer edge.
    pub b_in: Vec2,
    /// Start of the outgoing segment's outer edge.
    pub b_out: Vec2,
    /// Intersection of the two outer edge lines.
    pub miter_tip: Vec2,
    /// Unsigned turn angle in `(0, pi)`.
    pub turn_angle: f64,
    /// Outer side of the turn, relative to the direction of travel.
    pub side: Side,
    pub width: f64,
    pub dir_in: Vec2,
    pub dir_out: Vec2,
}

impl JoinGeometry {
    pub fn half_width(&self) -> f64 {
        self.width * 0.5
    }

    /// Point where the two inner offset edges cross: the reflection of the
    /// miter tip through the pivot.
    pub fn inner_point(&self) -> Vec2 {
        self.pivot * 2.0 - self.miter_tip
    }

    /// `tan(turn_angle / 2)`, the ratio `|miter_tip - b_in| / (W/2)`.
    pub fn miter_ratio(&self) -> f64 {
        (self.turn_angle * 0.5).tan()
    }

    /// Sign of the rotation that carries the incoming outer normal onto the
    /// outgoing one: +1 for left turns.
    pub(crate) fn rotation_sign(&self) -> f64 {
        match self.side {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }
}

/// Builds the join at `pivot` between the segments `prev -> pivot` and
/// `pivot -> next`. Returns `Ok(None)` for collinear (same-direction)
/// segments.
pub fn make_join(prev: Vec2, pivot: Vec2, next: Vec2, width: f64) -> Result<Option<JoinGeometry>> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidStyle(format!("width must be positive, got {width}")));
    }
    let dir_in = unit(pivot - prev).map_err(|_| Error::DegenerateSegment { x: pivot.x, y: pivot.y })?;
    let dir_out = unit(next - pivot).map_err(|_| Error::DegenerateSegment { x: pivot.x, y: pivot.y })?;
    let angle = signed_turn_angle(dir_in, dir_out).abs();
    if angle < COLLINEAR_EPSILON {
        return Ok(None);
    }
    if angle > std::f64::consts::PI - REVERSAL_EPSILON {
        return Err(Error::NearReversal { turn_angle: angle });
    }
    Ok(Some(join_from_dirs(pivot, dir_in, dir_out, width)))
}

/// Join construction from unit directions, for turns in `(0, pi)`. The
/// offset points depend only on `pivot`, the corresponding direction and the
/// width, so neighbouring constructions that share a direction share the
/// exact same offset point.
pub(crate) fn join_from_dirs(pivot: Vec2, dir_in: Vec2, dir_out: Vec2, width: f64) -> JoinGeometry {
    let signed = signed_turn_angle(dir_in, dir_out);
    let turn_angle = signed.abs();
    // A left turn opens its outer wedge on the right.
    let side = if signed >= 0.0 { Side::Right } else { Side::Left };
    let h = width * 0.5;
    let b_in = pivot + perp(dir_in, side) * h;
    let b_out = pivot + perp(dir_out, side) * h;
    let miter_tip = b_in + dir_in * (h * (turn_angle * 0.5).tan());
    JoinGeometry { pivot, b_in, b_out, miter_tip, turn_angle, side, width, dir_in, dir_out }
}

/// Distance from `p` to the closed segment `a..b`.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Euclidean distance from `p` to the polyline (round ends).
pub fn point_polyline_distance(p: Vec2, line: &Polyline) -> f64 {
    line.segments().map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
}
