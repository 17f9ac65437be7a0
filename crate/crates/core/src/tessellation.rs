//! Polyline stroking into anti-aliased triangle batches.
//!
//! Every vertex carries a 2-D attribute whose Euclidean norm, once affinely
//! interpolated across a triangle, equals the fragment's distance to the
//! stroke skeleton divided by `W/2`. Segment bodies use `(0, +-1)` on their
//! edges, which encodes perpendicular distance. Joins use the two-triangle
//! wedge `(pivot, b_in, tip)` + `(pivot, tip, b_out)` with attributes
//! `(0,0)`, `(0,1)` and `(t,1)`, `t = tan(turn/2)`. That map is a scaled
//! isometry centred on the pivot, so the interpolated norm is exactly the
//! distance to the pivot and the `d = 1` level set is a true circular arc.
//!
//! Around a join, each segment body ends on the outer side at the
//! perpendicular through the pivot and on the inner side at the bisector, so
//! bodies and wedges tile the stroke without overlapping.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::color::Rgba;
use crate::error::{Error, Result};
use crate::geometry::{join_from_dirs, make_join, perp, signed_turn_angle, unit, JoinGeometry, Polyline, Side, Vec2};

/// Triangles with less area than this (px^2) are never emitted.
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;
pub const DEFAULT_MITER_LIMIT: f64 = 2.0;
pub const DEFAULT_FAN_STEP_DEG: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AAVertex {
    pub position: Vec2,
    pub attr: Vec2,
}

impl AAVertex {
    pub const fn new(position: Vec2, attr: Vec2) -> Self {
        AAVertex { position, attr }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BatchLabel {
    SegmentBody,
    JoinProposed,
    JoinFan,
}

/// A list of triangles (consecutive vertex triples) submitted together.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleBatch {
    vertices: Vec<AAVertex>,
    pub label: BatchLabel,
}

impl TriangleBatch {
    pub fn new(label: BatchLabel) -> Self {
        TriangleBatch { vertices: Vec::new(), label }
    }

    /// Appends a triangle unless it is degenerate. Returns whether it was kept.
    pub fn push_triangle(&mut self, a: AAVertex, b: AAVertex, c: AAVertex) -> bool {
        if triangle_area(a.position, b.position, c.position) <= MIN_TRIANGLE_AREA {
            return false;
        }
        self.vertices.extend([a, b, c]);
        true
    }

    pub fn vertices(&self) -> &[AAVertex] {
        &self.vertices
    }

    pub fn triangles(&self) -> impl Iterator<Item = [AAVertex; 3]> + '_ {
        self.vertices.chunks_exact(3).map(|t| [t[0], t[1], t[2]])
    }

    pub fn triangle_count(&self) -> usize {
        self.vertices.len() / 3
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn extend(&mut self, other: TriangleBatch) {
        self.vertices.extend(other.vertices);
    }
}

pub fn triangle_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * (b - a).cross(c - a).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum JoinMethod {
    /// Two-triangle wedge with an exact arc.
    Proposed,
    /// Baseline fan of flat chords, `step_angle` radians per triangle.
    Fan { step_angle: f64 },
}

impl JoinMethod {
    pub fn fan_degrees(step_deg: f64) -> Self {
        JoinMethod::Fan { step_angle: step_deg.to_radians() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeStyle {
    /// Full stroke width `W` in pixels.
    pub width: f64,
    pub color: Rgba,
    /// Normalized distance `N` where the opaque core ends.
    pub aa_threshold: f64,
    pub join_method: JoinMethod,
    pub miter_limit: f64,
}

/// Threshold giving a one-pixel feather: `(1 - N) * W/2 = 1`.
pub fn auto_aa_threshold(width: f64) -> f64 {
    (1.0 - 1.0 / (width * 0.5)).max(0.0)
}

impl StrokeStyle {
    /// Opaque black, one-pixel feather, proposed joins.
    pub fn new(width: f64) -> Self {
        StrokeStyle {
            width,
            color: Rgba::BLACK,
            aa_threshold: auto_aa_threshold(width),
            join_method: JoinMethod::Proposed,
            miter_limit: DEFAULT_MITER_LIMIT,
        }
    }

    pub fn with_color(mut self, color: Rgba) -> Self {
        self.color = color;
        self
    }

    pub fn with_aa_threshold(mut self, n: f64) -> Self {
        self.aa_threshold = n;
        self
    }

    pub fn with_join(mut self, method: JoinMethod) -> Self {
        self.join_method = method;
        self
    }

    pub fn with_miter_limit(mut self, limit: f64) -> Self {
        self.miter_limit = limit;
        self
    }

    pub fn half_width(&self) -> f64 {
        self.width * 0.5
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::InvalidStyle(format!("width must be > 0, got {}", self.width)));
        }
        if !self.color.is_valid() {
            return Err(Error::InvalidStyle("color channels must lie in [0, 1]".into()));
        }
        if !(0.0..1.0).contains(&self.aa_threshold) {
            return Err(Error::InvalidStyle(format!("aa threshold must lie in [0, 1), got {}", self.aa_threshold)));
        }
        if !(self.miter_limit > 1.0 && self.miter_limit.is_finite()) {
            return Err(Error::InvalidStyle(format!("miter limit must be > 1, got {}", self.miter_limit)));
        }
        if let JoinMethod::Fan { step_angle } = self.join_method {
            check_fan_step(step_angle)?;
        }
        Ok(())
    }
}

fn check_fan_step(step_angle: f64) -> Result<()> {
    if step_angle > 0.0 && step_angle <= std::f64::consts::FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidStyle(format!("fan step must lie in (0, 90] degrees, got {}", step_angle.to_degrees())))
    }
}

#[inline]
fn side_attr(side: Side) -> Vec2 {
    match side {
        Side::Left => Vec2::new(0.0, 1.0),
        Side::Right => Vec2::new(0.0, -1.0),
    }
}

/// Rectangle of width `W` centred on `p0..p1`, as two triangles
/// `(p0L, p0R, p1R)` and `(p0L, p1R, p1L)`.
pub fn tessellate_segment(p0: Vec2, p1: Vec2, style: &StrokeStyle) -> Result<TriangleBatch> {
    let dir = unit(p1 - p0).map_err(|_| Error::DegenerateSegment { x: p0.x, y: p0.y })?;
    let n = perp(dir, Side::Left) * style.half_width();
    let l = side_attr(Side::Left);
    let r = side_attr(Side::Right);
    let p0l = AAVertex::new(p0 + n, l);
    let p0r = AAVertex::new(p0 - n, r);
    let p1r = AAVertex::new(p1 - n, r);
    let p1l = AAVertex::new(p1 + n, l);
    let mut batch = TriangleBatch::new(BatchLabel::SegmentBody);
    batch.push_triangle(p0l, p0r, p1r);
    batch.push_triangle(p0l, p1r, p1l);
    Ok(batch)
}

/// Number of equal sub-wedges needed so that each one's miter ratio
/// `tan(turn / 2k)` stays within `miter_limit`.
pub fn subdivision_count(turn_angle: f64, miter_limit: f64) -> usize {
    let mut k = 1usize;
    while (turn_angle / (2.0 * k as f64)).tan() > miter_limit
        || (turn_angle / (2.0 * k as f64)) >= std::f64::consts::FRAC_PI_2
    {
        k += 1;
    }
    k
}

/// Two triangles per (sub-)wedge, attributes in each triangle's local frame.
pub fn tessellate_join_proposed(join: &JoinGeometry, style: &StrokeStyle) -> TriangleBatch {
    let mut batch = TriangleBatch::new(BatchLabel::JoinProposed);
    let k = subdivision_count(join.turn_angle, style.miter_limit);
    let sub = join.turn_angle / k as f64;
    let half = 0.5 * sub;
    let t = half.tan();
    let radial = join.b_in - join.pivot;
    let sign = join.rotation_sign();

    let pivot = AAVertex::new(join.pivot, Vec2::ZERO);
    let offset_attr = Vec2::new(0.0, 1.0);
    let tip_attr = Vec2::new(t, 1.0);

    let mut prev = join.b_in;
    for i in 0..k {
        let next = if i + 1 == k { join.b_out } else { join.pivot + radial.rotate(sign * sub * (i + 1) as f64) };
        let tip = if k == 1 {
            join.miter_tip
        } else {
            join.pivot + radial.rotate(sign * (sub * i as f64 + half)) / half.cos()
        };
        let tip = AAVertex::new(tip, tip_attr);
        batch.push_triangle(pivot, AAVertex::new(prev, offset_attr), tip);
        batch.push_triangle(pivot, tip, AAVertex::new(next, offset_attr));
        prev = next;
    }
    batch
}

/// `ceil(turn / step)` flat-chord triangles fanning from the pivot.
pub fn fan_triangle_count(turn_angle: f64, step_angle: f64) -> usize {
    // tolerate representation error in e.g. (pi/2) / (pi/18)
    ((turn_angle / step_angle) - 1e-9).ceil().max(1.0) as usize
}

/// Baseline fan join: rim vertices on the `W/2` circle carry `(0,1)`, so the
/// `d = 1` level set follows the chords rather than the arc.
pub fn tessellate_join_fan(join: &JoinGeometry, step_angle: f64) -> Result<TriangleBatch> {
    check_fan_step(step_angle)?;
    let mut batch = TriangleBatch::new(BatchLabel::JoinFan);
    let k = fan_triangle_count(join.turn_angle, step_angle);
    let sub = join.turn_angle / k as f64;
    let radial = join.b_in - join.pivot;
    let sign = join.rotation_sign();
    let pivot = AAVertex::new(join.pivot, Vec2::ZERO);
    let rim_attr = Vec2::new(0.0, 1.0);
    let mut prev = join.b_in;
    for i in 0..k {
        let next = if i + 1 == k { join.b_out } else { join.pivot + radial.rotate(sign * sub * (i + 1) as f64) };
        batch.push_triangle(pivot, AAVertex::new(prev, rim_attr), AAVertex::new(next, rim_attr));
        prev = next;
    }
    Ok(batch)
}

/// What happens at one interior vertex of a polyline.
#[derive(Debug, Clone)]
enum VertexJoint {
    /// Collinear continuation; both segments share these two corners.
    Straight { left: Vec2, right: Vec2 },
    Wedge {
        /// One construction, or two halves for a near-reversal.
        parts: Vec<JoinGeometry>,
        side: Side,
        b_in: Vec2,
        b_out: Vec2,
        /// Shared inner corner when both bodies are trimmed at the bisector.
        inner: Option<Vec2>,
    },
}

fn classify_vertex(prev: Vec2, pivot: Vec2, next: Vec2, len_in: f64, len_out: f64, width: f64) -> Result<VertexJoint> {
    let h = width * 0.5;
    let joins = match make_join(prev, pivot, next, width) {
        Ok(Some(j)) => vec![j],
        Ok(None) => {
            let d_in = unit(pivot - prev)?;
            let d_out = unit(next - pivot)?;
            let n = unit(perp(d_in, Side::Left) + perp(d_out, Side::Left))? * h;
            return Ok(VertexJoint::Straight { left: pivot + n, right: pivot - n });
        }
        Err(Error::NearReversal { .. }) => split_reversal(prev, pivot, next, width)?,
        Err(e) => return Err(e),
    };
    let first = joins[0];
    let last = joins[joins.len() - 1];
    let inner = if joins.len() == 1 && h * first.miter_ratio() <= 0.5 * len_in.min(len_out) {
        Some(first.inner_point())
    } else {
        None
    };
    Ok(VertexJoint::Wedge { side: first.side, b_in: first.b_in, b_out: last.b_out, inner, parts: joins })
}

/// Splits a near-reversal into two half-turn wedges sharing the middle
/// offset point.
fn split_reversal(prev: Vec2, pivot: Vec2, next: Vec2, width: f64) -> Result<Vec<JoinGeometry>> {
    let d_in = unit(pivot - prev)?;
    let d_out = unit(next - pivot)?;
    let signed = signed_turn_angle(d_in, d_out);
    let turn = signed.abs();
    let sign = if signed >= 0.0 { 1.0 } else { -1.0 };
    let mid = d_in.rotate(sign * turn * 0.5);
    let a = join_from_dirs(pivot, d_in, mid, width);
    let b = join_from_dirs(pivot, mid, d_out, width);
    debug_assert_eq!(a.side, b.side);
    Ok(vec![a, b])
}

/// Ordered vertices of one end of a body polygon with their attributes.
fn end_chain(joint: Option<&VertexJoint>, at: Vec2, dir: Vec2, h: f64, is_start: bool) -> Vec<AAVertex> {
    let l_attr = side_attr(Side::Left);
    let r_attr = side_attr(Side::Right);
    // start chains run left -> right, end chains right -> left
    let order = |left: AAVertex, mid: Option<AAVertex>, right: AAVertex| -> Vec<AAVertex> {
        let mut v = Vec::with_capacity(3);
        if is_start {
            v.push(left);
            v.extend(mid);
            v.push(right);
        } else {
            v.push(right);
            v.extend(mid);
            v.push(left);
        }
        v
    };
    match joint {
        None => {
            let n = perp(dir, Side::Left) * h;
            order(AAVertex::new(at + n, l_attr), None, AAVertex::new(at - n, r_attr))
        }
        Some(VertexJoint::Straight { left, right }) => {
            order(AAVertex::new(*left, l_attr), None, AAVertex::new(*right, r_attr))
        }
        Some(VertexJoint::Wedge { side, b_in, b_out, inner, .. }) => {
            let outer = if is_start { *b_out } else { *b_in };
            let inner_side = side.opposite();
            let inner = inner.unwrap_or_else(|| at + perp(dir, inner_side) * h);
            let outer_v = AAVertex::new(outer, side_attr(*side));
            let inner_v = AAVertex::new(inner, side_attr(inner_side));
            let pivot = AAVertex::new(at, Vec2::ZERO);
            match side {
                Side::Left => order(outer_v, Some(pivot), inner_v),
                Side::Right => order(inner_v, Some(pivot), outer_v),
            }
        }
    }
}

fn body_batch(start: Vec<AAVertex>, end: Vec<AAVertex>) -> TriangleBatch {
    // Fan from the pivot when the start is a join: the pivot is never
    // collinear with any other pair of consecutive boundary vertices.
    let root = if start.len() == 3 { 1 } else { 0 };
    let polygon: Vec<AAVertex> = start.into_iter().chain(end).collect();
    let n = polygon.len();
    let mut batch = TriangleBatch::new(BatchLabel::SegmentBody);
    for i in 1..n - 1 {
        let a = polygon[(root + i) % n];
        let b = polygon[(root + i + 1) % n];
        batch.push_triangle(polygon[root], a, b);
    }
    batch
}

/// Strokes a polyline: one body batch per segment interleaved with one join
/// batch per interior vertex that turns.
pub fn tessellate_polyline(line: &Polyline, style: &StrokeStyle) -> Result<Vec<TriangleBatch>> {
    style.validate()?;
    let verts = line.vertices();
    let h = style.half_width();
    let lengths: Vec<f64> = line.segments().map(|(a, b)| a.distance(b)).collect();
    let dirs = line
        .segments()
        .map(|(a, b)| unit(b - a).map_err(|_| Error::DegenerateSegment { x: a.x, y: a.y }))
        .collect::<Result<Vec<_>>>()?;

    let joints = (1..verts.len() - 1)
        .map(|i| classify_vertex(verts[i - 1], verts[i], verts[i + 1], lengths[i - 1], lengths[i], style.width))
        .collect::<Result<Vec<_>>>()?;
    // joints[i - 1] belongs to vertex i
    let joint_at = |i: usize| -> Option<&VertexJoint> {
        if i == 0 || i == verts.len() - 1 {
            None
        } else {
            Some(&joints[i - 1])
        }
    };

    let mut out = Vec::with_capacity(2 * verts.len());
    for s in 0..dirs.len() {
        let start = end_chain(joint_at(s), verts[s], dirs[s], h, true);
        let end = end_chain(joint_at(s + 1), verts[s + 1], dirs[s], h, false);
        out.push(body_batch(start, end));

        if let Some(VertexJoint::Wedge { parts, .. }) = joint_at(s + 1) {
            out.push(join_batch(parts, style)?);
        }
    }
    Ok(out)
}

fn join_batch(parts: &[JoinGeometry], style: &StrokeStyle) -> Result<TriangleBatch> {
    let mut iter = parts.iter();
    let first = iter.next().expect("join has at least one part");
    let one = |j: &JoinGeometry| -> Result<TriangleBatch> {
        match style.join_method {
            JoinMethod::Proposed => Ok(tessellate_join_proposed(j, style)),
            JoinMethod::Fan { step_angle } => tessellate_join_fan(j, step_angle),
        }
    };
    let mut batch = one(first)?;
    for j in iter {
        batch.extend(one(j)?);
    }
    Ok(batch)
}

/// Tessellates independent polylines in parallel; output order follows input.
pub fn tessellate_scene(lines: &[Polyline], style: &StrokeStyle) -> Result<Vec<Vec<TriangleBatch>>> {
    lines.par_iter().map(|l| tessellate_polyline(l, style)).collect()
}

/// Interior vertices of `line` that produce a join under `width`.
pub fn count_joins(line: &Polyline, width: f64) -> usize {
    let v = line.vertices();
    (1..v.len().saturating_sub(1)).filter(|&i| !matches!(make_join(v[i - 1], v[i], v[i + 1], width), Ok(None))).count()
}
