//! Emulation of the common overlapping stroker, used only to demonstrate
//! repeated corner drawing.
//!
//! Each segment quad is extended past every turning vertex until its outer
//! edge reaches the miter tip, and a fan join is drawn on top. The extended
//! quads overlap each other and the fan near the pivot. Not part of the
//! stroking API.

use crate::error::{Error, Result};
use crate::geometry::{make_join, perp, unit, Polyline, Side, Vec2};
use crate::tessellation::{tessellate_join_fan, AAVertex, BatchLabel, StrokeStyle, TriangleBatch};

pub fn tessellate_polyline_legacy(line: &Polyline, style: &StrokeStyle, fan_step: f64) -> Result<Vec<TriangleBatch>> {
    style.validate()?;
    let v = line.vertices();
    let h = style.half_width();
    let joins =
        (1..v.len() - 1).map(|i| make_join(v[i - 1], v[i], v[i + 1], style.width)).collect::<Result<Vec<_>>>()?;
    // extension of the quad at vertex i (interior vertices only)
    let ext = |i: usize| -> f64 {
        if i == 0 || i == v.len() - 1 {
            0.0
        } else {
            joins[i - 1].map_or(0.0, |j| h * j.miter_ratio())
        }
    };

    let mut out = Vec::new();
    for s in 0..v.len() - 1 {
        let (p0, p1) = (v[s], v[s + 1]);
        let dir = unit(p1 - p0).map_err(|_| Error::DegenerateSegment { x: p0.x, y: p0.y })?;
        let a = p0 - dir * ext(s);
        let b = p1 + dir * ext(s + 1);
        let n = perp(dir, Side::Left) * h;
        let (l, r) = (Vec2::new(0.0, 1.0), Vec2::new(0.0, -1.0));
        let mut batch = TriangleBatch::new(BatchLabel::SegmentBody);
        batch.push_triangle(AAVertex::new(a + n, l), AAVertex::new(a - n, r), AAVertex::new(b - n, r));
        batch.push_triangle(AAVertex::new(a + n, l), AAVertex::new(b - n, r), AAVertex::new(b + n, l));
        out.push(batch);
        if let Some(Some(j)) = joins.get(s) {
            out.push(tessellate_join_fan(j, fan_step)?);
        }
    }
    Ok(out)
}
