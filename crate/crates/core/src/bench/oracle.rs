//! Supersampled ground truth from the analytic stroke.
//!
//! Each subsample takes its exact distance to the polyline (round joins,
//! butt ends), normalises by `W/2` and applies the same alpha rule as the
//! fragment stage. Nothing here touches the tessellator or rasterizer.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, Polyline, Vec2};
use crate::raster::{alpha_from_distance, Viewport};
use crate::tessellation::StrokeStyle;

/// Distance to the stroke skeleton with butt ends: points behind the first
/// vertex or past the last one (along the end segment) are not covered by
/// that segment.
pub fn butt_distance(p: Vec2, line: &Polyline) -> f64 {
    let v = line.vertices();
    let last = v.len() - 2;
    let mut best = f64::INFINITY;
    for (i, (a, b)) in line.segments().enumerate() {
        if i == 0 && (p - a).dot(b - a) < 0.0 {
            continue;
        }
        if i == last && (p - b).dot(a - b) < 0.0 {
            continue;
        }
        best = best.min(point_segment_distance(p, a, b));
    }
    best
}

/// Plain (round-ended) distance to the closest centerline.
pub fn centerline_distance(p: Vec2, lines: &[Polyline]) -> f64 {
    lines.iter().flat_map(|l| l.segments()).map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
}

struct Extent {
    min: Vec2,
    max: Vec2,
}

fn extent(line: &Polyline, pad: f64) -> Extent {
    let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in line.vertices() {
        min = Vec2::new(min.x.min(v.x), min.y.min(v.y));
        max = Vec2::new(max.x.max(v.x), max.y.max(v.y));
    }
    Extent { min: min - Vec2::new(pad, pad), max: max + Vec2::new(pad, pad) }
}

/// Row-major alpha map with `s x s` subsamples per pixel. Strokes are
/// composited in order with source-over on their per-pixel coverage.
pub fn oracle_render(lines: &[Polyline], style: &StrokeStyle, viewport: Viewport, s: u32) -> Result<Vec<f64>> {
    if s < 4 {
        return Err(Error::InvalidArgument(format!("supersampling factor must be at least 4, got {s}")));
    }
    style.validate()?;
    let h = style.half_width();
    let reach = h + std::f64::consts::FRAC_1_SQRT_2;
    let extents: Vec<Extent> = lines.iter().map(|l| extent(l, reach)).collect();
    let width = viewport.width as usize;
    let inv = 1.0 / s as f64;
    let samples = (s * s) as f64;

    let mut out = vec![0.0; viewport.pixel_count()];
    out.par_chunks_mut(width).enumerate().for_each(|(y, row)| {
        let cy = y as f64 + 0.5;
        for (line, ext) in lines.iter().zip(&extents) {
            if cy < ext.min.y || cy > ext.max.y {
                continue;
            }
            let x0 = ext.min.x.floor().max(0.0) as usize;
            let x1 = (ext.max.x.ceil().max(0.0) as usize).min(width);
            for (x, px) in row.iter_mut().enumerate().take(x1).skip(x0) {
                let center = Vec2::new(x as f64 + 0.5, cy);
                if line.segments().all(|(a, b)| point_segment_distance(center, a, b) > reach) {
                    continue;
                }
                let mut sum = 0.0;
                for j in 0..s {
                    for i in 0..s {
                        let p = Vec2::new(x as f64 + (i as f64 + 0.5) * inv, y as f64 + (j as f64 + 0.5) * inv);
                        sum += alpha_from_distance(butt_distance(p, line) / h, style.aa_threshold);
                    }
                }
                let a = style.color.a * sum / samples;
                *px = a + *px * (1.0 - a);
            }
        }
    });
    Ok(out)
}

/// Pixels whose centers lie within `radius` of any centerline.
pub fn near_centerline_mask(lines: &[Polyline], radius: f64, viewport: Viewport) -> Vec<bool> {
    let width = viewport.width as usize;
    let mut mask = vec![false; viewport.pixel_count()];
    mask.par_chunks_mut(width).enumerate().for_each(|(y, row)| {
        for (x, m) in row.iter_mut().enumerate() {
            *m = centerline_distance(Vec2::new(x as f64 + 0.5, y as f64 + 0.5), lines) <= radius;
        }
    });
    mask
}

/// Mean absolute difference over the masked pixels.
pub fn mean_abs_error(a: &[f64], b: &[f64], mask: &[bool]) -> f64 {
    let (sum, n) = a
        .iter()
        .zip(b)
        .zip(mask)
        .filter(|(_, &m)| m)
        .fold((0.0, 0usize), |(s, n), ((x, y), _)| (s + (x - y).abs(), n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{render_scene, RenderOptions};

    fn segment() -> Polyline {
        Polyline::new(vec![Vec2::new(4.0, 16.3), Vec2::new(60.0, 16.3)]).unwrap()
    }

    #[test]
    fn straight_segment_matches_pipeline_away_from_ends() {
        let style = StrokeStyle::new(6.0);
        let vp = Viewport::new(64, 32).unwrap();
        let s = 16;
        let oracle = oracle_render(&[segment()], &style, vp, s).unwrap();
        let (fb, _) = render_scene(&[segment()], &style, vp, &RenderOptions::default()).unwrap();
        for y in 0..32u32 {
            for x in 10..50u32 {
                let i = (y * 64 + x) as usize;
                // a box-filtered 1 px ramp differs from its center sample by at most 1/8
                let diff = (fb.pixel(x, y).a - oracle[i]).abs();
                assert!(diff <= 0.125 + 1.0 / (2.0 * s as f64), "({x},{y}) {diff}");
            }
        }
    }

    #[test]
    fn far_and_core_pixels() {
        let style = StrokeStyle::new(6.0);
        let vp = Viewport::new(64, 32).unwrap();
        let oracle = oracle_render(&[segment()], &style, vp, 4).unwrap();
        assert_eq!(oracle[2 * 64 + 30], 0.0);
        assert_eq!(oracle[16 * 64 + 30], 1.0);
        assert_eq!(oracle[16 * 64 + 1], 0.0, "butt end leaves the cap region empty");
    }

    #[test]
    fn rejects_small_supersampling() {
        let vp = Viewport::new(8, 8).unwrap();
        assert!(oracle_render(&[segment()], &StrokeStyle::new(2.0), vp, 2).is_err());
    }

    #[test]
    fn butt_ends() {
        let l = segment();
        assert!(butt_distance(Vec2::new(3.0, 16.3), &l).is_infinite());
        assert!((butt_distance(Vec2::new(30.0, 18.3), &l) - 2.0).abs() < 1e-12);
        let bent = Polyline::new(vec![Vec2::new(0.0, 0.0), Vec2::new(10.0, 0.0), Vec2::new(10.0, 10.0)]).unwrap();
        // outer corner is rounded
        let d = butt_distance(Vec2::new(13.0, -4.0), &bent);
        assert!((d - 5.0).abs() < 1e-12);
    }
}
