//! CPU reference pipeline: triangle setup, pixel-center rasterization with a
//! top-left fill rule, affine attribute interpolation, the distance-based
//! alpha rule and source-over blending.
//!
//! Rasterization can run on horizontal bands in parallel. Each pixel only
//! ever sees fragments in triangle submission order, so the output is
//! independent of the band split and of the thread count.

mod framebuffer;

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub(crate) use framebuffer::write_bytes;
pub use framebuffer::{gray_ppm, Framebuffer, Viewport};

use crate::bench::accounting::{AccountingMode, CallCounter};
use crate::color::Rgba;
use crate::error::Result;
use crate::geometry::{Polyline, Vec2};
use crate::tessellation::{tessellate_scene, AAVertex, StrokeStyle, TriangleBatch};

const BAND_ROWS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub x: u32,
    pub y: u32,
    pub attr: Vec2,
}

impl Fragment {
    pub fn center(&self) -> Vec2 {
        Vec2::new(self.x as f64 + 0.5, self.y as f64 + 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RenderStats {
    pub draw_calls: u64,
    pub triangles: u64,
    pub fragments_shaded: u64,
    pub overlap_pixels: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub background: Rgba,
    pub accounting: AccountingMode,
    /// Worker threads for band rasterization; 0 uses the global pool.
    pub threads: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { background: Rgba::TRANSPARENT, accounting: AccountingMode::PerFeature, threads: 0 }
    }
}

/// Alpha from normalized distance `d = |attr|`: opaque up to `n`, linear
/// ramp to zero at `d = 1`.
#[inline]
pub fn fragment_alpha(attr: Vec2, n: f64) -> f64 {
    alpha_from_distance(attr.length(), n)
}

#[inline]
pub fn alpha_from_distance(d: f64, n: f64) -> f64 {
    if d <= n {
        1.0
    } else if d >= 1.0 {
        0.0
    } else {
        (1.0 - d) / (1.0 - n)
    }
}

/// Source-over with a coverage factor: `a = src.a * alpha`.
#[inline]
pub fn blend_source_over(dst: Rgba, src: Rgba, alpha: f64) -> Rgba {
    let a = src.a * alpha;
    let k = 1.0 - a;
    Rgba { r: src.r * a + dst.r * k, g: src.g * a + dst.g * k, b: src.b * a + dst.b * k, a: a + dst.a * k }
}

#[inline]
fn raw_edge(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
}

/// Edge function evaluated with the endpoints in a canonical order, so a
/// shared edge yields exactly negated values for its two triangles.
#[inline]
fn edge(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    if (a.x, a.y) < (b.x, b.y) {
        raw_edge(a, b, p)
    } else {
        -raw_edge(b, a, p)
    }
}

/// Top-left ownership for an edge of a triangle whose interior has positive
/// edge values (screen space, y down).
#[inline]
fn owns_boundary(a: Vec2, b: Vec2) -> bool {
    let dy = b.y - a.y;
    dy < 0.0 || (dy == 0.0 && b.x - a.x > 0.0)
}

#[inline]
fn inside(e: f64, owns: bool) -> bool {
    e > 0.0 || (e == 0.0 && owns)
}

/// Visits every pixel of `rows` (clipped to `width`) whose center is covered
/// by the triangle, with the barycentric attribute at that center.
pub(crate) fn scan_triangle(tri: &[AAVertex; 3], width: u32, rows: Range<u32>, mut emit: impl FnMut(u32, u32, Vec2)) {
    let [v0, mut v1, mut v2] = *tri;
    let area = raw_edge(v0.position, v1.position, v2.position);
    if !(area.abs() > 0.0) || !area.is_finite() {
        return;
    }
    if area < 0.0 {
        std::mem::swap(&mut v1, &mut v2);
    }
    let (p0, p1, p2) = (v0.position, v1.position, v2.position);
    let area = raw_edge(p0, p1, p2);
    let own0 = owns_boundary(p1, p2);
    let own1 = owns_boundary(p2, p0);
    let own2 = owns_boundary(p0, p1);

    let min_y = p0.y.min(p1.y).min(p2.y);
    let max_y = p0.y.max(p1.y).max(p2.y);
    let y_lo = ((min_y - 0.5).ceil().max(rows.start as f64)) as i64;
    let y_hi = ((max_y - 0.5).floor().min(rows.end as f64 - 1.0)) as i64;
    if y_lo > y_hi || width == 0 {
        return;
    }
    let edges = [(p0, p1), (p1, p2), (p2, p0)];
    for y in y_lo..=y_hi {
        let cy = y as f64 + 0.5;
        // conservative horizontal span of the triangle on this scanline
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(a, b) in &edges {
            let (ymin, ymax) = if a.y < b.y { (a.y, b.y) } else { (b.y, a.y) };
            if cy < ymin || cy > ymax {
                continue;
            }
            if a.y == b.y {
                lo = lo.min(a.x.min(b.x));
                hi = hi.max(a.x.max(b.x));
            } else {
                let x = a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        if lo > hi {
            continue;
        }
        let x_lo = ((lo - 0.5).ceil() - 1.0).max(0.0) as i64;
        let x_hi = ((hi - 0.5).floor() + 1.0).min(width as f64 - 1.0) as i64;
        for x in x_lo..=x_hi {
            let c = Vec2::new(x as f64 + 0.5, cy);
            let e0 = edge(p1, p2, c);
            let e1 = edge(p2, p0, c);
            let e2 = edge(p0, p1, c);
            if inside(e0, own0) && inside(e1, own1) && inside(e2, own2) {
                let attr = (v0.attr * e0 + v1.attr * e1 + v2.attr * e2) / area;
                emit(x as u32, y as u32, attr);
            }
        }
    }
}

/// Fragments of one triangle inside a `width x height` viewport.
pub fn rasterize_triangle(v0: AAVertex, v1: AAVertex, v2: AAVertex, viewport: Viewport) -> Vec<Fragment> {
    let mut out = Vec::new();
    scan_triangle(&[v0, v1, v2], viewport.width, 0..viewport.height, |x, y, attr| out.push(Fragment { x, y, attr }));
    out
}

/// Mutable view of a horizontal band of the framebuffer.
struct Band<'a> {
    first_row: u32,
    width: u32,
    pixels: &'a mut [Rgba],
    counts: &'a mut [u32],
}

#[derive(Default)]
struct BandStats {
    fragments: u64,
    overlap: u64,
}

impl Band<'_> {
    fn rows(&self) -> Range<u32> {
        self.first_row..self.first_row + (self.pixels.len() / self.width as usize) as u32
    }

    fn draw(&mut self, batch: &TriangleBatch, style: &StrokeStyle, stats: &mut BandStats) {
        let rows = self.rows();
        let width = self.width as usize;
        let first = self.first_row as usize;
        for tri in batch.triangles() {
            scan_triangle(&tri, self.width, rows.clone(), |x, y, attr| {
                stats.fragments += 1;
                let alpha = fragment_alpha(attr, style.aa_threshold);
                if alpha > 0.0 {
                    let i = (y as usize - first) * width + x as usize;
                    self.counts[i] += 1;
                    if self.counts[i] == 2 {
                        stats.overlap += 1;
                    }
                    self.pixels[i] = blend_source_over(self.pixels[i], style.color, alpha);
                }
            });
        }
    }

    fn draw_strokes(&mut self, strokes: &[Vec<TriangleBatch>], style: &StrokeStyle) -> BandStats {
        let mut stats = BandStats::default();
        for stroke in strokes {
            self.counts.fill(0);
            for batch in stroke {
                self.draw(batch, style, &mut stats);
            }
        }
        stats
    }
}

/// Draws one batch into `fb`. Write counters are not reset; call
/// [`Framebuffer::begin_stroke`] between strokes.
pub fn draw_batch(
    fb: &mut Framebuffer,
    batch: &TriangleBatch,
    style: &StrokeStyle,
    stats: &mut RenderStats,
    calls: &mut CallCounter,
) {
    stats.draw_calls += calls.submit(batch, style);
    stats.triangles += batch.triangle_count() as u64;
    let mut band = Band { first_row: 0, width: fb.width(), pixels: &mut fb.pixels, counts: &mut fb.write_count };
    let mut bs = BandStats::default();
    band.draw(batch, style, &mut bs);
    stats.fragments_shaded += bs.fragments;
    stats.overlap_pixels += bs.overlap;
}

/// Renders pre-tessellated strokes in order. Overlap is counted per stroke.
pub fn render_strokes(
    strokes: &[Vec<TriangleBatch>],
    style: &StrokeStyle,
    viewport: Viewport,
    options: &RenderOptions,
) -> (Framebuffer, RenderStats) {
    let mut fb = Framebuffer::new(viewport, options.background);
    let mut stats = RenderStats::default();
    let mut calls = CallCounter::new(options.accounting);
    for batch in strokes.iter().flatten() {
        stats.draw_calls += calls.submit(batch, style);
        stats.triangles += batch.triangle_count() as u64;
    }

    let width = viewport.width as usize;
    let band_len = width * BAND_ROWS;
    let run = |fb: &mut Framebuffer| -> Vec<BandStats> {
        let Framebuffer { pixels, write_count, .. } = fb;
        if options.threads == 1 {
            let mut band = Band { first_row: 0, width: viewport.width, pixels, counts: write_count };
            return vec![band.draw_strokes(strokes, style)];
        }
        pixels
            .par_chunks_mut(band_len)
            .zip(write_count.par_chunks_mut(band_len))
            .enumerate()
            .map(|(i, (pixels, counts))| {
                let mut band = Band { first_row: (i * BAND_ROWS) as u32, width: viewport.width, pixels, counts };
                band.draw_strokes(strokes, style)
            })
            .collect()
    };
    let bands = if options.threads > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(options.threads).build() {
            Ok(pool) => pool.install(|| run(&mut fb)),
            Err(_) => run(&mut fb),
        }
    } else {
        run(&mut fb)
    };
    for b in bands {
        stats.fragments_shaded += b.fragments;
        stats.overlap_pixels += b.overlap;
    }
    (fb, stats)
}

/// Tessellates and renders screen-space polylines in list order.
pub fn render_scene(
    lines: &[Polyline],
    style: &StrokeStyle,
    viewport: Viewport,
    options: &RenderOptions,
) -> Result<(Framebuffer, RenderStats)> {
    let strokes = tessellate_scene(lines, style)?;
    Ok(render_strokes(&strokes, style, viewport, options))
}
