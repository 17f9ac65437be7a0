//! Arc fidelity of a rendered join: how far the `alpha = 0.5` contour on the
//! outer side strays from the circle the alpha model predicts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{make_join, Polyline, Vec2};
use crate::raster::{render_scene, Framebuffer, RenderOptions, Viewport};
use crate::tessellation::StrokeStyle;

const RAY_STEP_DEG: f64 = 1.0;
const BISECTION_STEPS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fidelity {
    pub turn_deg: f64,
    /// Radius where the alpha model reaches 0.5: `W/2 * (1 + N) / 2`.
    pub expected_radius: f64,
    pub max_deviation: f64,
    pub rays: usize,
}

/// A two-segment polyline turning by `turn_angle` at a pivot near the
/// middle of a viewport sized for the stroke.
pub fn join_fixture(turn_angle: f64, width: f64) -> Result<(Polyline, Vec2, Viewport)> {
    if !(turn_angle > 0.0 && turn_angle < std::f64::consts::PI) {
        return Err(Error::InvalidArgument(format!(
            "turn angle must lie in (0, 180) degrees, got {}",
            turn_angle.to_degrees()
        )));
    }
    let arm = 3.0 * width;
    let size = (2.0 * (arm + width)).ceil() as u32;
    // off the pixel grid so no ray runs along a row of centers
    let pivot = Vec2::new(size as f64 * 0.5 + 0.25, size as f64 * 0.5 + 0.35);
    let dir_in = Vec2::new(1.0, 0.0);
    let dir_out = dir_in.rotate(turn_angle);
    let line = Polyline::new(vec![pivot - dir_in * arm, pivot, pivot + dir_out * arm])?;
    Ok((line, pivot, Viewport::new(size, size)?))
}

/// Bilinear interpolation of the alpha channel between pixel centers.
pub fn sample_alpha(fb: &Framebuffer, p: Vec2) -> f64 {
    let (w, h) = (fb.width() as i64, fb.height() as i64);
    let u = p.x - 0.5;
    let v = p.y - 0.5;
    let (x0, y0) = (u.floor(), v.floor());
    let (fx, fy) = (u - x0, v - y0);
    let at = |x: i64, y: i64| -> f64 {
        if x < 0 || y < 0 || x >= w || y >= h {
            0.0
        } else {
            fb.pixel(x as u32, y as u32).a
        }
    };
    let (x0, y0) = (x0 as i64, y0 as i64);
    let top = at(x0, y0) * (1.0 - fx) + at(x0 + 1, y0) * fx;
    let bottom = at(x0, y0 + 1) * (1.0 - fx) + at(x0 + 1, y0 + 1) * fx;
    top * (1.0 - fy) + bottom * fy
}

/// Radius along `dir` from `origin` where the sampled alpha falls through 0.5.
fn crossing(fb: &Framebuffer, origin: Vec2, dir: Vec2, max_r: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, max_r);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if sample_alpha(fb, origin + dir * mid) >= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Renders one join with `style` and scans rays every degree across the
/// outer wedge. `style.color` should be opaque.
pub fn arc_fidelity(style: &StrokeStyle, turn_angle: f64) -> Result<Fidelity> {
    style.validate()?;
    let (line, pivot, viewport) = join_fixture(turn_angle, style.width)?;
    let v = line.vertices();
    let join = make_join(v[0], v[1], v[2], style.width)?
        .ok_or_else(|| Error::InvalidArgument("turn angle too small to form a join".into()))?;
    let (fb, _) = render_scene(std::slice::from_ref(&line), style, viewport, &RenderOptions::default())?;

    let h = style.half_width();
    let expected = h * (1.0 + style.aa_threshold) * 0.5;
    let radial = (join.b_in - pivot) / h;
    let sign = join.rotation_sign();
    let rays = (join.turn_angle.to_degrees() / RAY_STEP_DEG).floor() as usize + 1;
    let max_deviation = (0..rays)
        .map(|i| {
            let phi = (i as f64 * RAY_STEP_DEG).to_radians().min(join.turn_angle);
            let r = crossing(&fb, pivot, radial.rotate(sign * phi), 2.0 * h);
            (r - expected).abs()
        })
        .fold(0.0, f64::max);
    Ok(Fidelity { turn_deg: turn_angle.to_degrees(), expected_radius: expected, max_deviation, rays })
}
