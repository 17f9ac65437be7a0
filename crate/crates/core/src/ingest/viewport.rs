use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::raster::Viewport;

use super::Bounds;

/// Uniform scale with a y flip: `(x, y) -> (s*x + tx, -s*y + ty)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub scale: f64,
    pub translate: Vec2,
}

impl Affine {
    #[inline]
    pub fn apply(&self, p: Vec2) -> Vec2 {
        Vec2::new(self.scale * p.x + self.translate.x, -self.scale * p.y + self.translate.y)
    }
}

/// Largest uniform fit of `bounds` into the viewport shrunk by `margin`
/// pixels on each side, centred. A zero-extent axis lands on the centre.
pub fn fit_viewport(bounds: Bounds, viewport: Viewport, margin: f64) -> Result<Affine> {
    let (w, h) = (viewport.width as f64, viewport.height as f64);
    if !(margin >= 0.0) || 2.0 * margin >= w.min(h) {
        return Err(Error::InvalidViewport(format!("margin {margin} leaves no room in {w}x{h}")));
    }
    let ext = bounds.extent();
    if !ext.is_finite() {
        return Err(Error::DegenerateBounds);
    }
    let scale_for = |avail: f64, extent: f64| if extent > 0.0 { avail / extent } else { f64::INFINITY };
    let scale = scale_for(w - 2.0 * margin, ext.x).min(scale_for(h - 2.0 * margin, ext.y));
    if !scale.is_finite() {
        return Err(Error::DegenerateBounds);
    }
    let c = bounds.center();
    Ok(Affine { scale, translate: Vec2::new(0.5 * w - scale * c.x, 0.5 * h + scale * c.y) })
}
