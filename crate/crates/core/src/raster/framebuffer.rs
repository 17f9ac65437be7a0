use std::io::Write;
use std::path::Path;

use crate::color::Rgba;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Viewport {
    pub width: u32,
    pub height: u32,
}

impl Viewport {
    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidViewport(format!("{width}x{height} has an empty axis")));
        }
        Ok(Viewport { width, height })
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }
}

impl std::str::FromStr for Viewport {
    type Err = Error;

    /// Parses `WxH`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidViewport(format!("expected WxH, got {s:?}"));
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let w = w.trim().parse::<u32>().map_err(|_| bad())?;
        let h = h.trim().parse::<u32>().map_err(|_| bad())?;
        Viewport::new(w, h)
    }
}

/// Row-major RGBA pixel grid plus a per-pixel write counter scoped to the
/// stroke currently being drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct Framebuffer {
    width: u32,
    height: u32,
    pub(crate) pixels: Vec<Rgba>,
    pub(crate) write_count: Vec<u32>,
}

impl Framebuffer {
    pub fn new(viewport: Viewport, background: Rgba) -> Self {
        let n = viewport.pixel_count();
        Framebuffer {
            width: viewport.width,
            height: viewport.height,
            pixels: vec![background; n],
            write_count: vec![0; n],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn viewport(&self) -> Viewport {
        Viewport { width: self.width, height: self.height }
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    pub fn pixel(&self, x: u32, y: u32) -> Rgba {
        self.pixels[self.index(x, y)]
    }

    pub fn pixels(&self) -> &[Rgba] {
        &self.pixels
    }

    pub fn write_count(&self, x: u32, y: u32) -> u32 {
        self.write_count[self.index(x, y)]
    }

    /// Resets write counters; call before drawing each stroke.
    pub fn begin_stroke(&mut self) {
        self.write_count.fill(0);
    }

    /// Alpha channel in row-major order.
    pub fn alpha_map(&self) -> Vec<f64> {
        self.pixels.iter().map(|p| p.a).collect()
    }

    /// Binary PPM (P6, 8-bit): RGB channels quantized with `round(c * 255)`.
    pub fn to_ppm(&self) -> Vec<u8> {
        let header = format!("P6\n{} {}\n255\n", self.width, self.height);
        let mut out = Vec::with_capacity(header.len() + self.pixels.len() * 3);
        out.extend_from_slice(header.as_bytes());
        for p in &self.pixels {
            let [r, g, b, _] = p.to_rgba8();
            out.extend_from_slice(&[r, g, b]);
        }
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        write_bytes(path, &self.to_ppm())
    }
}

/// Grayscale P6 image from a row-major map of values in `[0, 1]`.
pub fn gray_ppm(viewport: Viewport, values: &[f64]) -> Vec<u8> {
    assert_eq!(values.len(), viewport.pixel_count());
    let header = format!("P6\n{} {}\n255\n", viewport.width, viewport.height);
    let mut out = Vec::with_capacity(header.len() + values.len() * 3);
    out.extend_from_slice(header.as_bytes());
    for &v in values {
        let q = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
        out.extend_from_slice(&[q, q, q]);
    }
    out
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    f.write_all(bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
