//! Scene loading and the world-to-screen fit.

mod geojson;
mod path_text;
mod viewport;

pub use geojson::{parse_geojson_bytes, parse_geojson_lines, scene_to_geojson};
pub use path_text::{parse_path_bytes, parse_path_text, serialize_path_text};
pub use viewport::{fit_viewport, Affine};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Polyline, Vec2};
use crate::raster::Viewport;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: Vec2,
    pub max: Vec2,
}

impl Bounds {
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Vec2>) -> Option<Bounds> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut b = Bounds { min: first, max: first };
        for p in it {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        Some(b)
    }

    pub fn extent(&self) -> Vec2 {
        self.max - self.min
    }

    pub fn center(&self) -> Vec2 {
        (self.min + self.max) * 0.5
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Polylines in world units plus their bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    polylines: Vec<Polyline>,
    bounds: Bounds,
}

impl Scene {
    pub fn new(polylines: Vec<Polyline>) -> Result<Self> {
        let bounds = Bounds::of_points(polylines.iter().flat_map(|l| l.vertices())).ok_or(Error::EmptyScene)?;
        Ok(Scene { polylines, bounds })
    }

    pub fn polylines(&self) -> &[Polyline] {
        &self.polylines
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn vertex_count(&self) -> usize {
        self.polylines.iter().map(|l| l.vertices().len()).sum()
    }

    pub fn into_polylines(self) -> Vec<Polyline> {
        self.polylines
    }

    /// Maps the scene into `viewport` with [`fit_viewport`].
    pub fn to_screen(&self, viewport: Viewport, margin: f64) -> Result<Vec<Polyline>> {
        self.transform(&fit_viewport(self.bounds, viewport, margin)?)
    }

    /// Applies `transform` to every vertex.
    pub fn transform(&self, transform: &Affine) -> Result<Vec<Polyline>> {
        self.polylines.iter().map(|l| l.map(|p| transform.apply(p))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    PathText,
    GeoJson,
}

impl std::str::FromStr for InputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "path-text" | "path" => Ok(InputFormat::PathText),
            "geojson" => Ok(InputFormat::GeoJson),
            other => Err(format!("unknown input format {other:?} (path-text|geojson)")),
        }
    }
}

impl InputFormat {
    /// Guesses from the file extension; anything but `.json`/`.geojson` is path text.
    pub fn from_extension(path: &Path) -> InputFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") | Some("geojson") => InputFormat::GeoJson,
            _ => InputFormat::PathText,
        }
    }
}

pub fn load_scene(path: &Path, format: InputFormat) -> Result<Scene> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    match format {
        InputFormat::PathText => parse_path_bytes(&bytes),
        InputFormat::GeoJson => parse_geojson_bytes(&bytes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_cover_all_vertices() {
        let a = Polyline::new(vec![Vec2::new(-1.0, 2.0), Vec2::new(3.0, 0.5)]).unwrap();
        let b = Polyline::new(vec![Vec2::new(0.0, -4.0), Vec2::new(1.0, 1.0)]).unwrap();
        let scene = Scene::new(vec![a, b]).unwrap();
        let bounds = scene.bounds();
        assert_eq!(bounds.min, Vec2::new(-1.0, -4.0));
        assert_eq!(bounds.max, Vec2::new(3.0, 2.0));
        assert!(scene.polylines().iter().flat_map(|l| l.vertices()).all(|&p| bounds.contains(p)));
        assert_eq!(scene.vertex_count(), 4);
    }

    #[test]
    fn empty_scene_is_rejected() {
        assert_eq!(Scene::new(Vec::new()), Err(Error::EmptyScene));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(InputFormat::from_extension(Path::new("a.geojson")), InputFormat::GeoJson);
        assert_eq!(InputFormat::from_extension(Path::new("a.txt")), InputFormat::PathText);
    }
}
