//! Anti-aliased polyline stroking with two-triangle line joins.
//!
//! The crate tessellates polylines into triangle batches whose vertices
//! carry a 2-D anti-aliasing attribute, rasterizes them with a deterministic
//! CPU reference pipeline, and benchmarks the two-triangle join against the
//! classic multi-triangle fan.
//!
//! ```
//! use aajoin::{render_scene, Polyline, RenderOptions, StrokeStyle, Vec2, Viewport};
//!
//! let line = Polyline::new(vec![Vec2::new(4.0, 28.0), Vec2::new(16.0, 4.0), Vec2::new(28.0, 28.0)])?;
//! let style = StrokeStyle::new(4.0);
//! let (fb, stats) = render_scene(&[line], &style, Viewport::new(32, 32)?, &RenderOptions::default())?;
//! assert_eq!(stats.overlap_pixels, 0);
//! assert_eq!(fb.pixel(10, 16).a, 1.0);
//! # Ok::<(), aajoin::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod color;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod raster;
pub mod tessellation;

pub use bench::accounting::{count_draw_calls, AccountingMode};
pub use color::Rgba;
pub use error::{Error, Result};
pub use geometry::{make_join, perp, signed_turn_angle, unit, JoinGeometry, Polyline, Side, Vec2};
pub use ingest::{fit_viewport, parse_geojson_lines, parse_path_text, Affine, Bounds, Scene};
pub use raster::{
    blend_source_over, draw_batch, fragment_alpha, rasterize_triangle, render_scene, render_strokes, Fragment,
    Framebuffer, RenderOptions, RenderStats, Viewport,
};
pub use tessellation::{
    tessellate_join_fan, tessellate_join_proposed, tessellate_polyline, tessellate_segment, AAVertex, BatchLabel,
    JoinMethod, StrokeStyle, TriangleBatch,
};
