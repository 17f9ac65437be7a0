//! Synthetic networks, draw-call accounting, overlap measurement, the
//! supersampled oracle and the join method comparison.

pub mod accounting;
pub mod compare;
pub mod fidelity;
pub mod generator;
pub mod legacy;
pub mod oracle;

pub use accounting::{count_draw_calls, AccountingMode, CallCounter};
pub use compare::{
    compare_methods, difference_map, measure_method, CompareConfig, ComparisonReport, ComparisonRow, MethodStats,
};
pub use fidelity::{arc_fidelity, join_fixture, Fidelity};
pub use generator::{gen_network, standard_networks};
pub use legacy::tessellate_polyline_legacy;
pub use oracle::{mean_abs_error, near_centerline_mask, oracle_render};

use crate::error::Result;
use crate::geometry::Polyline;
use crate::raster::{render_scene, RenderOptions, Viewport};
use crate::tessellation::StrokeStyle;

/// Pixels written at least twice with non-zero alpha by a single stroke.
pub fn measure_overlap(lines: &[Polyline], style: &StrokeStyle, viewport: Viewport) -> Result<u64> {
    let (_, stats) = render_scene(lines, style, viewport, &RenderOptions::default())?;
    Ok(stats.overlap_pixels)
}
