//! Side-by-side benchmark of the two join methods over a set of networks.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ingest::Scene;
use crate::raster::{render_strokes, RenderOptions, RenderStats, Viewport};
use crate::tessellation::{count_joins, tessellate_scene, JoinMethod, StrokeStyle};

use super::accounting::{AccountingMode, CallCounter};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareConfig {
    /// Width, color and threshold; the join method is overridden per run.
    pub style: StrokeStyle,
    pub fan_step: f64,
    pub viewport: Viewport,
    pub margin: f64,
}

/// Render statistics of one method; only `draw_calls` differs between the
/// two accounting modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodStats {
    pub per_feature: RenderStats,
    pub batched: RenderStats,
}

impl MethodStats {
    pub fn get(&self, mode: AccountingMode) -> &RenderStats {
        match mode {
            AccountingMode::PerFeature => &self.per_feature,
            AccountingMode::Batched => &self.batched,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub network: u64,
    pub roads: usize,
    pub joins: usize,
    pub proposed: MethodStats,
    pub fan: MethodStats,
}

/// Field-wise means over the rows.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Averages {
    pub roads: f64,
    pub joins: f64,
    pub proposed_draw_calls: f64,
    pub fan_draw_calls: f64,
    pub proposed_draw_calls_batched: f64,
    pub fan_draw_calls_batched: f64,
    pub proposed_triangles: f64,
    pub fan_triangles: f64,
    pub proposed_overlap_pixels: f64,
    pub fan_overlap_pixels: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub fan_step_deg: f64,
    pub rows: Vec<ComparisonRow>,
    pub average: Averages,
}

impl ComparisonReport {
    pub fn from_rows(fan_step: f64, rows: Vec<ComparisonRow>) -> Self {
        let n = rows.len().max(1) as f64;
        let mean = |f: &dyn Fn(&ComparisonRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
        let average = Averages {
            roads: mean(&|r| r.roads as f64),
            joins: mean(&|r| r.joins as f64),
            proposed_draw_calls: mean(&|r| r.proposed.per_feature.draw_calls as f64),
            fan_draw_calls: mean(&|r| r.fan.per_feature.draw_calls as f64),
            proposed_draw_calls_batched: mean(&|r| r.proposed.batched.draw_calls as f64),
            fan_draw_calls_batched: mean(&|r| r.fan.batched.draw_calls as f64),
            proposed_triangles: mean(&|r| r.proposed.per_feature.triangles as f64),
            fan_triangles: mean(&|r| r.fan.per_feature.triangles as f64),
            proposed_overlap_pixels: mean(&|r| r.proposed.per_feature.overlap_pixels as f64),
            fan_overlap_pixels: mean(&|r| r.fan.per_feature.overlap_pixels as f64),
        };
        ComparisonReport { fan_step_deg: fan_step.to_degrees(), rows, average }
    }

    /// Tab-separated table, one row per network plus an `average` row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "network\troads\tjoins\tproposed_calls\tfan_calls\tproposed_calls_batched\tfan_calls_batched\t\
             proposed_triangles\tfan_triangles\tproposed_overlap\tfan_overlap\n",
        );
        for r in &self.rows {
            let (p, f) = (&r.proposed, &r.fan);
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.network,
                r.roads,
                r.joins,
                p.per_feature.draw_calls,
                f.per_feature.draw_calls,
                p.batched.draw_calls,
                f.batched.draw_calls,
                p.per_feature.triangles,
                f.per_feature.triangles,
                p.per_feature.overlap_pixels,
                f.per_feature.overlap_pixels,
            );
        }
        let a = &self.average;
        let _ = writeln!(
            out,
            "average\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}",
            a.roads,
            a.joins,
            a.proposed_draw_calls,
            a.fan_draw_calls,
            a.proposed_draw_calls_batched,
            a.fan_draw_calls_batched,
            a.proposed_triangles,
            a.fan_triangles,
            a.proposed_overlap_pixels,
            a.fan_overlap_pixels,
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Renders screen-space lines with `style` and returns statistics under
/// both accounting modes.
pub fn measure_method(
    lines: &[crate::geometry::Polyline],
    style: &StrokeStyle,
    viewport: Viewport,
) -> Result<MethodStats> {
    let strokes = tessellate_scene(lines, style)?;
    let (_, per_feature) = render_strokes(&strokes, style, viewport, &RenderOptions::default());
    let mut batched_calls = CallCounter::new(AccountingMode::Batched);
    for b in strokes.iter().flatten() {
        batched_calls.submit(b, style);
    }
    let batched = RenderStats { draw_calls: batched_calls.total(), ..per_feature };
    Ok(MethodStats { per_feature, batched })
}

/// One row per `(id, scene)`; rows keep input order.
pub fn compare_methods(networks: &[(u64, Scene)], config: &CompareConfig) -> Result<ComparisonReport> {
    let proposed = config.style.with_join(JoinMethod::Proposed);
    let fan = config.style.with_join(JoinMethod::Fan { step_angle: config.fan_step });
    fan.validate()?;
    let rows = networks
        .par_iter()
        .map(|(id, scene)| {
            let lines = scene.to_screen(config.viewport, config.margin)?;
            Ok(ComparisonRow {
                network: *id,
                roads: lines.len(),
                joins: lines.iter().map(|l| count_joins(l, config.style.width)).sum(),
                proposed: measure_method(&lines, &proposed, config.viewport)?,
                fan: measure_method(&lines, &fan, config.viewport)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport::from_rows(config.fan_step, rows))
}

/// Per-pixel `|a - b|` of two alpha maps.
pub fn difference_map(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect()
}
