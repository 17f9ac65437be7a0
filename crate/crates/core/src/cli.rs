//! Command-line front end. Every command is a thin layer over library calls.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid
//! parameters.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{arc_fidelity, compare_methods, difference_map, gen_network, standard_networks, CompareConfig};
use crate::color::Rgba;
use crate::error::{Error, Result};
use crate::geometry::Polyline;
use crate::ingest::{load_scene, InputFormat, Scene};
use crate::raster::{gray_ppm, render_scene, write_bytes, RenderOptions, Viewport};
use crate::tessellation::{auto_aa_threshold, JoinMethod, StrokeStyle};
use crate::AccountingMode;

#[derive(Debug, Parser)]
#[command(name = "aajoin", version, about = "Anti-aliased polyline joins: render, compare, measure")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a scene to a PPM image.
    Render(RenderArgs),
    /// Compare the two-triangle join against the fan baseline.
    Compare(CompareArgs),
    /// Measure how closely rendered joins follow a circular arc.
    Fidelity(FidelityArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SceneArgs {
    /// Input file; omit to use a generated network.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// path-text | geojson | generated (default: from the file extension).
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub roads: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
}

#[derive(Debug, Clone, Args)]
pub struct StyleArgs {
    #[arg(long, default_value = "512x512")]
    pub viewport: String,
    /// Stroke width in pixels.
    #[arg(long, default_value_t = 6.0)]
    pub width: f64,
    /// Stroke color as RRGGBBAA.
    #[arg(long, default_value = "000000FF")]
    pub color: String,
    /// Alpha threshold N, or `auto` for a one-pixel feather.
    #[arg(long, default_value = "auto")]
    pub aa: String,
    /// Screen margin around the fitted scene, in pixels.
    #[arg(long, default_value_t = 16.0)]
    pub margin: f64,
    /// Background color as RRGGBBAA.
    #[arg(long, default_value = "FFFFFFFF")]
    pub background: String,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[command(flatten)]
    pub style: StyleArgs,
    /// proposed | fan:STEP_DEGREES
    #[arg(long, default_value = "proposed")]
    pub join: String,
    /// per-feature | batched
    #[arg(long, default_value = "per-feature")]
    pub accounting: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Write render statistics as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Rasterization threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[command(flatten)]
    pub style: StyleArgs,
    /// Fan baseline, as fan:STEP_DEGREES.
    #[arg(long, default_value = "fan:10")]
    pub join: String,
    /// Generated networks (seeds from --seed on, densities 1/n..1);
    /// ignored with --input.
    #[arg(long, default_value_t = 10)]
    pub networks: usize,
    /// Absolute alpha difference image for the first network.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the report as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FidelityArgs {
    /// Comma-separated turn angles in degrees.
    #[arg(long, default_value = "30,90,150")]
    pub angles: String,
    #[arg(long, default_value_t = 20.0)]
    pub width: f64,
    #[arg(long, default_value = "auto")]
    pub aa: String,
    /// Fan baseline, as fan:STEP_DEGREES.
    #[arg(long, default_value = "fan:30")]
    pub join: String,
}

/// Fully validated render parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    pub viewport: Viewport,
    pub style: StrokeStyle,
    pub background: Rgba,
    pub margin: f64,
    pub accounting: AccountingMode,
    pub threads: usize,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub fn parse_join(s: &str) -> Result<JoinMethod> {
    if s == "proposed" {
        return Ok(JoinMethod::Proposed);
    }
    let step = s
        .strip_prefix("fan:")
        .and_then(|d| d.parse::<f64>().ok())
        .ok_or_else(|| invalid(format!("join must be proposed or fan:STEP, got {s:?}")))?;
    Ok(JoinMethod::fan_degrees(step))
}

pub fn parse_aa(s: &str, width: f64) -> Result<f64> {
    if s == "auto" {
        return Ok(auto_aa_threshold(width));
    }
    s.parse::<f64>().map_err(|_| invalid(format!("aa must be a number or auto, got {s:?}")))
}

pub fn parse_angles(s: &str) -> Result<Vec<f64>> {
    let angles = s
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| a.parse::<f64>().map_err(|_| invalid(format!("bad angle {a:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if angles.is_empty() {
        return Err(invalid("no angles given"));
    }
    if let Some(a) = angles.iter().find(|a| !(**a > 0.0 && **a < 180.0)) {
        return Err(invalid(format!("angle {a} outside (0, 180)")));
    }
    Ok(angles)
}

fn build_style(args: &StyleArgs, join: &str) -> Result<(Viewport, StrokeStyle, Rgba)> {
    let viewport: Viewport = args.viewport.parse()?;
    let color: Rgba = args.color.parse()?;
    let background: Rgba = args.background.parse()?;
    let style = StrokeStyle::new(args.width)
        .with_color(color)
        .with_aa_threshold(parse_aa(&args.aa, args.width)?)
        .with_join(parse_join(join)?);
    style.validate()?;
    Ok((viewport, style, background))
}

impl RenderConfig {
    pub fn from_args(args: &RenderArgs) -> Result<Self> {
        let (viewport, style, background) = build_style(&args.style, &args.join)?;
        let accounting = args.accounting.parse::<AccountingMode>().map_err(invalid)?;
        Ok(RenderConfig { viewport, style, background, margin: args.style.margin, accounting, threads: args.threads })
    }
}

pub fn load_input(args: &SceneArgs) -> Result<Scene> {
    let generated = matches!(args.format.as_deref(), Some("generated"));
    match (&args.input, generated) {
        (Some(path), false) => {
            let format = match &args.format {
                Some(f) => f.parse::<InputFormat>().map_err(invalid)?,
                None => InputFormat::from_extension(path),
            };
            load_scene(path, format)
        }
        _ => gen_network(args.seed, args.roads, args.density),
    }
}

/// Renders `scene` and returns the PPM bytes and statistics.
pub fn render_to_ppm(scene: &Scene, config: &RenderConfig) -> Result<(Vec<u8>, crate::raster::RenderStats)> {
    let lines: Vec<Polyline> = scene.to_screen(config.viewport, config.margin)?;
    let options =
        RenderOptions { background: config.background, accounting: config.accounting, threads: config.threads };
    let (fb, stats) = render_scene(&lines, &config.style, config.viewport, &options)?;
    Ok((fb.to_ppm(), stats))
}

pub fn cmd_render(args: &RenderArgs) -> Result<()> {
    let config = RenderConfig::from_args(args)?;
    let scene = load_input(&args.scene)?;
    let (ppm, stats) = render_to_ppm(&scene, &config)?;
    write_bytes(&args.out, &ppm)?;
    if let Some(path) = &args.stats {
        write_json(path, &serde_json::to_string_pretty(&stats).expect("stats serialize"))?;
    }
    Ok(())
}

pub fn cmd_compare(args: &CompareArgs) -> Result<String> {
    let (viewport, style, _) = build_style(&args.style, &args.join)?;
    let JoinMethod::Fan { step_angle } = style.join_method else {
        return Err(invalid("compare needs a fan baseline, e.g. --join fan:10"));
    };
    let networks = match (&args.scene.input, args.scene.format.as_deref()) {
        (Some(_), f) if f != Some("generated") => vec![(0, load_input(&args.scene)?)],
        _ => {
            if args.networks == 0 {
                return Err(invalid("--networks must be at least 1"));
            }
            standard_networks(args.scene.seed, args.networks, args.scene.roads)?
        }
    };
    let config = CompareConfig { style, fan_step: step_angle, viewport, margin: args.style.margin };
    let report = compare_methods(&networks, &config)?;

    if let Some(out) = &args.out {
        let lines = networks[0].1.to_screen(viewport, config.margin)?;
        let options = RenderOptions::default();
        let (a, _) = render_scene(&lines, &style.with_join(JoinMethod::Proposed), viewport, &options)?;
        let (b, _) = render_scene(&lines, &style, viewport, &options)?;
        write_bytes(out, &gray_ppm(viewport, &difference_map(&a.alpha_map(), &b.alpha_map())))?;
    }
    if let Some(path) = &args.stats {
        write_json(path, &report.to_json())?;
    }
    Ok(report.to_tsv())
}

pub fn cmd_fidelity(args: &FidelityArgs) -> Result<String> {
    let angles = parse_angles(&args.angles)?;
    let proposed = StrokeStyle::new(args.width).with_aa_threshold(parse_aa(&args.aa, args.width)?);
    let fan = proposed.with_join(parse_join(&args.join)?);
    proposed.validate()?;
    fan.validate()?;
    let mut out = String::from("turn_deg\texpected_radius\tproposed_dev\tbaseline_dev\n");
    for deg in angles {
        let p = arc_fidelity(&proposed, deg.to_radians())?;
        let f = arc_fidelity(&fan, deg.to_radians())?;
        out.push_str(&format!("{deg}\t{:.4}\t{:.4}\t{:.4}\n", p.expected_radius, p.max_deviation, f.max_deviation));
    }
    Ok(out)
}

fn write_json(path: &Path, json: &str) -> Result<()> {
    write_bytes(path, format!("{json}\n").as_bytes())
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        1
    } else {
        2
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Render(a) => cmd_render(a).map(|_| None),
        Command::Compare(a) => cmd_compare(a).map(Some),
        Command::Fidelity(a) => cmd_fidelity(a).map(Some),
    };
    match result {
        Ok(text) => {
            if let Some(text) = text {
                print!("{text}");
            }
            0
        }
        Err(e) => {
            eprintln!("aajoin: {e}");
            exit_code(&e)
        }
    }
}
