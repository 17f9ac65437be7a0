//! Release gate: every criterion runs at its stated tolerance and time
//! budget and prints one PASS/FAIL line. Runs without the libtest harness so
//! the lines are always shown.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use aajoin::bench::oracle::{mean_abs_error, near_centerline_mask, oracle_render};
use aajoin::bench::{
    arc_fidelity, compare_methods, measure_overlap, standard_networks, tessellate_polyline_legacy, CompareConfig,
};
use aajoin::ingest::{parse_geojson_bytes, parse_path_bytes, scene_to_geojson};
use aajoin::raster::alpha_from_distance;
use aajoin::{
    make_join, parse_geojson_lines, parse_path_text, rasterize_triangle, render_scene, render_strokes,
    tessellate_join_proposed, tessellate_polyline, BatchLabel, JoinMethod, Polyline, RenderOptions, Scene, StrokeStyle,
    Vec2, Viewport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn two_triangle_joins() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2a);
    let max_turn = 2.0 * 2f64.atan();
    for i in 0..1000 {
        let turn = rng.gen_range(1f64.to_radians()..max_turn);
        let heading = rng.gen_range(0.0..std::f64::consts::TAU);
        let width = rng.gen_range(0.5..40.0);
        let pivot = Vec2::new(rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let d_in = Vec2::new(1.0, 0.0).rotate(heading);
        let d_out = d_in.rotate(sign * turn);
        let join = make_join(pivot - d_in * 50.0, pivot, pivot + d_out * 50.0, width)
            .map_err(|e| format!("join {i}: {e}"))?
            .ok_or_else(|| format!("join {i}: no join for turn {turn}"))?;
        let n = tessellate_join_proposed(&join, &StrokeStyle::new(width)).triangle_count();
        check(n == 2, format!("join {i} (turn {:.3} deg) emitted {n} triangles", turn.to_degrees()))?;
    }
    Ok("1000/1000 joins emit exactly 2 triangles".into())
}

fn bench_config() -> CompareConfig {
    CompareConfig {
        style: StrokeStyle::new(6.0),
        fan_step: 10f64.to_radians(),
        viewport: Viewport::new(512, 512).unwrap(),
        margin: 16.0,
    }
}

fn draw_call_reduction() -> Outcome {
    let networks = standard_networks(1, 10, 20).map_err(|e| e.to_string())?;
    let report = compare_methods(&networks, &bench_config()).map_err(|e| e.to_string())?;
    let mut ratios = Vec::new();
    for row in &report.rows {
        let (p, f) = (row.proposed.per_feature.draw_calls, row.fan.per_feature.draw_calls);
        check(p < f, format!("network {}: proposed {p} >= fan {f}", row.network))?;
        ratios.push(f as f64 / p as f64);
    }
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let avg = &report.average;
    let ratio_of_means = avg.fan_draw_calls / avg.proposed_draw_calls;
    check(
        mean_ratio >= 2.0 && ratio_of_means >= 2.0,
        format!("fan/proposed ratio {mean_ratio:.2} (of averages {ratio_of_means:.2}) below 2.0"),
    )?;
    Ok(format!(
        "avg draw calls fan {:.1} vs proposed {:.1}; mean ratio {mean_ratio:.2}, ratio of averages {ratio_of_means:.2}",
        avg.fan_draw_calls, avg.proposed_draw_calls
    ))
}

fn arc_fidelity_criterion() -> Outcome {
    let proposed = StrokeStyle::new(20.0);
    let fan = proposed.with_join(JoinMethod::fan_degrees(30.0));
    let mut parts = Vec::new();
    for deg in [30.0f64, 90.0, 150.0] {
        let p = arc_fidelity(&proposed, deg.to_radians()).map_err(|e| e.to_string())?.max_deviation;
        let f = arc_fidelity(&fan, deg.to_radians()).map_err(|e| e.to_string())?.max_deviation;
        check(p <= 0.5, format!("{deg} deg: proposed deviation {p:.4} px > 0.5"))?;
        if deg > 30.0 {
            check(f > p, format!("{deg} deg: fan deviation {f:.4} not above proposed {p:.4}"))?;
        }
        parts.push(format!("{deg}deg {p:.3}/{f:.3}"));
    }
    Ok(format!("max deviation proposed/fan30 (px): {}", parts.join(", ")))
}

/// Two arms long enough for the inner bisector trim at any sweep angle.
fn sweep_join(turn_deg: f64, width: f64) -> (Polyline, Vec2, Viewport) {
    let turn = turn_deg.to_radians();
    let arm = width * (turn * 0.5).tan() + 2.0 * width;
    let size = (2.0 * (arm + width)).ceil() as u32;
    let pivot = Vec2::new(size as f64 * 0.5 + 0.3, size as f64 * 0.5 + 0.1);
    let d_in = Vec2::new(1.0, 0.0).rotate(0.2);
    let d_out = d_in.rotate(turn);
    let line = Polyline::new(vec![pivot - d_in * arm, pivot, pivot + d_out * arm]).unwrap();
    (line, pivot, Viewport::new(size, size).unwrap())
}

fn zero_overlap() -> Outcome {
    let config = bench_config();
    let style = config.style;
    for (seed, scene) in standard_networks(1, 10, 20).map_err(|e| e.to_string())? {
        let lines = scene.to_screen(config.viewport, config.margin).map_err(|e| e.to_string())?;
        let n = measure_overlap(&lines, &style, config.viewport).map_err(|e| e.to_string())?;
        check(n == 0, format!("seed {seed}: {n} overlap pixels"))?;
    }
    for deg in (1..=17).map(|k| k as f64 * 10.0) {
        for width in [6.0, 20.0] {
            let (line, _, vp) = sweep_join(deg, width);
            let n = measure_overlap(&[line], &StrokeStyle::new(width), vp).map_err(|e| e.to_string())?;
            check(n == 0, format!("{deg} deg, W={width}: {n} overlap pixels"))?;
        }
    }
    let (line, _, vp) = sweep_join(90.0, 6.0);
    let legacy = tessellate_polyline_legacy(&line, &style, 10f64.to_radians()).map_err(|e| e.to_string())?;
    let (_, stats) = render_strokes(&[legacy], &style, vp, &RenderOptions::default());
    check(stats.overlap_pixels > 0, "legacy tessellation shows no overlap at 90 deg")?;
    Ok(format!(
        "0 overlap on 10 networks and the 10..170 deg sweep; legacy 90 deg join: {} pixels",
        stats.overlap_pixels
    ))
}

fn attribute_exactness() -> Outcome {
    let mut fragments = 0usize;
    let mut worst = 0.0f64;
    for deg in (1..=17).map(|k| k as f64 * 10.0) {
        for width in [6.0, 20.0] {
            let (line, pivot, vp) = sweep_join(deg, width);
            let style = StrokeStyle::new(width);
            let h = style.half_width();
            for batch in tessellate_polyline(&line, &style).map_err(|e| e.to_string())? {
                if batch.label != BatchLabel::JoinProposed {
                    continue;
                }
                for t in batch.triangles() {
                    for f in rasterize_triangle(t[0], t[1], t[2], vp) {
                        let err = (f.attr.length() * h - f.center().distance(pivot)).abs();
                        worst = worst.max(err / width);
                        fragments += 1;
                        check(
                            err < 1e-9 * width,
                            format!("{deg} deg, W={width}: fragment ({}, {}) off by {err:e}", f.x, f.y),
                        )?;
                    }
                }
            }
        }
    }
    check(fragments > 1000, format!("only {fragments} join fragments sampled"))?;
    Ok(format!("{fragments} join fragments, worst error {worst:.2e} * W"))
}

fn oracle_agreement() -> Outcome {
    let vp = Viewport::new(512, 512).unwrap();
    let style = StrokeStyle::new(6.0);
    let l_fixture = parse_path_text(&std::fs::read_to_string(fixture("l_fixture.txt")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let seed1 = aajoin::bench::gen_network(1, 20, 0.5).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (name, scene) in [("L-fixture", l_fixture), ("seed-1", seed1)] {
        let lines = scene.to_screen(vp, 16.0).map_err(|e| e.to_string())?;
        let (fb, _) = render_scene(&lines, &style, vp, &RenderOptions::default()).map_err(|e| e.to_string())?;
        let oracle = oracle_render(&lines, &style, vp, 16).map_err(|e| e.to_string())?;
        let mask = near_centerline_mask(&lines, style.width, vp);
        let err = mean_abs_error(&fb.alpha_map(), &oracle, &mask);
        let pixels = mask.iter().filter(|&&m| m).count();
        check(err <= 0.05, format!("{name}: mean |alpha error| {err:.4} > 0.05"))?;
        parts.push(format!("{name} {err:.2e} over {pixels} px"));
    }
    Ok(format!("mean |alpha - oracle|: {}", parts.join(", ")))
}

fn fragment_rule() -> Outcome {
    let mut checked = 0usize;
    for n in [0.0, 0.5, 0.9] {
        let mut prev = f64::INFINITY;
        for k in 0..=15000 {
            let d = k as f64 * 1e-4;
            let a = alpha_from_distance(d, n);
            let expected = if d <= n {
                1.0
            } else if d >= 1.0 {
                0.0
            } else {
                (1.0 - d) / (1.0 - n)
            };
            check((a - expected).abs() <= 1e-12, format!("N={n}, d={d}: alpha {a} != {expected}"))?;
            check(a <= prev, format!("N={n}, d={d}: alpha increases"))?;
            if prev.is_finite() {
                // a jump larger than the ramp slope allows would be a discontinuity
                check((prev - a) <= 1e-4 / (1.0 - n) + 1e-12, format!("N={n}, d={d}: jump {}", prev - a))?;
            }
            prev = a;
            checked += 1;
        }
        check(alpha_from_distance(n, n) == 1.0 && alpha_from_distance(1.0, n) == 0.0, format!("N={n}: band edges"))?;
    }
    Ok(format!("{checked} grid points exact, monotone and continuous"))
}

fn render_cli(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let mut argv: Vec<String> = vec!["aajoin".into(), "render".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.display().to_string());
    let code = aajoin::cli::run(argv);
    check(code == 0, format!("render {args:?} exited {code}"))?;
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let l = fixture("l_fixture.txt").display().to_string();
    let configs: [Vec<&str>; 2] = [
        vec!["--input", l.as_str(), "--viewport", "256x200", "--width", "9"],
        vec!["--seed", "1", "--roads", "20", "--density", "0.5", "--color", "1E5AC8C0"],
    ];
    for (i, cfg) in configs.iter().enumerate() {
        let mut outputs = Vec::new();
        for (j, threads) in ["0", "0", "1", "8"].iter().enumerate() {
            let mut args = cfg.clone();
            args.extend(["--threads", threads]);
            outputs.push(render_cli(&args, &dir.path().join(format!("{i}_{j}.ppm")))?);
        }
        check(outputs.windows(2).all(|w| w[0] == w[1]), format!("config {i}: images differ"))?;
    }
    Ok("repeated runs and 1 vs 8 threads give byte-identical PPM".into())
}

fn parser_robustness() -> Outcome {
    // fixtures parse to the expected vertices and survive a serialize/parse cycle bit-exactly
    let roads = std::fs::read_to_string(fixture("roads.geojson")).map_err(|e| e.to_string())?;
    let scene = parse_geojson_lines(&roads).map_err(|e| e.to_string())?;
    let expected = [
        vec![(2.3912, 48.8065), (2.4034, 48.8071), (2.4101, 48.8153)],
        vec![(2.395, 48.80), (2.395, 48.812)],
        vec![(2.4, 48.8), (2.405, 48.803), (2.407, 48.8), (2.412, 48.804)],
    ];
    let got: Vec<Vec<(f64, f64)>> =
        scene.polylines().iter().map(|l| l.vertices().iter().map(|v| (v.x, v.y)).collect()).collect();
    check(got == expected, format!("roads.geojson parsed to {got:?}"))?;
    let mut fixtures = 0;
    for name in ["roads.geojson", "collection.geojson"] {
        let text = std::fs::read_to_string(fixture(name)).map_err(|e| e.to_string())?;
        let scene = parse_geojson_lines(&text).map_err(|e| e.to_string())?;
        let again = parse_geojson_lines(&scene_to_geojson(scene.polylines())).map_err(|e| e.to_string())?;
        check(scene == again, format!("{name}: round trip changed vertices"))?;
        fixtures += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let seeds: Vec<Vec<u8>> = vec![roads.into_bytes(), b"0 0\n1 1\n\n2 2\n3 5\n".to_vec()];
    let mut outcomes = [0usize; 2];
    for i in 0..10_000 {
        let bytes: Vec<u8> = if i % 2 == 0 {
            let len = rng.gen_range(0..512);
            (0..len).map(|_| rng.gen()).collect()
        } else {
            // mutate a valid document so the parsers get past the first byte
            let mut b = seeds[(i / 2) % 2].clone();
            for _ in 0..rng.gen_range(1..8) {
                let at = rng.gen_range(0..b.len());
                match rng.gen_range(0..3) {
                    0 => b[at] = rng.gen(),
                    1 => {
                        b.remove(at);
                    }
                    _ => b.insert(at, *b"[]{},:\"-.e0 \n#".get(rng.gen_range(0..14)).unwrap()),
                }
                if b.is_empty() {
                    break;
                }
            }
            b
        };
        let result = catch_unwind(AssertUnwindSafe(|| {
            let a: Result<Scene, _> = parse_geojson_bytes(&bytes);
            let b: Result<Scene, _> = parse_path_bytes(&bytes);
            a.is_ok() as usize + b.is_ok() as usize
        }));
        match result {
            Ok(ok) => {
                outcomes[0] += ok;
                outcomes[1] += 2 - ok;
            }
            Err(_) => return Err(format!("parser panicked on case {i}: {bytes:?}")),
        }
    }
    Ok(format!(
        "{fixtures} fixtures round-trip exactly; 10000 fuzz cases: {} scenes, {} structured errors, 0 panics",
        outcomes[0], outcomes[1]
    ))
}

fn main() {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("two-triangle joins", Duration::from_secs(1), two_triangle_joins),
        ("draw-call reduction", Duration::from_secs(10), draw_call_reduction),
        ("arc fidelity", Duration::from_secs(5), arc_fidelity_criterion),
        ("zero overlap", Duration::from_secs(10), zero_overlap),
        ("attribute-distance exactness", Duration::from_secs(5), attribute_exactness),
        ("oracle agreement", Duration::from_secs(30), oracle_agreement),
        ("fragment alpha rule", Duration::from_secs(1), fragment_rule),
        ("determinism", Duration::from_secs(5), determinism),
        ("parser robustness", Duration::from_secs(10), parser_robustness),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= *budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match &outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                println!("criterion {} FAIL {name}: {why} ({elapsed:.2?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
