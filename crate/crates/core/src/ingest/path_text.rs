//! Plain path format: one `x y` vertex per line, blank lines between
//! polylines, `#` starts a comment.

use crate::error::{Error, Result};
use crate::geometry::{Polyline, Vec2};

use super::Scene;

pub fn parse_path_text(text: &str) -> Result<Scene> {
    let mut polylines = Vec::new();
    let mut current: Vec<Vec2> = Vec::new();
    let mut start_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            // comment-only lines do not end a polyline
            if raw.trim().is_empty() {
                flush(&mut current, start_line, &mut polylines)?;
            }
            continue;
        }
        let mut tokens = content.split_whitespace();
        let (Some(x), Some(y), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse { line: line_no, message: format!("expected \"x y\", got {content:?}") });
        };
        let number = |tok: &str| -> Result<f64> {
            match tok.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse { line: line_no, message: format!("invalid coordinate {tok:?}") }),
            }
        };
        if current.is_empty() {
            start_line = line_no;
        }
        current.push(Vec2::new(number(x)?, number(y)?));
    }
    flush(&mut current, start_line, &mut polylines)?;
    Scene::new(polylines)
}

fn flush(current: &mut Vec<Vec2>, start_line: usize, out: &mut Vec<Polyline>) -> Result<()> {
    if current.is_empty() {
        return Ok(());
    }
    let line = Polyline::new(std::mem::take(current)).map_err(|e| match e {
        Error::InvalidPolyline(msg) => Error::InvalidPolyline(format!("polyline starting at line {start_line}: {msg}")),
        other => other,
    })?;
    out.push(line);
    Ok(())
}

/// Like [`parse_path_text`] for raw bytes; invalid UTF-8 is a parse error.
pub fn parse_path_bytes(bytes: &[u8]) -> Result<Scene> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::Parse { line, message: "invalid UTF-8".into() }
    })?;
    parse_path_text(text)
}

/// Writes polylines in the path format. Coordinates use the shortest
/// decimal that parses back to the same `f64`.
pub fn serialize_path_text(polylines: &[Polyline]) -> String {
    let mut out = String::new();
    for (i, line) in polylines.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for v in line.vertices() {
            out.push_str(&format!("{} {}\n", v.x, v.y));
        }
    }
    out
}
