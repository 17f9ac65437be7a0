//! LineString / MultiLineString extraction from GeoJSON.
//!
//! Accepts a FeatureCollection, a Feature, a GeometryCollection or a bare
//! geometry. Other geometry types and foreign members are ignored, and
//! positions keep only their first two coordinates.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{Polyline, Vec2, VERTEX_EPSILON};

use super::Scene;

pub fn parse_geojson_lines(text: &str) -> Result<Scene> {
    parse_geojson_bytes(text.as_bytes())
}

pub fn parse_geojson_bytes(bytes: &[u8]) -> Result<Scene> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| json_error(bytes, &e))?;
    let mut out = Vec::new();
    collect(&doc, &mut out)?;
    if out.is_empty() {
        return Err(Error::EmptyScene);
    }
    Scene::new(out)
}

/// Converts serde_json's line/column into a byte offset.
fn json_error(bytes: &[u8], e: &serde_json::Error) -> Error {
    let line_start: usize = bytes.split(|&b| b == b'\n').take(e.line().saturating_sub(1)).map(|l| l.len() + 1).sum();
    let offset = (line_start + e.column().saturating_sub(1)).min(bytes.len());
    Error::Json { offset, message: e.to_string() }
}

fn collect(value: &Value, out: &mut Vec<Polyline>) -> Result<()> {
    let obj = value.as_object().ok_or_else(|| Error::GeoJson("expected a GeoJSON object".into()))?;
    match obj.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => {
            for feature in member_array(obj, "features")? {
                collect(feature, out)?;
            }
        }
        Some("Feature") => match obj.get("geometry") {
            None | Some(Value::Null) => {}
            Some(g) => collect(g, out)?,
        },
        Some("GeometryCollection") => {
            for g in member_array(obj, "geometries")? {
                collect(g, out)?;
            }
        }
        Some("LineString") => out.push(line_string(member_array(obj, "coordinates")?)?),
        Some("MultiLineString") => {
            for part in member_array(obj, "coordinates")? {
                let part =
                    part.as_array().ok_or_else(|| Error::GeoJson("MultiLineString part is not an array".into()))?;
                out.push(line_string(part)?);
            }
        }
        Some(_) => {}
        None => return Err(Error::GeoJson("object without a string \"type\"".into())),
    }
    Ok(())
}

fn member_array<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    obj.get(key).and_then(Value::as_array).ok_or_else(|| Error::GeoJson(format!("missing array member {key:?}")))
}

/// Repeated consecutive positions are legal GeoJSON; they are collapsed.
fn line_string(coords: &[Value]) -> Result<Polyline> {
    let mut verts: Vec<Vec2> = Vec::with_capacity(coords.len());
    for pos in coords {
        let p = position(pos)?;
        if verts.last().is_none_or(|q| q.distance(p) > VERTEX_EPSILON) {
            verts.push(p);
        }
    }
    if verts.len() < 2 {
        return Err(Error::GeoJson(format!("LineString needs two distinct positions, got {}", coords.len())));
    }
    Polyline::new(verts)
}

fn position(v: &Value) -> Result<Vec2> {
    let bad = || Error::GeoJson(format!("invalid position {v}"));
    let arr = v.as_array().ok_or_else(bad)?;
    if arr.len() < 2 {
        return Err(bad());
    }
    let x = arr[0].as_f64().ok_or_else(bad)?;
    let y = arr[1].as_f64().ok_or_else(bad)?;
    Vec2::try_new(x, y).ok_or_else(bad)
}

/// FeatureCollection with one LineString feature per polyline.
pub fn scene_to_geojson(polylines: &[Polyline]) -> String {
    let features: Vec<Value> = polylines
        .iter()
        .map(|l| {
            let coords: Vec<[f64; 2]> = l.vertices().iter().map(|v| [v.x, v.y]).collect();
            json!({
                "type": "Feature",
                "properties": {},
                "geometry": { "type": "LineString", "coordinates": coords },
            })
        })
        .collect();
    json!({ "type": "FeatureCollection", "features": features }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_collection() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{"name":"a"},"geometry":{"type":"LineString","coordinates":[[0,0],[1,1],[2,0]]}}
        ]}"#;
        let scene = parse_geojson_lines(text).unwrap();
        assert_eq!(scene.polylines().len(), 1);
        assert_eq!(scene.polylines()[0].vertices().len(), 3);
    }

    #[test]
    fn multi_line_string() {
        let text = r#"{"type":"MultiLineString","coordinates":[[[0,0],[1,0]],[[5,5],[6,6],[7,5]]]}"#;
        let scene = parse_geojson_lines(text).unwrap();
        assert_eq!(scene.polylines().len(), 2);
    }

    #[test]
    fn polygons_only() {
        let text = r#"{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}"#;
        assert_eq!(parse_geojson_lines(text), Err(Error::EmptyScene));
    }

    #[test]
    fn extra_dimensions_and_foreign_members() {
        let text = r#"{"type":"Feature","bbox":[0,0,1,1],"geometry":{"type":"LineString","crs":null,"coordinates":[[0,0,7],[1,2,8,9]]}}"#;
        let scene = parse_geojson_lines(text).unwrap();
        assert_eq!(scene.polylines()[0].vertices(), &[Vec2::new(0.0, 0.0), Vec2::new(1.0, 2.0)]);
    }

    #[test]
    fn repeated_positions_collapse() {
        let text = r#"{"type":"LineString","coordinates":[[0,0],[0,0],[1,0]]}"#;
        assert_eq!(parse_geojson_lines(text).unwrap().polylines()[0].vertices().len(), 2);
        let text = r#"{"type":"LineString","coordinates":[[0,0],[0,0]]}"#;
        assert!(matches!(parse_geojson_lines(text), Err(Error::GeoJson(_))));
    }

    #[test]
    fn malformed_json_reports_offset() {
        let text = "{\"type\":\n  \"LineString\",, }";
        match parse_geojson_lines(text) {
            Err(Error::Json { offset, .. }) => assert_eq!(&text[offset - 1..offset], ","),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_structure() {
        assert!(matches!(parse_geojson_lines("[1,2]"), Err(Error::GeoJson(_))));
        assert!(matches!(parse_geojson_lines(r#"{"type":"LineString"}"#), Err(Error::GeoJson(_))));
        assert!(matches!(
            parse_geojson_lines(r#"{"type":"LineString","coordinates":[[0,"a"],[1,1]]}"#),
            Err(Error::GeoJson(_))
        ));
    }

    #[test]
    fn round_trip() {
        let lines = vec![
            Polyline::new(vec![Vec2::new(0.1, 0.2), Vec2::new(1e-7, 3.5e10), Vec2::new(-4.0, 1.0 / 3.0)]).unwrap(),
            Polyline::new(vec![Vec2::new(2.397, 48.808), Vec2::new(2.401, 48.812)]).unwrap(),
        ];
        let back = parse_geojson_lines(&scene_to_geojson(&lines)).unwrap();
        assert_eq!(back.polylines(), &lines[..]);
    }
}
