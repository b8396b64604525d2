//! Geometry file formats: GeoJSON and WKT input, GeoJSON and stats output.

use areadecomp::{DecompositionResult, Point, Polygon};
use serde_json::{json, Value};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    /// The file could not be read or its syntax is not understood (exit 1).
    #[error("unreadable input: {0}")]
    Unreadable(String),
    /// The file parsed but describes an invalid polygon (exit 2).
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
}

/// Reads a polygon from a GeoJSON or WKT file; the format is detected by
/// the first non-whitespace character.
pub fn read_polygon_file(path: &Path) -> Result<Polygon, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Unreadable(format!("{}: {e}", path.display())))?;
    read_polygon_str(&text)
}

pub fn read_polygon_str(text: &str) -> Result<Polygon, IoError> {
    match text.trim_start().chars().next() {
        Some('{') => parse_geojson_polygon(text),
        Some(_) => parse_wkt_polygon(text),
        None => Err(IoError::Unreadable("empty input".into())),
    }
}

fn ring_to_polygon(ring: &[(f64, f64)]) -> Result<Polygon, IoError> {
    let mut pts: Vec<Point> = ring.iter().map(|&(x, y)| Point::new(x, y)).collect();
    // Drop the closing repetition if present.
    if pts.len() >= 2 && pts.first().unwrap().dist(*pts.last().unwrap()) == 0.0 {
        pts.pop();
    }
    Polygon::new(pts).map_err(|e| IoError::InvalidPolygon(e.to_string()))
}

pub fn parse_geojson_polygon(text: &str) -> Result<Polygon, IoError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| IoError::Unreadable(e.to_string()))?;
    let geometry = find_polygon_geometry(&value)
        .ok_or_else(|| IoError::Unreadable("no Polygon geometry found".into()))?;
    let rings = geometry
        .get("coordinates")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Unreadable("Polygon without coordinates".into()))?;
    let exterior = rings
        .first()
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Unreadable("Polygon with empty coordinates".into()))?;
    let mut ring = Vec::with_capacity(exterior.len());
    for pos in exterior {
        let pair = pos
            .as_array()
            .filter(|a| a.len() >= 2)
            .ok_or_else(|| IoError::Unreadable("coordinate is not a position".into()))?;
        let x = pair[0].as_f64();
        let y = pair[1].as_f64();
        match (x, y) {
            (Some(x), Some(y)) => ring.push((x, y)),
            _ => return Err(IoError::Unreadable("non-numeric coordinate".into())),
        }
    }
    ring_to_polygon(&ring)
}

fn find_polygon_geometry(value: &Value) -> Option<&Value> {
    match value.get("type").and_then(Value::as_str) {
        Some("Polygon") => Some(value),
        Some("Feature") => value.get("geometry").and_then(find_polygon_geometry),
        Some("FeatureCollection") => value
            .get("features")
            .and_then(Value::as_array)
            .and_then(|f| f.first())
            .and_then(find_polygon_geometry),
        _ => None,
    }
}

pub fn parse_wkt_polygon(text: &str) -> Result<Polygon, IoError> {
    let t = text.trim();
    let upper = t.to_ascii_uppercase();
    let rest = upper
        .strip_prefix("POLYGON")
        .ok_or_else(|| IoError::Unreadable("expected POLYGON".into()))?;
    let _ = rest;
    let open = t
        .find("((")
        .ok_or_else(|| IoError::Unreadable("expected ((".into()))?;
    let close = t
        .rfind("))")
        .ok_or_else(|| IoError::Unreadable("expected ))".into()))?;
    if close <= open {
        return Err(IoError::Unreadable("malformed POLYGON".into()));
    }
    // Exterior ring only: stop at the first inner closing parenthesis.
    let inner = &t[open + 2..close];
    let exterior = inner.split(')').next().unwrap_or("");
    let mut ring = Vec::new();
    for pair in exterior.split(',') {
        let mut nums = pair.split_whitespace();
        let x = nums
            .next()
            .and_then(|v| v.parse::<f64>().ok())
            .ok_or_else(|| IoError::Unreadable(format!("bad coordinate: {pair}")))?;
        let y = nums
            .next()
            .and_then(|v| v.parse::<f64>().ok())
            .ok_or_else(|| IoError::Unreadable(format!("bad coordinate: {pair}")))?;
        ring.push((x, y));
    }
    ring_to_polygon(&ring)
}

fn ring_coordinates(p: &Polygon) -> Value {
    // RFC 7946: exterior ring, CCW, first position repeated at the end.
    let mut coords: Vec<Value> = p.vertices().iter().map(|v| json!([v.x, v.y])).collect();
    if let Some(first) = coords.first().cloned() {
        coords.push(first);
    }
    Value::Array(coords)
}

pub fn polygon_to_geojson(p: &Polygon) -> Value {
    json!({
        "type": "Polygon",
        "coordinates": [ring_coordinates(p)],
    })
}

pub fn polygon_to_wkt(p: &Polygon) -> String {
    let mut pairs: Vec<String> = p
        .vertices()
        .iter()
        .map(|v| format!("{} {}", v.x, v.y))
        .collect();
    if let Some(first) = pairs.first().cloned() {
        pairs.push(first);
    }
    format!("POLYGON (({}))", pairs.join(", "))
}

/// The result as a GeoJSON FeatureCollection, one feature per sub-polygon.
pub fn result_to_geojson(res: &DecompositionResult) -> Value {
    let features: Vec<Value> = res
        .polygons
        .iter()
        .zip(&res.reports)
        .map(|(poly, r)| {
            json!({
                "type": "Feature",
                "geometry": polygon_to_geojson(poly),
                "properties": {
                    "partition_id": r.id,
                    "weight": r.target_weight,
                    "area": r.polygon_area,
                    "area_error": r.area_error,
                    "scores": {
                        "schwartzberg": r.scores.schwartzberg,
                        "polsby_popper": r.scores.polsby_popper,
                        "reock": r.scores.reock,
                        "two_balls": r.scores.two_balls,
                        "length_width": r.scores.length_width,
                        "collective": r.scores.collective,
                    },
                },
            })
        })
        .collect();
    json!({
        "type": "FeatureCollection",
        "features": features,
    })
}

/// Line-delimited stats with a fixed field order; byte-identical for
/// identical runs (no wall-clock fields).
pub fn result_to_stats(res: &DecompositionResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "run cell_size={} partitions={} tau_met={}\n",
        res.cell_size,
        res.reports.len(),
        res.tau_met
    ));
    for r in &res.reports {
        out.push_str(&format!(
            "partition id={} weight={} area={} area_error={} schwartzberg={} \
             polsby_popper={} reock={} two_balls={} length_width={} collective={}\n",
            r.id,
            r.target_weight,
            r.polygon_area,
            r.area_error,
            r.scores.schwartzberg,
            r.scores.polsby_popper,
            r.scores.reock,
            r.scores.two_balls,
            r.scores.length_width,
            r.scores.collective,
        ));
    }
    for b in &res.borders {
        out.push_str(&format!(
            "border partitions={},{} original_points={} simplified_points={} max_dist={}\n",
            b.partitions.0, b.partitions.1, b.original_points, b.simplified_points, b.max_dist
        ));
    }
    out
}
