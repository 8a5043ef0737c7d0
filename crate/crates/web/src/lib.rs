//! WebAssembly bindings for the browser demo.
//!
//! Every operation takes the cloud as JSON, `{"points": [[x, y], ...],
//! "colours": [0, 1, ...]}`, and returns JSON. The `*_impl` functions are
//! plain Rust so they can be tested natively.

use chromatic_tda::cloud::ChromaticPointCloud;
use chromatic_tda::delaunay::chromatic_delaunay;
use chromatic_tda::filtration::{build, FiltrationKind, FilteredComplex};
use chromatic_tda::persistence::compute_persistence;
use chromatic_tda::simplex::Simplex;
use serde::Deserialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Larger clouds make the page unresponsive.
pub const MAX_POINTS: usize = 400;

#[derive(Deserialize)]
struct CloudInput {
    points: Vec<Vec<f64>>,
    colours: Vec<usize>,
}

fn parse_cloud(input: &str) -> Result<ChromaticPointCloud, String> {
    let c: CloudInput = serde_json::from_str(input).map_err(|e| format!("bad input: {e}"))?;
    if c.points.len() > MAX_POINTS {
        return Err(format!("at most {MAX_POINTS} points, got {}", c.points.len()));
    }
    ChromaticPointCloud::new(c.points, c.colours).map_err(|e| e.to_string())
}

fn parse_kind(kind: &str) -> Result<FiltrationKind, String> {
    match kind.parse::<FiltrationKind>().map_err(|e| e.to_string())? {
        k @ (FiltrationKind::Alpha | FiltrationKind::DelCech | FiltrationKind::DelRips) => Ok(k),
        other => Err(format!("{} is not offered in the demo", other.as_str())),
    }
}

fn filtration(input: &str, kind: &str) -> Result<FilteredComplex, String> {
    let cloud = parse_cloud(input)?;
    build(parse_kind(kind)?, &cloud, cloud.colours(), None).map_err(|e| e.to_string())
}

fn edges_and_triangles<'a>(simplices: impl Iterator<Item = &'a Simplex>) -> serde_json::Value {
    let (mut edges, mut triangles) = (vec![], vec![]);
    for s in simplices {
        match s.len() {
            2 => edges.push(s.vertices().to_vec()),
            3 => triangles.push(s.vertices().to_vec()),
            _ => {}
        }
    }
    json!({ "edges": edges, "triangles": triangles })
}

/// Chromatic Delaunay triangulation: edges, triangles and the top dimension.
pub fn triangulate_impl(input: &str) -> Result<String, String> {
    let cloud = parse_cloud(input)?;
    let tri = chromatic_delaunay(&cloud, cloud.colours()).map_err(|e| e.to_string())?;
    let mut out = edges_and_triangles(tri.complex.iter());
    out["top_dimension"] = json!(tri.top_dimension);
    out["simplices"] = json!(tri.complex.len());
    Ok(out.to_string())
}

/// Edges and triangles of the sublevel complex at radius `r`.
pub fn sublevel_impl(input: &str, kind: &str, r: f64) -> Result<String, String> {
    let f = filtration(input, kind)?;
    let entries = f.entries().iter().filter(|(_, v)| *v <= r).map(|(s, _)| s);
    Ok(edges_and_triangles(entries).to_string())
}

/// Persistence diagram up to `max_degree`; infinite deaths are `null`.
/// `max_value` is the largest filtration value, for scaling plots.
pub fn diagram_impl(input: &str, kind: &str, max_degree: usize) -> Result<String, String> {
    let f = filtration(input, kind)?;
    let dgm = compute_persistence(&f, max_degree).map_err(|e| e.to_string())?;
    let bars: Vec<_> = dgm
        .bars
        .iter()
        .map(|b| json!({ "degree": b.degree, "birth": b.birth, "death": b.death.is_finite().then_some(b.death) }))
        .collect();
    let max_value = f.entries().iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(json!({ "bars": bars, "max_value": max_value }).to_string())
}

#[wasm_bindgen]
pub fn triangulate(input: &str) -> Result<String, JsError> {
    triangulate_impl(input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sublevel(input: &str, kind: &str, r: f64) -> Result<String, JsError> {
    sublevel_impl(input, kind, r).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn diagram(input: &str, kind: &str, max_degree: usize) -> Result<String, JsError> {
    diagram_impl(input, kind, max_degree).map_err(|e| JsError::new(&e))
}
