//! Text formats: cloud CSV, filtration JSON, diagram CSV, triangulation JSON.
//!
//! Every writer is deterministic, so identical inputs give byte-identical files.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cloud::ChromaticPointCloud;
use crate::delaunay::Triangulation;
use crate::error::{Error, Result};
use crate::filtration::{FilteredComplex, FiltrationKind};
use crate::persistence::{Bar, PersistenceDiagram};
use crate::simplex::Simplex;

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// Read a cloud from CSV with header `x0,...,x{d-1},colour`.
pub fn read_cloud_csv(text: &str) -> Result<ChromaticPointCloud> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| parse_err(1, e))?.clone();
    let d = header.len().checked_sub(1).filter(|&d| d > 0).ok_or_else(|| parse_err(1, "need at least one coordinate column"))?;
    for (i, h) in header.iter().enumerate() {
        let want = if i == d { "colour".to_string() } else { format!("x{i}") };
        if h != want {
            return Err(parse_err(1, format!("expected header column {want:?}, found {h:?}")));
        }
    }
    let mut points = vec![];
    let mut colours = vec![];
    for (row, rec) in rdr.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| parse_err(line, e))?;
        if rec.len() != d + 1 {
            return Err(Error::DimensionMismatch(format!("line {line} has {} fields, expected {}", rec.len(), d + 1)));
        }
        let p = (0..d)
            .map(|i| rec[i].parse::<f64>().map_err(|_| parse_err(line, format!("bad coordinate {:?}", &rec[i]))))
            .collect::<Result<Vec<f64>>>()?;
        let c = rec[d].parse::<usize>().map_err(|_| parse_err(line, format!("bad colour {:?}", &rec[d])))?;
        points.push(p);
        colours.push(c);
    }
    ChromaticPointCloud::new(points, colours)
}

/// Shortest round-trip decimal, always with a fractional part or exponent.
fn fmt_float(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:?}")
}

pub fn write_cloud_csv(cloud: &ChromaticPointCloud) -> String {
    let mut out = String::new();
    for i in 0..cloud.d() {
        let _ = write!(out, "x{i},");
    }
    out.push_str("colour\n");
    for (p, c) in cloud.points().iter().zip(cloud.colours()) {
        for x in p {
            out.push_str(&fmt_float(*x));
            out.push(',');
        }
        let _ = writeln!(out, "{c}");
    }
    out
}

/// Filtration as JSON, values printed with 17 significant digits.
pub fn write_filtration_json(f: &FilteredComplex) -> Result<String> {
    let mut out = format!("{{\"d\":{},\"s\":{},\"kind\":\"{}\",\"simplices\":[", f.d, f.s, f.kind);
    for (i, (s, v)) in f.entries().iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite value for {s:?}")));
        }
        if i > 0 {
            out.push(',');
        }
        let verts: Vec<String> = s.vertices().iter().map(|x| x.to_string()).collect();
        let _ = write!(out, "\n{{\"v\":[{}],\"value\":{:.16e}}}", verts.join(","), v);
    }
    out.push_str("\n]}\n");
    Ok(out)
}

#[derive(Deserialize)]
struct FiltrationFile {
    d: usize,
    s: usize,
    kind: String,
    simplices: Vec<EntryFile>,
}

#[derive(Deserialize)]
struct EntryFile {
    v: Vec<usize>,
    value: f64,
}

/// Parse filtration JSON. Face closure and monotonicity are checked.
pub fn read_filtration_json(text: &str) -> Result<FilteredComplex> {
    let file: FiltrationFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind: FiltrationKind = file.kind.parse()?;
    let mut entries = Vec::with_capacity(file.simplices.len());
    for e in file.simplices {
        entries.push((Simplex::new(e.v)?, e.value));
    }
    let f = FilteredComplex::new(kind, file.d, file.s, entries);
    if f.len() != f.complex().len() {
        return Err(Error::InvalidInput("repeated simplex".into()));
    }
    crate::filtration::verify_monotone(&f)?;
    Ok(f)
}

/// Diagram CSV with header `degree,birth,death`; essential classes die at `inf`.
pub fn write_diagram_csv(dgm: &PersistenceDiagram) -> String {
    let mut out = String::from("degree,birth,death\n");
    for b in &dgm.bars {
        let _ = writeln!(out, "{},{},{}", b.degree, fmt_float(b.birth), fmt_float(b.death));
    }
    out
}

pub fn read_diagram_csv(text: &str) -> Result<PersistenceDiagram> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| parse_err(1, e))?;
    if header.iter().collect::<Vec<_>>() != ["degree", "birth", "death"] {
        return Err(parse_err(1, "expected header degree,birth,death"));
    }
    let mut bars = vec![];
    for (row, rec) in rdr.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| parse_err(line, e))?;
        if rec.len() != 3 {
            return Err(parse_err(line, "expected 3 fields"));
        }
        let degree = rec[0].parse().map_err(|_| parse_err(line, "bad degree"))?;
        let birth: f64 = rec[1].parse().map_err(|_| parse_err(line, "bad birth"))?;
        let death: f64 = rec[2].parse().map_err(|_| parse_err(line, "bad death"))?;
        if !birth.is_finite() || death < birth {
            return Err(parse_err(line, "bar must have finite birth and death >= birth"));
        }
        bars.push(Bar { degree, birth, death });
    }
    Ok(PersistenceDiagram::from_bars(bars))
}

#[derive(Serialize)]
struct TriangulationFile<'a> {
    d: usize,
    s: usize,
    n: usize,
    top_dimension: usize,
    counts: Vec<usize>,
    maximal: Vec<&'a [usize]>,
}

/// Chromatic Delaunay triangulation as JSON: maximal simplices plus
/// simplex counts per dimension.
pub fn write_triangulation_json(cloud: &ChromaticPointCloud, mu: &[usize], tri: &Triangulation) -> String {
    let top = tri.complex.dim().unwrap_or(0);
    let counts = (0..=top).map(|k| tri.complex.of_dim(k).count()).collect();
    let mut maximal: Vec<&Simplex> = tri.maximal.iter().collect();
    maximal.sort_by(|a, b| a.dim_lex_cmp(b));
    let file = TriangulationFile {
        d: cloud.d(),
        s: crate::cloud::num_colours(mu) - 1,
        n: cloud.len(),
        top_dimension: tri.top_dimension,
        counts,
        maximal: maximal.iter().map(|s| s.vertices()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}
