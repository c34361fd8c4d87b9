//! Point-cloud CSV, diagram JSON and landscape JSON.
//!
//! Floats are written with 17 significant digits, enough to read back the
//! identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use pdsim_core::landscape::{PLFunction, PersistenceLandscape};
use pdsim_core::persistence::PersistenceDiagram;
use pdsim_core::sampling::PointCloud;
use serde::Deserialize;

use crate::Error;

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn points_to_csv(cloud: &PointCloud) -> String {
    let mut out = String::from("x,y\n");
    for &[x, y] in cloud.points() {
        let _ = writeln!(out, "{},{}", fmt_f64(x), fmt_f64(y));
    }
    out
}

pub fn write_points(path: &Path, cloud: &PointCloud) -> Result<(), Error> {
    write_file(path, &points_to_csv(cloud))
}

/// Reads a CSV with header `x,y`. Errors name the offending line.
pub fn read_points(path: &Path) -> Result<PointCloud, Error> {
    let text = read_file(path)?;
    parse_points(path, &text)
}

fn parse_points(path: &Path, text: &str) -> Result<PointCloud, Error> {
    let parse_err = |line: u64, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "y"] {
        return Err(parse_err(1, "expected header `x,y`".into()));
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let coord = |k: usize| -> Result<f64, Error> {
            let field = &record[k];
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("`{field}` is not a finite number")))
        };
        points.push([coord(0)?, coord(1)?]);
    }
    if points.is_empty() {
        return Err(Error::Input(format!("{}: no points", path.display())));
    }
    Ok(PointCloud::from_points(points)?)
}

pub fn diagram_to_json(d: &PersistenceDiagram) -> String {
    let pairs: Vec<String> = d
        .pairs()
        .iter()
        .map(|&(b, e)| format!("[{},{}]", fmt_f64(b), fmt_f64(e)))
        .collect();
    let essential: Vec<String> = d.essential().iter().map(|&b| fmt_f64(b)).collect();
    format!(
        "{{\"dim\":{},\"pairs\":[{}],\"essential\":[{}]}}\n",
        d.dim(),
        pairs.join(","),
        essential.join(",")
    )
}

#[derive(Deserialize)]
struct DiagramFile {
    dim: usize,
    pairs: Vec<[f64; 2]>,
    #[serde(default)]
    essential: Vec<f64>,
}

pub fn diagram_from_json(text: &str) -> Result<PersistenceDiagram, Error> {
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    let pairs = file.pairs.into_iter().map(|[b, d]| (b, d)).collect();
    Ok(PersistenceDiagram::new(file.dim, pairs, file.essential)?)
}

pub fn write_diagram(path: &Path, d: &PersistenceDiagram) -> Result<(), Error> {
    write_file(path, &diagram_to_json(d))
}

pub fn read_diagram(path: &Path) -> Result<PersistenceDiagram, Error> {
    let text = read_file(path)?;
    diagram_from_json(&text).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn landscape_to_json(l: &PersistenceLandscape) -> String {
    let layers: Vec<String> = l
        .layers()
        .iter()
        .map(|f| {
            let knots: Vec<String> = f
                .knots()
                .iter()
                .map(|&(t, y)| format!("[{},{}]", fmt_f64(t), fmt_f64(y)))
                .collect();
            format!("[{}]", knots.join(","))
        })
        .collect();
    format!("{{\"layers\":[{}]}}\n", layers.join(","))
}

#[derive(Deserialize)]
struct LandscapeFile {
    layers: Vec<Vec<[f64; 2]>>,
}

/// Layers of a landscape JSON file, as piecewise-linear functions.
pub fn landscape_layers_from_json(text: &str) -> Result<Vec<PLFunction>, Error> {
    let file: LandscapeFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    file.layers
        .into_iter()
        .map(|knots| {
            Ok(PLFunction::from_knots(
                knots.into_iter().map(|[t, y]| (t, y)).collect(),
            )?)
        })
        .collect()
}

pub fn write_landscape(path: &Path, l: &PersistenceLandscape) -> Result<(), Error> {
    write_file(path, &landscape_to_json(l))
}
