//! Readers for point lists, distance matrices, graphs and tree types.

use std::fs;
use std::path::Path;

use optnet::geometry::Point2;
use optnet::graph::{TreeTopology, WeightedGraph};
use optnet::metric::FiniteMetricSpace;
use optnet::scalar::{parse_rational, Scalar};
use serde::Deserialize;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: u64, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

pub fn parse_error(path: &Path, line: u64, column: usize, message: impl Into<String>) -> InputError {
    InputError::Parse { path: path.display().to_string(), line, column, message: message.into() }
}

fn invalid(path: &Path, message: impl Into<String>) -> InputError {
    InputError::Invalid { path: path.display().to_string(), message: message.into() }
}

/// Records of a comma-separated file as `(line, fields)`, skipping blank and `#` lines.
fn csv_records(path: &Path, text: &str) -> Result<Vec<(u64, Vec<String>)>, InputError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<String> = record.iter().map(str::to_string).collect();
        if fields.iter().all(String::is_empty) {
            continue;
        }
        out.push((line, fields));
    }
    Ok(out)
}

fn parse_f64(field: &str) -> Option<f64> {
    let v = match field.parse::<f64>() {
        Ok(v) => v,
        Err(_) => parse_rational(field)?.to_f64_lossy(),
    };
    v.is_finite().then_some(v)
}

fn looks_numeric(fields: &[String]) -> bool {
    fields.iter().all(|f| parse_f64(f).is_some())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonPoint {
    Pair([f64; 2]),
    Object { x: f64, y: f64 },
}

/// Points from CSV (`x,y` per line, optional header) or from a JSON array of
/// `[x, y]` pairs or `{"x": .., "y": ..}` objects.
pub fn read_points(path: &Path) -> Result<Vec<Point2>, InputError> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let parsed: Vec<JsonPoint> = serde_json::from_str(&text)
            .map_err(|e| parse_error(path, e.line() as u64, e.column(), e.to_string()))?;
        return Ok(parsed
            .into_iter()
            .map(|p| match p {
                JsonPoint::Pair([x, y]) | JsonPoint::Object { x, y } => Point2::new(x, y),
            })
            .collect());
    }
    let mut records = csv_records(path, &text)?;
    if records.first().is_some_and(|(_, f)| !looks_numeric(f)) {
        records.remove(0);
    }
    records
        .iter()
        .map(|(line, fields)| {
            if fields.len() != 2 {
                return Err(parse_error(path, *line, 1, format!("expected 2 coordinates, found {}", fields.len())));
            }
            let x = parse_f64(&fields[0]).ok_or_else(|| parse_error(path, *line, 1, format!("bad number {:?}", fields[0])))?;
            let y = parse_f64(&fields[1]).ok_or_else(|| parse_error(path, *line, 2, format!("bad number {:?}", fields[1])))?;
            Ok(Point2::new(x, y))
        })
        .collect()
}

/// Points grouped by the first column of `set,x,y` rows, in order of first appearance.
pub fn read_point_batch(path: &Path) -> Result<Vec<(String, Vec<Point2>)>, InputError> {
    let text = read(path)?;
    let mut records = csv_records(path, &text)?;
    if records.first().is_some_and(|(_, f)| f.len() == 3 && !looks_numeric(&f[1..])) {
        records.remove(0);
    }
    let mut sets: Vec<(String, Vec<Point2>)> = Vec::new();
    for (line, fields) in records {
        if fields.len() != 3 {
            return Err(parse_error(path, line, 1, format!("expected set,x,y, found {} fields", fields.len())));
        }
        let x = parse_f64(&fields[1]).ok_or_else(|| parse_error(path, line, 2, format!("bad number {:?}", fields[1])))?;
        let y = parse_f64(&fields[2]).ok_or_else(|| parse_error(path, line, 3, format!("bad number {:?}", fields[2])))?;
        match sets.iter_mut().find(|(name, _)| *name == fields[0]) {
            Some((_, pts)) => pts.push(Point2::new(x, y)),
            None => sets.push((fields[0].clone(), vec![Point2::new(x, y)])),
        }
    }
    Ok(sets)
}

/// Square distance matrix in CSV, with an optional first row of labels.
/// Entries may be decimals or fractions `p/q`; exact scalars keep them exactly.
pub fn read_matrix<T: Scalar>(path: &Path) -> Result<FiniteMetricSpace<T>, InputError> {
    let text = read(path)?;
    let mut records = csv_records(path, &text)?;
    let labels = match records.first() {
        Some((_, f)) if !looks_numeric(f) => Some(records.remove(0).1),
        _ => None,
    };
    let n = records.len();
    let mut matrix = Vec::with_capacity(n);
    for (line, fields) in &records {
        if fields.len() != n {
            return Err(parse_error(path, *line, 1, format!("row has {} entries, expected {n}", fields.len())));
        }
        let row = fields
            .iter()
            .enumerate()
            .map(|(c, f)| parse_scalar::<T>(f).ok_or_else(|| parse_error(path, *line, c + 1, format!("bad number {f:?}"))))
            .collect::<Result<Vec<T>, _>>()?;
        matrix.push(row);
    }
    let space = FiniteMetricSpace::new(matrix).map_err(|e| invalid(path, e.to_string()))?;
    match labels {
        Some(l) => space.with_labels(l).map_err(|e| invalid(path, e.to_string())),
        None => Ok(space),
    }
}

fn parse_scalar<T: Scalar>(field: &str) -> Option<T> {
    if T::EXACT {
        Some(T::from_rational(&parse_rational(field)?))
    } else {
        T::from_f64_exact(parse_f64(field)?)
    }
}

/// Graph file: a line `n=<vertices>` followed by `u,v,w` edge lines.
pub fn read_graph(path: &Path) -> Result<WeightedGraph<f64>, InputError> {
    let text = read(path)?;
    let mut n: Option<usize> = None;
    let mut triples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if n.is_none() {
            let value = line
                .strip_prefix("n=")
                .or_else(|| line.strip_prefix("n ="))
                .ok_or_else(|| parse_error(path, line_no, 1, "expected a vertex count line n=<count>"))?;
            n = Some(value.trim().parse().map_err(|_| parse_error(path, line_no, 3, format!("bad vertex count {value:?}")))?);
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(parse_error(path, line_no, 1, format!("expected u,v,w, found {} fields", fields.len())));
        }
        let u: usize = fields[0].parse().map_err(|_| parse_error(path, line_no, 1, format!("bad vertex {:?}", fields[0])))?;
        let v: usize = fields[1].parse().map_err(|_| parse_error(path, line_no, 2, format!("bad vertex {:?}", fields[1])))?;
        let w = parse_f64(fields[2]).ok_or_else(|| parse_error(path, line_no, 3, format!("bad weight {:?}", fields[2])))?;
        triples.push((u, v, w));
    }
    let n = n.ok_or_else(|| invalid(path, "missing vertex count line n=<count>"))?;
    WeightedGraph::from_triples(n, triples).map_err(|e| invalid(path, e.to_string()))
}

#[derive(Deserialize)]
struct TopologyFile {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    boundary: Option<Vec<usize>>,
}

/// Tree type as JSON `{"vertices": V, "edges": [[u, v], ...], "boundary": [...]}`.
/// Without `boundary`, vertices `0..points` are the boundary.
pub fn read_topology(path: &Path, points: usize) -> Result<TreeTopology, InputError> {
    let text = read(path)?;
    let file: TopologyFile =
        serde_json::from_str(&text).map_err(|e| parse_error(path, e.line() as u64, e.column(), e.to_string()))?;
    let boundary = file.boundary.unwrap_or_else(|| (0..points).collect());
    TreeTopology::new(file.vertices, file.edges, boundary).map_err(|e| invalid(path, e.to_string()))
}
