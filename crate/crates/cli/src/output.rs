//! JSON documents, SVG drawings and text formatting.

use std::fmt::Write as _;

use optnet::geometry::{PlaneNetwork, VertexKind};
use optnet::graph::{TreeTopology, WeightedTree};
use optnet::scalar::Scalar;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Rounds to 12 significant digits for text output.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

/// A scalar as JSON: a number for floating point, a `"p/q"` string for exact values.
pub fn scalar_json<T: Scalar>(x: &T) -> Value {
    if T::EXACT {
        Value::String(x.to_string())
    } else {
        float_json(x.to_f64_lossy())
    }
}

pub fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Planar network document shared by spanning and Steiner trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub length: f64,
    #[serde(default)]
    pub meta: Value,
}

impl NetworkJson {
    pub fn new(network: &PlaneNetwork, meta: Value) -> Self {
        let vertices = network
            .positions
            .iter()
            .enumerate()
            .map(|(id, p)| VertexJson { id, x: p.x, y: p.y, kind: network.kind(id) })
            .collect();
        let edges = network
            .topology
            .edges()
            .iter()
            .zip(network.edge_lengths())
            .map(|(&(u, v), weight)| EdgeJson { u, v, weight })
            .collect();
        Self { vertices, edges, length: network.length(), meta }
    }
}

pub fn topology_json(topology: &TreeTopology) -> Value {
    json!({
        "vertices": topology.vertex_count(),
        "edges": topology.edges(),
        "boundary": topology.boundary(),
    })
}

/// `{"topology", "weights", "value"}` for a weighted tree.
pub fn filling_json<T: Scalar>(tree: &WeightedTree<T>, value: &T) -> Value {
    json!({
        "topology": topology_json(&tree.topology),
        "weights": tree.weights.iter().map(scalar_json).collect::<Vec<_>>(),
        "value": scalar_json(value),
    })
}

const CANVAS: f64 = 1000.0;
const MARGIN: f64 = 50.0;

/// Fixed 1000x1000 drawing: black edges of width 2, terminals as filled
/// circles and Steiner points as open circles.
pub fn network_svg(network: &PlaneNetwork) -> String {
    let pos = &network.positions;
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pos {
        lo_x = lo_x.min(p.x);
        lo_y = lo_y.min(p.y);
        hi_x = hi_x.max(p.x);
        hi_y = hi_y.max(p.y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y);
    let inner = CANVAS - 2.0 * MARGIN;
    let scale = if span > 0.0 { inner / span } else { 1.0 };
    let off_x = MARGIN + (inner - (hi_x - lo_x) * scale) / 2.0;
    let off_y = MARGIN + (inner - (hi_y - lo_y) * scale) / 2.0;
    let map = |i: usize| {
        let p = pos[i];
        (off_x + (p.x - lo_x) * scale, CANVAS - (off_y + (p.y - lo_y) * scale))
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n");
    let _ = writeln!(out, "<!-- optnet {} -->", env!("CARGO_PKG_VERSION"));
    out.push_str("<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
    out.push_str("<g stroke=\"black\" stroke-width=\"2\">\n");
    for &(u, v) in network.topology.edges() {
        let ((x1, y1), (x2, y2)) = (map(u), map(v));
        let _ = writeln!(out, "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>");
    }
    out.push_str("</g>\n");
    for i in 0..pos.len() {
        let (x, y) = map(i);
        match network.kind(i) {
            VertexKind::Terminal => {
                let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"6\" fill=\"black\"/>");
            }
            VertexKind::Steiner => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"6\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>"
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use optnet::geometry::Point2;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(3f64.sqrt()), "1.73205080757");
        assert_eq!(sig12(2.0), "2");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-1234.5678901234567), "-1234.56789012");
    }

    #[test]
    fn svg_is_deterministic() {
        let net = PlaneNetwork::segment(Point2::new(0.0, 0.0), Point2::new(2.0, 1.0));
        let a = network_svg(&net);
        assert_eq!(a, network_svg(&net));
        assert!(a.contains("x1=\"50.00\" y1=\"725.00\" x2=\"950.00\" y2=\"275.00\""));
    }
}
