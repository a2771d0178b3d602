//! Frame CSV and graph edge-list formats.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::graphs::WeightedGraph;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Comma-separated rows; row `r`, column `c` holds coordinate `r` of vector
/// `c`. Blank lines are skipped.
pub fn parse_frame_str(text: &str) -> Result<Frame> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let row = raw
            .split(',')
            .enumerate()
            .map(|(c, tok)| {
                let tok = tok.trim();
                match tok.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(parse_error(line, format!("column {}: '{tok}' is not a finite number", c + 1))),
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_error(
                    line,
                    format!("expected {} columns (as on line {first_line}), found {}", first.len(), row.len()),
                ));
            }
        } else {
            first_line = line;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(0, "no data rows"));
    }
    let (n, m) = (rows.len(), rows[0].len());
    let matrix = DMatrix::from_fn(n, m, |r, c| rows[r][c]);
    Frame::new(matrix).map_err(|e| match e {
        Error::ZeroVector { index } => parse_error(first_line, format!("column {} is the zero vector", index + 1)),
        other => other,
    })
}

pub fn parse_frame_file(path: &Path) -> Result<Frame> {
    parse_frame_str(&read(path)?)
}

/// Whitespace-separated `u v [w]` lines with 0-based vertices; `#` starts a
/// comment; an optional `n N` line fixes the vertex count.
pub fn parse_graph_str(text: &str) -> Result<WeightedGraph> {
    let mut header: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens[0] == "n" {
            if tokens.len() != 2 || header.is_some() {
                return Err(parse_error(line, "header must be a single 'n N' line"));
            }
            let n = tokens[1]
                .parse::<usize>()
                .map_err(|_| parse_error(line, format!("bad vertex count '{}'", tokens[1])))?;
            header = Some(n);
            continue;
        }
        if !(2..=3).contains(&tokens.len()) {
            return Err(parse_error(line, format!("expected 'u v [w]', found {} fields", tokens.len())));
        }
        let vertex = |t: &str| t.parse::<usize>().map_err(|_| parse_error(line, format!("bad vertex index '{t}'")));
        let u = vertex(tokens[0])?;
        let v = vertex(tokens[1])?;
        let w = match tokens.get(2) {
            Some(t) => t.parse::<f64>().map_err(|_| parse_error(line, format!("bad weight '{t}'")))?,
            None => 1.0,
        };
        if u == v {
            return Err(parse_error(line, format!("self-loop at vertex {u}")));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(parse_error(line, format!("nonpositive weight {w}")));
        }
        let key = (u.min(v), u.max(v));
        if let Some(prev) = edges.iter().find(|e| (e.0.min(e.1), e.0.max(e.1)) == key) {
            return Err(parse_error(
                line,
                format!("duplicate edge ({}, {}) first seen on line {}", key.0, key.1, prev.3),
            ));
        }
        edges.push((u, v, w, line));
    }
    let max_index = edges.iter().map(|e| e.0.max(e.1)).max();
    let n = match (header, max_index) {
        (Some(n), Some(mx)) if mx >= n => {
            let line = edges.iter().find(|e| e.0.max(e.1) == mx).map_or(0, |e| e.3);
            return Err(parse_error(line, format!("vertex {mx} exceeds header count {n}")));
        }
        (Some(n), _) => n,
        (None, Some(mx)) => mx + 1,
        (None, None) => return Err(parse_error(0, "no edges")),
    };
    WeightedGraph::new(n, edges.into_iter().map(|(u, v, w, _)| (u, v, w)))
}

pub fn parse_graph_file(path: &Path) -> Result<WeightedGraph> {
    parse_graph_str(&read(path)?)
}

/// Edge list with an `n N` header; weights use the shortest round-trip
/// decimal form.
pub fn format_graph(graph: &WeightedGraph) -> String {
    let mut out = format!("n {}\n", graph.vertex_count());
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.weight).unwrap();
    }
    out
}

/// Graphviz text: vertices labeled by index, each edge with its weight and
/// a pen width mapped linearly from the weight range onto `[0.5, 4.0]`.
pub fn format_dot(graph: &WeightedGraph, weights: &[f64]) -> Result<String> {
    if weights.len() != graph.edge_count() {
        return Err(Error::DimensionMismatch { expected: graph.edge_count(), found: weights.len() });
    }
    const MIN_WIDTH: f64 = 0.5;
    const MAX_WIDTH: f64 = 4.0;
    let lo = weights.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // weights equal up to roundoff count as uniform
    let spread = hi - lo > 1e-9 * hi.abs();
    let mut out = String::from("graph G {\n");
    for v in 0..graph.vertex_count() {
        writeln!(out, "  {v} [label=\"{v}\"];").unwrap();
    }
    for (e, &w) in graph.edges().iter().zip(weights) {
        let width = if spread {
            MIN_WIDTH + (MAX_WIDTH - MIN_WIDTH) * (w - lo) / (hi - lo)
        } else {
            (MIN_WIDTH + MAX_WIDTH) / 2.0
        };
        writeln!(out, "  {} -- {} [weight={:.6}, penwidth={:.4}];", e.u, e.v, w, width).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
