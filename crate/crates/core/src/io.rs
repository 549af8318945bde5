//! Plain-text formats.
//!
//! Edge list: a header line `n m`, then `m` lines `u v`. Coloring: one line
//! `u v c` per edge. Matching: one line `u v` per matched edge. Lines
//! starting with `#` and blank lines are skipped. Readers accept `u > v`;
//! writers always emit canonical order, so written files round-trip exactly.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::coloring::{Color, ColoringError, EdgeColoring};
use crate::graph::{Edge, Graph, GraphError, Vertex};
use crate::matching::{Matching, MatchingError};

/// Largest vertex count a reader accepts.
pub const MAX_VERTICES: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing header line")]
    MissingHeader,
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("invalid number {0:?}")]
    BadNumber(String),
    #[error("vertex count {0} exceeds the limit")]
    TooManyVertices(usize),
    #[error("header declares {declared} edges but {found} follow")]
    EdgeCount { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// A parse failure. `line` is 1-based; 0 marks a whole-file problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "line {}: {}", self.line, self.kind)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, kind: impl Into<ParseErrorKind>) -> ParseError {
    ParseError {
        line,
        kind: kind.into(),
    }
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some((i + 1, l.split_whitespace().collect()))
        }
    })
}

fn numbers<const K: usize>(line: usize, fields: &[&str]) -> Result<[usize; K], ParseError> {
    if fields.len() != K {
        return Err(err(
            line,
            ParseErrorKind::FieldCount {
                expected: K,
                found: fields.len(),
            },
        ));
    }
    let mut out = [0; K];
    for (slot, tok) in out.iter_mut().zip(fields) {
        *slot = tok
            .parse()
            .map_err(|_| err(line, ParseErrorKind::BadNumber((*tok).to_owned())))?;
    }
    Ok(out)
}

fn pair_in_range(line: usize, n: usize, u: usize, v: usize) -> Result<Edge, ParseError> {
    for vertex in [u, v] {
        if vertex >= n {
            return Err(err(line, GraphError::VertexOutOfRange { vertex, n }));
        }
    }
    if u == v {
        return Err(err(line, GraphError::SelfLoop(u)));
    }
    Ok(Edge::new(u, v))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut recs = records(text);
    let (hline, header) = recs.next().ok_or(err(0, ParseErrorKind::MissingHeader))?;
    let [n, m] = numbers::<2>(hline, &header)?;
    if n > MAX_VERTICES {
        return Err(err(hline, ParseErrorKind::TooManyVertices(n)));
    }
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    for (line, fields) in recs {
        let [u, v] = numbers::<2>(line, &fields)?;
        let e = pair_in_range(line, n, u, v)?;
        if !seen.insert(e) {
            return Err(err(line, GraphError::DuplicateEdge(e)));
        }
        pairs.push((e.lo, e.hi));
    }
    if pairs.len() != m {
        return Err(err(
            0,
            ParseErrorKind::EdgeCount {
                declared: m,
                found: pairs.len(),
            },
        ));
    }
    Graph::new(n, &pairs).map_err(|e| err(0, e))
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        writeln!(out, "{} {}", e.lo, e.hi).unwrap();
    }
    out
}

/// Raw `(u, v, c)` records, checked only for shape.
pub fn parse_coloring_records(
    text: &str,
) -> Result<Vec<(usize, Vertex, Vertex, Color)>, ParseError> {
    records(text)
        .map(|(line, fields)| {
            let [u, v, c] = numbers::<3>(line, &fields)?;
            let c = Color::try_from(c)
                .map_err(|_| err(line, ParseErrorKind::BadNumber(fields[2].to_owned())))?;
            Ok((line, u, v, c))
        })
        .collect()
}

pub fn parse_coloring(text: &str, g: &Graph) -> Result<EdgeColoring, ParseError> {
    let recs = parse_coloring_records(text)?;
    let mut colored = HashSet::new();
    let mut triples = Vec::with_capacity(recs.len());
    for (line, u, v, c) in recs {
        let e = pair_in_range(line, g.vertex_count(), u, v)?;
        if g.index_of(e).is_none() {
            return Err(err(line, ColoringError::NotAnEdge(e)));
        }
        if c == 0 {
            return Err(err(line, ColoringError::ZeroLabel));
        }
        if !colored.insert(e) {
            return Err(err(line, ColoringError::ColoredTwice(e)));
        }
        triples.push((e.lo, e.hi, c));
    }
    EdgeColoring::from_triples(g, &triples).map_err(|e| err(0, e))
}

pub fn write_coloring(g: &Graph, c: &EdgeColoring) -> String {
    let mut out = String::new();
    for (u, v, col) in c.triples(g) {
        writeln!(out, "{u} {v} {col}").unwrap();
    }
    out
}

pub fn parse_matching_records(text: &str) -> Result<Vec<(usize, Vertex, Vertex)>, ParseError> {
    records(text)
        .map(|(line, fields)| {
            let [u, v] = numbers::<2>(line, &fields)?;
            Ok((line, u, v))
        })
        .collect()
}

pub fn parse_matching(text: &str, g: &Graph) -> Result<Matching, ParseError> {
    let recs = parse_matching_records(text)?;
    let mut covered = HashSet::new();
    let mut pairs = Vec::with_capacity(recs.len());
    for (line, u, v) in recs {
        let e = pair_in_range(line, g.vertex_count(), u, v)?;
        if g.index_of(e).is_none() {
            return Err(err(line, MatchingError::NotAnEdge(e)));
        }
        for x in [e.lo, e.hi] {
            if !covered.insert(x) {
                return Err(err(line, MatchingError::SharedVertex(x)));
            }
        }
        pairs.push((e.lo, e.hi));
    }
    Matching::new(g, &pairs).map_err(|e| err(0, e))
}

pub fn write_matching(m: &Matching) -> String {
    let mut out = String::new();
    for e in m.edges() {
        writeln!(out, "{} {}", e.lo, e.hi).unwrap();
    }
    out
}
