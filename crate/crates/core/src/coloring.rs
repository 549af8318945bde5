//! Edge colorings and the at-most-two-colors-per-vertex constraint.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};

pub type Color = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring covers {got} edges but the graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("edge {0} has no color")]
    Uncolored(Edge),
    #[error("edge {0} is colored more than once")]
    ColoredTwice(Edge),
    #[error("colored pair {0} is not an edge of the graph")]
    NotAnEdge(Edge),
    #[error("colored pair ({0}, {0}) is a self-loop")]
    SelfLoop(Vertex),
    #[error("color labels are not contiguous 1..={max}: label {missing} unused")]
    NonContiguous { max: Color, missing: Color },
    #[error("color label 0 is reserved")]
    ZeroLabel,
}

/// A total edge → color map whose labels are exactly `1..=color_count`.
///
/// Labels are indexed by the graph's canonical edge index. Whether the
/// coloring respects the per-vertex constraint is checked separately by
/// [`validate_coloring`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    labels: Vec<Color>,
    color_count: usize,
}

impl EdgeColoring {
    /// Takes labels that are already contiguous `1..=c`.
    pub fn from_labels(g: &Graph, labels: Vec<Color>) -> Result<Self, ColoringError> {
        if labels.len() != g.edge_count() {
            return Err(ColoringError::LengthMismatch {
                expected: g.edge_count(),
                got: labels.len(),
            });
        }
        if labels.contains(&0) {
            return Err(ColoringError::ZeroLabel);
        }
        let max = labels.iter().copied().max().unwrap_or(0);
        let mut used = vec![false; max as usize + 1];
        for &c in &labels {
            used[c as usize] = true;
        }
        if let Some(missing) = (1..=max).find(|&c| !used[c as usize]) {
            return Err(ColoringError::NonContiguous { max, missing });
        }
        Ok(EdgeColoring {
            labels,
            color_count: max as usize,
        })
    }

    /// Relabels arbitrary labels to `1..=c` in order of first appearance
    /// along the canonical edge order.
    pub fn normalized(g: &Graph, labels: &[Color]) -> Result<Self, ColoringError> {
        if labels.len() != g.edge_count() {
            return Err(ColoringError::LengthMismatch {
                expected: g.edge_count(),
                got: labels.len(),
            });
        }
        let mut map = HashMap::new();
        let relabeled = labels
            .iter()
            .map(|c| {
                let next = map.len() as Color + 1;
                *map.entry(*c).or_insert(next)
            })
            .collect();
        Ok(EdgeColoring {
            labels: relabeled,
            color_count: map.len(),
        })
    }

    /// Builds a coloring from `(u, v, color)` triples; every edge must be
    /// colored exactly once. The result is normalized.
    pub fn from_triples(
        g: &Graph,
        triples: &[(Vertex, Vertex, Color)],
    ) -> Result<Self, ColoringError> {
        let mut labels: Vec<Option<Color>> = vec![None; g.edge_count()];
        for &(u, v, c) in triples {
            if u == v {
                return Err(ColoringError::SelfLoop(u));
            }
            let e = Edge::new(u, v);
            let idx = g.index_of(e).ok_or(ColoringError::NotAnEdge(e))?;
            if labels[idx].replace(c).is_some() {
                return Err(ColoringError::ColoredTwice(e));
            }
        }
        let labels = labels
            .iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(ColoringError::Uncolored(g.edge(i))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::normalized(g, &labels)
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    pub fn labels(&self) -> &[Color] {
        &self.labels
    }

    pub fn color(&self, edge_idx: usize) -> Color {
        self.labels[edge_idx]
    }

    /// Color of the edge `uv`, if it is an edge of `g`.
    pub fn color_of(&self, g: &Graph, u: Vertex, v: Vertex) -> Option<Color> {
        g.edge_index(u, v).map(|i| self.labels[i])
    }

    /// Distinct colors on edges incident to `v`, sorted.
    pub fn palette(&self, g: &Graph, v: Vertex) -> Vec<Color> {
        let mut p: Vec<Color> = g.incident_edges(v).map(|i| self.labels[i]).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    /// Edge indices per color; entry `c - 1` holds class `c`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.color_count];
        for (i, &c) in self.labels.iter().enumerate() {
            out[c as usize - 1].push(i);
        }
        out
    }

    /// Merges class `b` into class `a` and renormalizes.
    pub fn merge(&self, g: &Graph, a: Color, b: Color) -> Self {
        let merged: Vec<Color> = self
            .labels
            .iter()
            .map(|&c| if c == b { a } else { c })
            .collect();
        Self::normalized(g, &merged).expect("length unchanged")
    }

    /// `(u, v, color)` triples in canonical edge order.
    pub fn triples<'a>(
        &'a self,
        g: &'a Graph,
    ) -> impl Iterator<Item = (Vertex, Vertex, Color)> + 'a {
        g.edges()
            .iter()
            .zip(&self.labels)
            .map(|(e, &c)| (e.lo, e.hi, c))
    }
}

/// Outcome of checking the per-vertex constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Validity {
    Valid,
    /// First vertex (by index) that sees more than two colors.
    Violation {
        vertex: Vertex,
        palette: Vec<Color>,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

pub fn validate_coloring(g: &Graph, coloring: &EdgeColoring) -> Result<Validity, ColoringError> {
    if coloring.labels.len() != g.edge_count() {
        return Err(ColoringError::LengthMismatch {
            expected: g.edge_count(),
            got: coloring.labels.len(),
        });
    }
    for v in 0..g.vertex_count() {
        let palette = coloring.palette(g, v);
        if palette.len() > 2 {
            return Ok(Validity::Violation { vertex: v, palette });
        }
    }
    Ok(Validity::Valid)
}
