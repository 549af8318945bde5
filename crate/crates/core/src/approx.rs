//! The matching-based approximation for maximum edge 2-coloring.
//!
//! Every matched edge gets its own color, then every component of the graph
//! with the matching removed gets one further color for all of its edges.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, EdgeColoring};
use crate::graph::{Edge, Graph};
use crate::matching::{maximum_matching, Matching};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApproxError {
    #[error("matching does not belong to this graph")]
    ForeignMatching,
    #[error("matching is not maximal: edge {0} has both endpoints unmatched")]
    NotMaximal(Edge),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph needs at least 2 vertices, got {0}")]
    TooSmall(usize),
}

/// Result of one run of the matching-based algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgRun {
    pub matching: Matching,
    /// Components of `G \ M` that contain at least one edge.
    pub component_count: usize,
    pub coloring: EdgeColoring,
    pub alg_colors: usize,
}

/// Machine-readable summary of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub matching_size: usize,
    pub components: usize,
    pub alg_colors: usize,
}

impl AlgRun {
    pub fn report(&self, g: &Graph) -> RunReport {
        RunReport {
            n: g.vertex_count(),
            m: g.edge_count(),
            matching_size: self.matching.size(),
            components: self.component_count,
            alg_colors: self.alg_colors,
        }
    }
}

/// Colors `g` from a caller-chosen maximal matching. Matched edges get
/// colors `1..=|M|` in canonical order; edge-bearing components of `G \ M`
/// get `|M| + 1, |M| + 2, ...` ordered by their smallest vertex.
pub fn color_with_matching(g: &Graph, m: &Matching) -> Result<AlgRun, ApproxError> {
    if !m.belongs_to(g) {
        return Err(ApproxError::ForeignMatching);
    }
    if let Some(e) = g
        .edges()
        .iter()
        .find(|e| !m.covers(e.lo) && !m.covers(e.hi))
    {
        return Err(ApproxError::NotMaximal(*e));
    }

    let mut labels: Vec<Color> = vec![0; g.edge_count()];
    for (i, e) in m.edges().iter().enumerate() {
        labels[g.index_of(*e).expect("matched edge is in graph")] = i as Color + 1;
    }
    let components = g
        .components_after_removal(m.edges())
        .expect("matched edges are in graph");
    let mut comp_of = vec![0usize; g.vertex_count()];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    // Component index -> assigned color, only for components that own an edge.
    let mut comp_color: Vec<Option<Color>> = vec![None; components.len()];
    let mut next = m.size() as Color;
    for (ci, comp) in components.iter().enumerate() {
        let has_edge = comp
            .iter()
            .any(|&v| g.neighbors(v).iter().any(|&u| m.mate(v) != Some(u)));
        if has_edge {
            next += 1;
            comp_color[ci] = Some(next);
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        if labels[i] == 0 {
            labels[i] = comp_color[comp_of[e.lo]].expect("component owns this edge");
        }
    }

    let component_count = comp_color.iter().flatten().count();
    let coloring =
        EdgeColoring::from_labels(g, labels).expect("labels are contiguous by construction");
    Ok(AlgRun {
        matching: m.clone(),
        component_count,
        alg_colors: m.size() + component_count,
        coloring,
    })
}

/// Full pipeline on a connected graph: maximum matching, then coloring.
pub fn run_algorithm(g: &Graph) -> Result<AlgRun, ApproxError> {
    if g.vertex_count() < 2 {
        return Err(ApproxError::TooSmall(g.vertex_count()));
    }
    if !g.is_connected() {
        return Err(ApproxError::Disconnected);
    }
    color_with_matching(g, &maximum_matching(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::validate_coloring;

    #[test]
    fn k4_perfect_matching() {
        let g = Graph::complete(4);
        let m = Matching::new(&g, &[(0, 1), (2, 3)]).unwrap();
        let run = color_with_matching(&g, &m).unwrap();
        assert_eq!((run.component_count, run.alg_colors), (1, 3));
        assert!(validate_coloring(&g, &run.coloring).unwrap().is_valid());
        assert_eq!(run_algorithm(&g).unwrap().alg_colors, 3);
    }

    #[test]
    fn four_cycle() {
        let g = Graph::cycle(4);
        let m = Matching::new(&g, &[(0, 1), (2, 3)]).unwrap();
        let run = color_with_matching(&g, &m).unwrap();
        assert_eq!((run.component_count, run.alg_colors), (2, 4));
    }

    #[test]
    fn five_cycle() {
        // Any two disjoint edges of C5 leave a 1-edge and a 2-edge path.
        let run = run_algorithm(&Graph::cycle(5)).unwrap();
        assert_eq!(run.matching.size(), 2);
        assert_eq!(run.component_count, 2);
        assert_eq!(run.alg_colors, 4);
    }

    #[test]
    fn petersen_counts_components() {
        let g = Graph::petersen();
        let run = run_algorithm(&g).unwrap();
        let comps = g.components_after_removal(run.matching.edges()).unwrap();
        assert_eq!(run.matching.size(), 5);
        // Petersen minus a perfect matching is a 2-factor with no isolated vertex.
        assert_eq!(run.alg_colors, 5 + comps.len());
        assert!(validate_coloring(&g, &run.coloring).unwrap().is_valid());
    }

    #[test]
    fn isolated_leftovers_get_no_color() {
        // Star K_{1,3}: matching {0-1}; leaves 2,3 stay attached to 0.
        let g = Graph::star(3);
        let m = Matching::new(&g, &[(0, 1)]).unwrap();
        let run = color_with_matching(&g, &m).unwrap();
        assert_eq!(run.component_count, 1);
        assert_eq!(run.alg_colors, 2);
        assert_eq!(run.coloring.color_count(), 2);
    }

    #[test]
    fn rejects_non_maximal_and_foreign() {
        let g = Graph::path(4);
        let m = Matching::new(&g, &[(0, 1)]).unwrap();
        assert_eq!(
            color_with_matching(&g, &m),
            Err(ApproxError::NotMaximal(Edge::new(2, 3)))
        );
        let other = Graph::complete(4);
        let m = Matching::new(&other, &[(0, 2)]).unwrap();
        assert_eq!(
            color_with_matching(&g, &m),
            Err(ApproxError::ForeignMatching)
        );
    }

    #[test]
    fn entry_point_preconditions() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(run_algorithm(&g), Err(ApproxError::Disconnected));
        assert_eq!(
            run_algorithm(&Graph::empty(1)),
            Err(ApproxError::TooSmall(1))
        );
    }
}
