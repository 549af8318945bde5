//! Characteristic subgraphs and the counting diagnostics built on them.
//!
//! A characteristic subgraph picks one edge of every color class. Because
//! every vertex sees at most two colors it has maximum degree two, and on
//! graphs with minimum degree at least three it can be rewired into a
//! disjoint union of paths. The diagnostics count vertices by their degree
//! in that subgraph and check the inequalities the approximation bounds
//! rest on, all in exact integer or rational arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{run_algorithm, ApproxError};
use crate::coloring::{validate_coloring, Color, ColoringError, EdgeColoring, Validity};
use crate::exact::{exact_opt, OptStatus};
use crate::graph::{Edge, Graph, Vertex};
use crate::matching::{is_perfect, maximum_matching, Matching};
use crate::rational::{self, frac, int, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("minimum degree {0} is below 3")]
    MinDegreeTooSmall(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("coloring is not a valid edge 2-coloring: vertex {vertex} sees colors {palette:?}")]
    InvalidColoring { vertex: Vertex, palette: Vec<Color> },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("matching does not belong to this graph")]
    ForeignMatching,
    #[error("matching has {given} edges but a maximum matching has {maximum}")]
    NotMaximum { given: usize, maximum: usize },
    #[error("characteristic subgraph contains a cycle")]
    NotPathUnion,
    #[error("asserted inequality failed: {}", .0.failed_assertions().join(", "))]
    Violation(Box<DiagnosticsReport>),
}

/// One edge per color, maximum degree at most two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicSubgraph {
    /// Entry `c - 1` is the index of the chosen edge of color `c`.
    edge_of_color: Vec<usize>,
    degree: Vec<u8>,
    /// Path components, oriented from the lower-index terminal.
    paths: Vec<Vec<Vertex>>,
    /// Cycle components, starting at their smallest vertex.
    cycles: Vec<Vec<Vertex>>,
    /// Cycle-breaking swaps applied during construction.
    pub cycle_swaps: usize,
}

impl CharacteristicSubgraph {
    fn from_choice(g: &Graph, edge_of_color: Vec<usize>) -> Self {
        let n = g.vertex_count();
        let mut nbrs: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &i in &edge_of_color {
            let e = g.edge(i);
            nbrs[e.lo].push(e.hi);
            nbrs[e.hi].push(e.lo);
        }
        for l in &mut nbrs {
            l.sort_unstable();
        }
        let degree: Vec<u8> = nbrs.iter().map(|l| l.len() as u8).collect();
        assert!(
            degree.iter().all(|&d| d <= 2),
            "characteristic subgraph has degree above 2"
        );

        let mut seen = vec![false; n];
        let walk = |start: Vertex, seen: &mut Vec<bool>| {
            let mut seq = vec![start];
            seen[start] = true;
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next = nbrs[cur].iter().copied().find(|&x| x != prev && !seen[x]);
                match next {
                    Some(x) => {
                        seen[x] = true;
                        seq.push(x);
                        prev = cur;
                        cur = x;
                    }
                    None => break,
                }
            }
            seq
        };
        let mut paths = Vec::new();
        for v in 0..n {
            if degree[v] == 1 && !seen[v] {
                paths.push(walk(v, &mut seen));
            }
        }
        let mut cycles = Vec::new();
        for v in 0..n {
            if degree[v] == 2 && !seen[v] {
                cycles.push(walk(v, &mut seen));
            }
        }
        CharacteristicSubgraph {
            edge_of_color,
            degree,
            paths,
            cycles,
            cycle_swaps: 0,
        }
    }

    pub fn color_count(&self) -> usize {
        self.edge_of_color.len()
    }

    /// Edge index chosen for color `c`.
    pub fn edge_for_color(&self, c: Color) -> usize {
        self.edge_of_color[c as usize - 1]
    }

    pub fn edge_indices(&self) -> &[usize] {
        &self.edge_of_color
    }

    /// Chosen edges, sorted canonically.
    pub fn edges(&self, g: &Graph) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.edge_of_color.iter().map(|&i| g.edge(i)).collect();
        out.sort_unstable();
        out
    }

    pub fn contains(&self, edge_idx: usize) -> bool {
        self.edge_of_color.contains(&edge_idx)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.degree[v] as usize
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn paths(&self) -> &[Vec<Vertex>] {
        &self.paths
    }

    pub fn cycles(&self) -> &[Vec<Vertex>] {
        &self.cycles
    }

    pub fn is_path_union(&self) -> bool {
        self.cycles.is_empty()
    }

    /// `(n0, n1, n2)`: vertices of degree 0, 1 and 2 in the subgraph.
    pub fn degree_counts(&self) -> (usize, usize, usize) {
        let mut c = [0usize; 3];
        for &d in &self.degree {
            c[d as usize] += 1;
        }
        (c[0], c[1], c[2])
    }

    /// Terminal vertices of the characteristic paths.
    pub fn terminals(&self) -> Vec<Vertex> {
        (0..self.degree.len())
            .filter(|&v| self.degree[v] == 1)
            .collect()
    }

    /// Vertices touched by no chosen edge.
    pub fn uncovered(&self) -> Vec<Vertex> {
        (0..self.degree.len())
            .filter(|&v| self.degree[v] == 0)
            .collect()
    }

    /// Number of edges on the path through `v`, or 0 for uncovered vertices.
    fn path_len_through(&self, v: Vertex) -> usize {
        self.paths
            .iter()
            .find(|p| p.contains(&v))
            .map(|p| p.len() - 1)
            .unwrap_or(0)
    }

    fn replace(&self, g: &Graph, color: Color, new_edge: usize) -> Self {
        let mut choice = self.edge_of_color.clone();
        choice[color as usize - 1] = new_edge;
        let mut out = Self::from_choice(g, choice);
        out.cycle_swaps = self.cycle_swaps;
        out
    }

    pub fn report(&self, g: &Graph) -> CharacteristicReport {
        let (n0, n1, n2) = self.degree_counts();
        let mut edges: Vec<(Vertex, Vertex, Color)> = self
            .edge_of_color
            .iter()
            .enumerate()
            .map(|(c, &i)| {
                let e = g.edge(i);
                (e.lo, e.hi, c as Color + 1)
            })
            .collect();
        edges.sort_unstable();
        CharacteristicReport {
            colors: self.color_count(),
            edges,
            paths: self.paths.clone(),
            n0,
            n1,
            n2,
            cycle_swaps: self.cycle_swaps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicReport {
    pub colors: usize,
    /// `(u, v, color)` per chosen edge.
    pub edges: Vec<(Vertex, Vertex, Color)>,
    pub paths: Vec<Vec<Vertex>>,
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub cycle_swaps: usize,
}

fn require_valid(g: &Graph, coloring: &EdgeColoring) -> Result<(), AnalysisError> {
    match validate_coloring(g, coloring)? {
        Validity::Valid => Ok(()),
        Validity::Violation { vertex, palette } => {
            Err(AnalysisError::InvalidColoring { vertex, palette })
        }
    }
}

fn require_min_degree(g: &Graph) -> Result<usize, AnalysisError> {
    let delta = g.min_degree();
    if delta < 3 {
        return Err(AnalysisError::MinDegreeTooSmall(delta));
    }
    Ok(delta)
}

/// Picks the lowest edge of each color class, then breaks cycles: on a
/// cycle vertex `u` with cycle neighbors `v, w` and a third neighbor `z`,
/// the edge `uz` carries the color of `uv` or of `uw`, and swapping that
/// cycle edge for `uz` removes the cycle without creating another.
pub fn characteristic_subgraph(
    g: &Graph,
    coloring: &EdgeColoring,
) -> Result<CharacteristicSubgraph, AnalysisError> {
    require_min_degree(g)?;
    require_valid(g, coloring)?;

    let choice = coloring
        .classes()
        .into_iter()
        .map(|class| class[0])
        .collect();
    let mut chi = CharacteristicSubgraph::from_choice(g, choice);

    while let Some(cycle) = chi.cycles.first().cloned() {
        let before = chi.cycles.len();
        let on_cycle = |x: Vertex| cycle.contains(&x);
        let mut ordered = cycle.clone();
        ordered.sort_unstable();

        // Prefer a neighbor outside the subgraph; any non-cycle neighbor works.
        let pick = ordered
            .iter()
            .find_map(|&u| {
                g.neighbors(u)
                    .iter()
                    .find(|&&z| chi.degree(z) == 0)
                    .map(|&z| (u, z))
            })
            .or_else(|| {
                let u = ordered[0];
                g.neighbors(u)
                    .iter()
                    .find(|&&z| !on_cycle(z) || !chi.contains(g.edge_index(u, z).unwrap()))
                    .map(|&z| (u, z))
            })
            .expect("minimum degree 3 gives every cycle vertex a third neighbor");
        let (u, z) = pick;
        let uz = g.edge_index(u, z).expect("neighbor edge");
        let color = coloring.color(uz);
        chi = chi.replace(g, color, uz);
        chi.cycle_swaps += 1;
        debug_assert!(chi.cycles.len() < before);
    }
    Ok(chi)
}

/// Applies path-count-increasing swaps until none applies. For a color `a`
/// whose chosen edge `uv` lies on a path with at least two edges:
/// replace `uv` by an `a`-colored edge joining two uncovered vertices, or,
/// when `u` is internal and `w` is uncovered with `uvw` an `a`-colored
/// triangle, replace `uv` by `vw`.
pub fn saturate_path_swaps(
    g: &Graph,
    chi: &CharacteristicSubgraph,
    coloring: &EdgeColoring,
) -> Result<CharacteristicSubgraph, AnalysisError> {
    if !chi.is_path_union() {
        return Err(AnalysisError::NotPathUnion);
    }
    let classes = coloring.classes();
    let mut chi = chi.clone();
    while let Some((color, edge)) = find_path_swap(g, &chi, coloring, &classes) {
        let before = chi.paths.len();
        chi = chi.replace(g, color, edge);
        debug_assert!(chi.paths.len() > before && chi.is_path_union());
    }
    Ok(chi)
}

fn find_path_swap(
    g: &Graph,
    chi: &CharacteristicSubgraph,
    coloring: &EdgeColoring,
    classes: &[Vec<usize>],
) -> Option<(Color, usize)> {
    for (ci, class) in classes.iter().enumerate() {
        let color = ci as Color + 1;
        let uv = g.edge(chi.edge_for_color(color));
        if chi.path_len_through(uv.lo) < 2 {
            continue;
        }
        if let Some(&xy) = class.iter().find(|&&i| {
            let e = g.edge(i);
            chi.degree(e.lo) == 0 && chi.degree(e.hi) == 0
        }) {
            return Some((color, xy));
        }
        for (inner, outer) in [(uv.lo, uv.hi), (uv.hi, uv.lo)] {
            if chi.degree(inner) != 2 {
                continue;
            }
            let apex = g.neighbors(inner).iter().copied().find(|&w| {
                chi.degree(w) == 0
                    && coloring.color_of(g, inner, w) == Some(color)
                    && coloring.color_of(g, outer, w) == Some(color)
            });
            if let Some(w) = apex {
                return Some((color, g.edge_index(outer, w).expect("triangle edge")));
            }
        }
    }
    None
}

/// Relation between the two sides of a recorded check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    #[serde(with = "rational::pair")]
    pub lhs: Rational,
    pub relation: Relation,
    #[serde(with = "rational::pair")]
    pub rhs: Rational,
    pub holds: bool,
    /// Asserted checks are hard failures when they do not hold; the rest
    /// are reported only.
    pub asserted: bool,
    /// Holds with equality.
    pub tight: bool,
}

impl InequalityCheck {
    fn new(name: &str, lhs: Rational, relation: Relation, rhs: Rational, asserted: bool) -> Self {
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        };
        InequalityCheck {
            name: name.to_owned(),
            lhs,
            relation,
            rhs,
            holds,
            asserted,
            tight: lhs == rhs,
        }
    }

    /// Recomputes `holds` from the stored sides.
    pub fn recheck(&self) -> bool {
        match self.relation {
            Relation::Le => self.lhs <= self.rhs,
            Relation::Eq => self.lhs == self.rhs,
        }
    }

    pub fn failed_hard(&self) -> bool {
        self.asserted && !self.holds
    }
}

/// Approximation factors evaluated for one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFactors {
    /// `1 + 2/δ`
    #[serde(with = "rational::pair")]
    pub perfect: Rational,
    /// `1 + 1/(δ-1)`
    #[serde(with = "rational::pair")]
    pub triangle_free: Rational,
    /// `1 + (κ+2)/(δ-1)`
    #[serde(with = "rational::pair")]
    pub general: Rational,
    /// `1 + (κ+2)/(δ-2)`
    #[serde(with = "rational::pair")]
    pub general_stated: Rational,
    /// `2(Δ+δ)/δ`, an upper bound on κ.
    #[serde(with = "rational::pair")]
    pub kappa_cap: Rational,
    /// `1 + (2(Δ+δ)/δ + 2)/(δ-1)`; equals `1 + 6/(d-1)` on d-regular graphs.
    #[serde(with = "rational::pair")]
    pub degree_only: Rational,
}

impl BoundFactors {
    fn new(delta: usize, max_degree: usize, kappa: Rational) -> Self {
        let kappa_cap = frac(2 * (max_degree + delta), delta);
        let one = int(1);
        BoundFactors {
            perfect: one + frac(2, delta),
            triangle_free: one + frac(1, delta - 1),
            general: one + (kappa + int(2)) / int(delta - 1),
            general_stated: one + (kappa + int(2)) / int(delta - 2),
            degree_only: one + (kappa_cap + int(2)) / int(delta - 1),
            kappa_cap,
        }
    }
}

/// Counting quantities and checked inequalities for one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub max_degree: usize,
    pub matching_size: usize,
    /// `n / |M|`, exact.
    #[serde(with = "rational::pair")]
    pub kappa: Rational,
    pub perfect_matching: bool,
    pub triangle_free: bool,
    /// `δ ≥ ⌊n/2⌋`
    pub dirac: bool,
    pub colors: Option<usize>,
    pub n0: Option<usize>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub paths: Option<usize>,
    /// Edges of the alternate-edge matching taken from the paths.
    pub selected: Option<usize>,
    /// Unselected path edges.
    pub t: Option<usize>,
    pub h0: Option<usize>,
    pub h1: Option<usize>,
    pub h2: Option<usize>,
    pub bounds: BoundFactors,
    pub checks: Vec<InequalityCheck>,
}

impl DiagnosticsReport {
    pub fn failed_assertions(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.failed_hard())
            .map(|c| c.name.clone())
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(
        &mut self,
        name: &str,
        lhs: Rational,
        relation: Relation,
        rhs: Rational,
        asserted: bool,
    ) {
        self.checks
            .push(InequalityCheck::new(name, lhs, relation, rhs, asserted));
    }

    fn into_result(self) -> Result<Self, AnalysisError> {
        if self.checks.iter().any(InequalityCheck::failed_hard) {
            Err(AnalysisError::Violation(Box::new(self)))
        } else {
            Ok(self)
        }
    }
}

fn base_report(g: &Graph, matching: &Matching) -> DiagnosticsReport {
    let n = g.vertex_count();
    let delta = g.min_degree();
    let max_degree = g.max_degree();
    let kappa = Rational::new(n as i64, matching.size().max(1) as i64);
    DiagnosticsReport {
        n,
        m: g.edge_count(),
        delta,
        max_degree,
        matching_size: matching.size(),
        kappa,
        perfect_matching: is_perfect(g, matching),
        triangle_free: g.is_triangle_free(),
        dirac: delta >= n / 2,
        colors: None,
        n0: None,
        n1: None,
        n2: None,
        paths: None,
        selected: None,
        t: None,
        h0: None,
        h1: None,
        h2: None,
        bounds: BoundFactors::new(delta, max_degree, kappa),
        checks: Vec::new(),
    }
}

/// Records the degree-class counts of `chi` and every check that holds for
/// an arbitrary path-union characteristic subgraph.
fn record_degree_classes(
    g: &Graph,
    coloring: &EdgeColoring,
    chi: &CharacteristicSubgraph,
    r: &mut DiagnosticsReport,
) {
    use Relation::{Eq, Le};
    let n = g.vertex_count();
    let delta = r.delta;
    let (n0, n1, n2) = chi.degree_counts();
    let c = chi.color_count();
    r.colors = Some(c);
    r.n0 = Some(n0);
    r.n1 = Some(n1);
    r.n2 = Some(n2);
    r.paths = Some(chi.paths().len());

    r.push(
        "one_edge_per_color",
        int(chi.edge_indices().len()),
        Eq,
        int(coloring.color_count()),
        true,
    );
    r.push("chi_max_degree", int(chi.max_degree()), Le, int(2), true);
    r.push("chi_cycles", int(chi.cycles().len()), Eq, int(0), true);
    r.push(
        "degree_classes_partition",
        int(n0 + n1 + n2),
        Eq,
        int(n),
        true,
    );
    r.push(
        "colors_from_degrees",
        int(c),
        Eq,
        frac(2 * n2 + n1, 2),
        true,
    );

    // Non-chi edges between two degree-2 vertices cannot be colored.
    let n2_pairs = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, e)| !chi.contains(*i) && chi.degree(e.lo) == 2 && chi.degree(e.hi) == 2)
        .count();
    r.push("no_edge_between_degree2", int(n2_pairs), Eq, int(0), true);

    // Proof graph H: all non-chi edges leaving degree-2 vertices.
    let mut h_degree = vec![0usize; n];
    let mut h_edges = 0;
    for (i, e) in g.edges().iter().enumerate() {
        if chi.contains(i) {
            continue;
        }
        for (a, b) in [(e.lo, e.hi), (e.hi, e.lo)] {
            if chi.degree(a) == 2 && chi.degree(b) < 2 {
                h_degree[b] += 1;
                h_edges += 1;
            }
        }
    }
    let cap = |d: usize| {
        (0..n)
            .filter(|&v| chi.degree(v) == d)
            .map(|v| h_degree[v])
            .max()
            .unwrap_or(0)
    };
    let (cap0, cap1) = (cap(0), cap(1));
    r.push("h_degree_n0", int(cap0), Le, int(4), true);
    r.push("h_degree_n1", int(cap1), Le, int(2), true);
    r.push(
        "h_edges_lower",
        int(n2 * (delta - 2)),
        Le,
        int(h_edges),
        true,
    );
    r.push(
        "h_edges_upper",
        int(h_edges),
        Le,
        int(4 * n0 + 2 * n1),
        true,
    );
    r.push("eq1", int(n2 * (delta - 2)), Le, int(4 * n0 + 2 * n1), true);
    r.push(
        "eq1_rearranged",
        int(n2 * delta),
        Le,
        int(2 * n + 2 * n0),
        true,
    );
    r.push(
        "excess",
        (int(n2) - int(n0)) * int(delta),
        Le,
        int(2 * n),
        true,
    );
    r.push(
        "colors_perfect_bound",
        int(c),
        Le,
        frac(n, 2) * r.bounds.perfect,
        true,
    );
    if r.triangle_free {
        r.push("h_degree_n0_triangle_free", int(cap0), Le, int(2), true);
        r.push("h_degree_n1_triangle_free", int(cap1), Le, int(1), true);
        r.push("eq4", int(n2 * (delta - 2)), Le, int(2 * n0 + n1), true);
        r.push(
            "eq4_rearranged",
            int(n2 * (delta - 1)),
            Le,
            int(n + n0),
            true,
        );
        r.push(
            "colors_triangle_free_bound",
            int(c),
            Le,
            frac(n, 2) * r.bounds.triangle_free,
            true,
        );
    }
}

/// Degree-class diagnostics for a valid coloring of a graph with `δ ≥ 3`.
/// The counting does not need a perfect matching; the bounds it implies
/// are the ones used for graphs that have one.
pub fn diagnostics_perfect_matching(
    g: &Graph,
    coloring: &EdgeColoring,
) -> Result<DiagnosticsReport, AnalysisError> {
    require_min_degree(g)?;
    let chi = characteristic_subgraph(g, coloring)?;
    let mut report = base_report(g, &maximum_matching(g));
    record_degree_classes(g, coloring, &chi, &mut report);
    report.into_result()
}

/// Structures of the general-graph argument, exposed for inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionStructure {
    pub chi: CharacteristicSubgraph,
    /// Alternate path edges, starting with each path's first edge.
    pub selected: Vec<Edge>,
    pub unselected: Vec<Edge>,
    /// Left endpoint of every unselected edge.
    pub left_endpoints: Vec<Vertex>,
    /// `δ - 2` non-chi edges per left endpoint.
    pub special_edges: Vec<Edge>,
    /// Special edges received by each vertex.
    pub special_count: Vec<usize>,
}

pub fn selection_structure(g: &Graph, chi: &CharacteristicSubgraph) -> SelectionStructure {
    let delta = g.min_degree();
    let mut selected = Vec::new();
    let mut unselected = Vec::new();
    let mut left = Vec::new();
    for path in chi.paths() {
        for (k, w) in path.windows(2).enumerate() {
            let e = Edge::new(w[0], w[1]);
            if k % 2 == 0 {
                selected.push(e);
            } else {
                unselected.push(e);
                left.push(w[0]);
            }
        }
    }
    let mut special_edges = Vec::new();
    let mut special_count = vec![0usize; g.vertex_count()];
    for &v in &left {
        let chosen = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !chi.contains(g.edge_index(u, v).expect("neighbor edge")))
            .take(delta.saturating_sub(2));
        for u in chosen {
            special_edges.push(Edge::new(u, v));
            special_count[u] += 1;
        }
    }
    SelectionStructure {
        chi: chi.clone(),
        selected,
        unselected,
        left_endpoints: left,
        special_edges,
        special_count,
    }
}

/// Diagnostics for the general-graph bound: builds the characteristic
/// subgraph, saturates path swaps, selects alternate path edges, and counts
/// the special edges from the left endpoints of the unselected ones.
pub fn diagnostics_general(
    g: &Graph,
    coloring: &EdgeColoring,
    m: &Matching,
) -> Result<DiagnosticsReport, AnalysisError> {
    use Relation::{Eq, Le};
    let delta = require_min_degree(g)?;
    if !m.belongs_to(g) {
        return Err(AnalysisError::ForeignMatching);
    }
    let maximum = maximum_matching(g).size();
    if m.size() != maximum {
        return Err(AnalysisError::NotMaximum {
            given: m.size(),
            maximum,
        });
    }
    let chi = characteristic_subgraph(g, coloring)?;
    let chi = saturate_path_swaps(g, &chi, coloring)?;
    let mut r = base_report(g, m);
    record_degree_classes(g, coloring, &chi, &mut r);

    let s = selection_structure(g, &chi);
    let n = g.vertex_count();
    let t = s.unselected.len();
    let c = chi.color_count();
    let msize = m.size();
    let in_t = {
        let mut mark = vec![false; n];
        for &v in &s.left_endpoints {
            mark[v] = true;
        }
        mark
    };
    let t_adjacent = g
        .edges()
        .iter()
        .filter(|e| in_t[e.lo] && in_t[e.hi])
        .count();
    let outside: Vec<Vertex> = (0..n).filter(|&v| !in_t[v]).collect();
    let h = |k: usize| outside.iter().filter(|&&v| s.special_count[v] == k).count();
    let (h0, h1, h2) = (h(0), h(1), h(2));
    let max_received = outside
        .iter()
        .map(|&v| s.special_count[v])
        .max()
        .unwrap_or(0);
    let h2_covered = outside
        .iter()
        .filter(|&&v| s.special_count[v] == 2 && chi.degree(v) != 0)
        .count();

    r.selected = Some(s.selected.len());
    r.t = Some(t);
    r.h0 = Some(h0);
    r.h1 = Some(h1);
    r.h2 = Some(h2);

    r.push(
        "left_endpoints_distinct",
        int(s.left_endpoints.len()),
        Eq,
        int(t),
        true,
    );
    r.push("t_independent", int(t_adjacent), Eq, int(0), true);
    r.push("special_received", int(max_received), Le, int(2), true);
    r.push(
        "special_edge_count",
        int(s.special_edges.len()),
        Eq,
        int(t * (delta - 2)),
        true,
    );
    r.push("h_partition", int(h0 + h1 + h2), Eq, int(n - t), true);
    r.push("eq6", int(t * (delta - 2)), Eq, int(2 * h2 + h1), true);
    r.push("eq7", int(t * (delta - 1)), Le, int(n + h2), true);
    r.push("h2_uncovered", int(h2_covered), Eq, int(0), true);
    r.push(
        "terminals_le_2m",
        int(chi.terminals().len()),
        Le,
        int(2 * msize),
        true,
    );
    r.push("colors_split", int(c), Eq, int(s.selected.len() + t), true);
    r.push("colors_le_m_plus_t", int(c), Le, int(msize + t), true);

    // These rest on an extremal choice of the subgraph that swap
    // saturation only approximates.
    let (a, b, cc) = claim_violations(g, coloring, &chi, &in_t, &s.special_count);
    r.push("claim_a", int(a), Eq, int(0), false);
    r.push("claim_b", int(b), Eq, int(0), false);
    r.push("claim_c", int(cc), Eq, int(0), false);
    r.push("h2_le_2m", int(h2), Le, int(2 * msize), false);
    r.push(
        "t_bound",
        int(t),
        Le,
        int(msize) * (r.kappa + int(2)) / int(delta - 1),
        false,
    );
    r.push(
        "t_bound_stated",
        int(t),
        Le,
        int(msize) * (r.kappa + int(2)) / int(delta - 2),
        false,
    );
    r.into_result()
}

/// Counts of violations of the three structural claims about a
/// path-count-maximal characteristic subgraph.
fn claim_violations(
    g: &Graph,
    coloring: &EdgeColoring,
    chi: &CharacteristicSubgraph,
    in_t: &[bool],
    special_count: &[usize],
) -> (usize, usize, usize) {
    let long_color = |c: Color| chi.path_len_through(g.edge(chi.edge_for_color(c)).lo) >= 2;
    let a = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, e)| {
            chi.degree(e.lo) == 0 && chi.degree(e.hi) == 0 && long_color(coloring.color(*i))
        })
        .count();
    let mut b = 0;
    for ci in 0..chi.color_count() {
        let color = ci as Color + 1;
        if !long_color(color) {
            continue;
        }
        let e = g.edge(chi.edge_for_color(color));
        b += g
            .neighbors(e.lo)
            .iter()
            .filter(|&&w| {
                chi.degree(w) == 0
                    && coloring.color_of(g, e.lo, w) == Some(color)
                    && coloring.color_of(g, e.hi, w) == Some(color)
            })
            .count();
    }
    let cc = (0..g.vertex_count())
        .filter(|&v| !in_t[v] && special_count[v] == 2)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| !in_t[u] && chi.degree(u) != 1)
                .count()
        })
        .sum();
    (a, b, cc)
}

/// Evaluates every approximation factor for `g` without a coloring.
pub fn bound_report(g: &Graph) -> Result<DiagnosticsReport, AnalysisError> {
    require_min_degree(g)?;
    if !g.is_connected() {
        return Err(AnalysisError::Disconnected);
    }
    let mut r = base_report(g, &maximum_matching(g));
    let kappa_cap = r.bounds.kappa_cap;
    let (n, k) = (r.n, r.matching_size);
    r.push(
        "matching_cover",
        int(n - 2 * k) * int(r.delta),
        Relation::Le,
        int(2 * k * r.max_degree),
        true,
    );
    r.push("kappa_cap", r.kappa, Relation::Le, kappa_cap, true);
    r.into_result()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// OPT versus ALG against every applicable bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioVerdict {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub matching_size: usize,
    #[serde(with = "rational::pair")]
    pub kappa: Rational,
    pub perfect_matching: bool,
    pub triangle_free: bool,
    pub dirac: bool,
    pub alg: usize,
    pub opt: Option<usize>,
    pub opt_status: OptStatus,
    pub nodes_explored: u64,
    pub checks: Vec<InequalityCheck>,
    pub verdict: Verdict,
    /// Optimal coloring found by the oracle.
    #[serde(skip)]
    pub witness: Option<EdgeColoring>,
}

/// Computes OPT with the exact oracle and ALG with the matching-based
/// algorithm, then checks every bound whose hypotheses the graph meets.
pub fn check_ratio(g: &Graph, node_budget: Option<u64>) -> Result<RatioVerdict, AnalysisError> {
    use Relation::{Eq, Le};
    let run = run_algorithm(g)?;
    let n = g.vertex_count();
    let delta = g.min_degree();
    let msize = run.matching.size();
    let kappa = Rational::new(n as i64, msize as i64);
    let perfect = is_perfect(g, &run.matching);
    let triangle_free = g.is_triangle_free();
    let dirac = delta >= n / 2;
    let alg = run.alg_colors;
    let oracle = exact_opt(g, node_budget);

    let mut verdict = RatioVerdict {
        n,
        m: g.edge_count(),
        delta,
        matching_size: msize,
        kappa,
        perfect_matching: perfect,
        triangle_free,
        dirac,
        alg,
        opt: oracle.opt_colors,
        opt_status: oracle.status,
        nodes_explored: oracle.nodes_explored,
        checks: Vec::new(),
        verdict: Verdict::Skipped,
        witness: None,
    };
    let Some(opt) = oracle.opt_colors else {
        return Ok(verdict);
    };
    verdict.witness = oracle.witness;

    let mut checks = vec![InequalityCheck::new(
        "alg_le_opt",
        int(alg),
        Le,
        int(opt),
        true,
    )];
    if delta >= 3 {
        let f = BoundFactors::new(delta, g.max_degree(), kappa);
        checks.push(InequalityCheck::new(
            "general",
            int(opt),
            Le,
            f.general * int(alg),
            true,
        ));
        checks.push(InequalityCheck::new(
            "general_stated",
            int(opt),
            Le,
            f.general_stated * int(alg),
            true,
        ));
        checks.push(InequalityCheck::new(
            "degree_only",
            int(opt),
            Le,
            f.degree_only * int(alg),
            true,
        ));
        if perfect {
            checks.push(InequalityCheck::new(
                "perfect",
                int(opt),
                Le,
                f.perfect * int(alg),
                true,
            ));
            if triangle_free {
                checks.push(InequalityCheck::new(
                    "triangle_free",
                    int(opt),
                    Le,
                    f.triangle_free * int(alg),
                    true,
                ));
            }
        }
        if dirac {
            checks.push(InequalityCheck::new(
                "dirac_alg_floor",
                int(n / 2 + 1),
                Le,
                int(alg),
                true,
            ));
            checks.push(InequalityCheck::new(
                "dirac_additive",
                int(opt),
                Le,
                int(alg + 1),
                true,
            ));
            if n.is_multiple_of(2) && 2 * delta > n {
                checks.push(InequalityCheck::new(
                    "dirac_optimal",
                    int(opt),
                    Eq,
                    int(alg),
                    true,
                ));
            }
        }
    }
    verdict.verdict = if checks.iter().any(InequalityCheck::failed_hard) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    verdict.checks = checks;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::color_with_matching;

    fn k4_alg(g: &Graph) -> EdgeColoring {
        let m = Matching::new(g, &[(0, 1), (2, 3)]).unwrap();
        color_with_matching(g, &m).unwrap().coloring
    }

    /// Every one-edge-per-class choice for a coloring.
    fn all_choices(coloring: &EdgeColoring) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for class in coloring.classes() {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    class.iter().map(move |&e| {
                        let mut p = prefix.clone();
                        p.push(e);
                        p
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn k4_subgraph_is_four_vertex_path() {
        let g = Graph::complete(4);
        let coloring = k4_alg(&g);
        let chi = characteristic_subgraph(&g, &coloring).unwrap();
        assert_eq!(chi.color_count(), 3);
        assert_eq!(chi.paths().len(), 1);
        assert_eq!(chi.paths()[0].len(), 4);
        // Oracle: every acyclic one-edge-per-class choice is a 3-edge linear forest.
        for choice in all_choices(&coloring) {
            let cand = CharacteristicSubgraph::from_choice(&g, choice);
            if cand.is_path_union() {
                assert_eq!(cand.edges(&g).len(), 3);
                assert!(cand.max_degree() <= 2);
            }
        }
    }

    #[test]
    fn single_color_gives_single_edge() {
        let g = Graph::complete(4);
        let coloring = EdgeColoring::from_labels(&g, vec![1; 6]).unwrap();
        let chi = characteristic_subgraph(&g, &coloring).unwrap();
        assert_eq!(chi.edges(&g), vec![Edge::new(0, 1)]);
        assert_eq!(chi.paths(), &[vec![0, 1]]);
    }

    #[test]
    fn cycle_gets_broken() {
        // Lowest class edges form the triangle 01, 02, 12.
        let g = Graph::complete(4);
        // edges: 01 02 03 12 13 23
        let coloring = EdgeColoring::from_labels(&g, vec![1, 2, 1, 3, 1, 2]).unwrap();
        assert!(validate_coloring(&g, &coloring).unwrap().is_valid());
        let first = CharacteristicSubgraph::from_choice(
            &g,
            coloring.classes().iter().map(|c| c[0]).collect(),
        );
        assert_eq!(first.cycles().len(), 1);
        let chi = characteristic_subgraph(&g, &coloring).unwrap();
        assert!(chi.is_path_union());
        assert_eq!(chi.cycle_swaps, 1);
        assert_eq!(chi.paths(), &[vec![1, 2, 0, 3]]);
    }

    #[test]
    fn rejects_low_degree_and_invalid() {
        let c5 = Graph::cycle(5);
        let col = EdgeColoring::from_labels(&c5, vec![1, 2, 3, 4, 5]).unwrap();
        assert_eq!(
            characteristic_subgraph(&c5, &col),
            Err(AnalysisError::MinDegreeTooSmall(2))
        );
        let g = Graph::complete(4);
        let bad = EdgeColoring::from_labels(&g, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert!(matches!(
            characteristic_subgraph(&g, &bad),
            Err(AnalysisError::InvalidColoring { vertex: 0, .. })
        ));
    }

    #[test]
    fn k4_perfect_diagnostics() {
        let g = Graph::complete(4);
        let r = diagnostics_perfect_matching(&g, &k4_alg(&g)).unwrap();
        assert_eq!((r.n0, r.n1, r.n2), (Some(0), Some(2), Some(2)));
        let eq1 = r.check("eq1").unwrap();
        assert_eq!((eq1.lhs, eq1.rhs), (int(2), int(4)));
        let cb = r.check("colors_perfect_bound").unwrap();
        assert_eq!((cb.lhs, cb.rhs), (int(3), frac(10, 3)));
        assert!(r.check("eq4").is_none());
        assert!(r.checks.iter().all(|c| c.holds && c.recheck() == c.holds));
    }

    #[test]
    fn two_color_k4_counts() {
        // Classes {01, 23} and {02, 03, 12, 13}: chi is the path 1-0-2.
        let g = Graph::complete(4);
        let c2 = EdgeColoring::from_labels(&g, vec![1, 2, 2, 2, 2, 1]).unwrap();
        let r = diagnostics_perfect_matching(&g, &c2).unwrap();
        assert_eq!((r.n0, r.n1, r.n2), (Some(1), Some(2), Some(1)));
        let eq1 = r.check("eq1").unwrap();
        assert_eq!((eq1.lhs, eq1.rhs), (int(1), int(8)));
    }

    #[test]
    fn k4_general_diagnostics() {
        let g = Graph::complete(4);
        let m = maximum_matching(&g);
        let r = diagnostics_general(&g, &k4_alg(&g), &m).unwrap();
        assert_eq!(r.t, Some(1));
        assert_eq!(r.selected, Some(2));
        let eq6 = r.check("eq6").unwrap();
        assert_eq!(eq6.lhs, int(1));
        assert!(eq6.holds);
        assert_eq!(r.h0.unwrap() + r.h1.unwrap() + r.h2.unwrap(), 3);
        assert_eq!(r.h1, Some(1));
    }

    #[test]
    fn two_color_k4_general() {
        // Every choice is a 2-edge path; its left endpoint 0 sends one
        // special edge to 3.
        let g = Graph::complete(4);
        let c2 = EdgeColoring::from_labels(&g, vec![1, 2, 2, 2, 2, 1]).unwrap();
        let r = diagnostics_general(&g, &c2, &maximum_matching(&g)).unwrap();
        assert_eq!((r.selected, r.t), (Some(1), Some(1)));
        assert_eq!((r.h0, r.h1, r.h2), (Some(2), Some(1), Some(0)));
        let eq6 = r.check("eq6").unwrap();
        assert_eq!((eq6.lhs, eq6.rhs), (int(1), int(1)));
    }

    #[test]
    fn general_rejects_non_maximum() {
        let g = Graph::complete(4);
        let m = Matching::new(&g, &[(0, 1)]).unwrap();
        assert_eq!(
            diagnostics_general(&g, &k4_alg(&g), &m),
            Err(AnalysisError::NotMaximum {
                given: 1,
                maximum: 2
            })
        );
    }

    #[test]
    fn bound_report_examples() {
        let k4 = bound_report(&Graph::complete(4)).unwrap();
        assert!(k4.perfect_matching);
        assert_eq!(k4.bounds.perfect, frac(5, 3));

        let p = bound_report(&Graph::petersen()).unwrap();
        assert_eq!(p.matching_size, 5);
        assert_eq!(p.kappa, int(2));
        assert_eq!(p.bounds.general, int(3));
    }

    #[test]
    fn regular_degree_only_factor() {
        for d in 3..8 {
            let g = Graph::complete(d + 1);
            let r = bound_report(&g).unwrap();
            assert_eq!(r.bounds.kappa_cap, int(4));
            assert_eq!(r.bounds.degree_only, int(1) + frac(6, d - 1));
            assert!(r.bounds.general <= r.bounds.degree_only);
        }
    }

    #[test]
    fn ratio_k4_and_k5() {
        let v = check_ratio(&Graph::complete(4), None).unwrap();
        assert_eq!((v.opt, v.alg), (Some(3), 3));
        assert_eq!(v.verdict, Verdict::Pass);
        assert!(v.checks.iter().all(|c| c.holds));

        let v = check_ratio(&Graph::complete(5), None).unwrap();
        assert_eq!(v.verdict, Verdict::Pass);
        assert!(v.check_named("dirac_additive").is_some());
    }

    #[test]
    fn ratio_skipped_on_budget() {
        let v = check_ratio(&Graph::petersen(), Some(3)).unwrap();
        assert_eq!(v.verdict, Verdict::Skipped);
        assert_eq!(v.opt, None);
    }

    impl RatioVerdict {
        fn check_named(&self, name: &str) -> Option<&InequalityCheck> {
            self.checks.iter().find(|c| c.name == name)
        }
    }
}
