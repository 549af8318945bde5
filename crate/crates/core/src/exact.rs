//! Exact maximum edge 2-coloring for desk-sized graphs.
//!
//! [`exact_opt`] is a branch-and-bound over set partitions of the edge set;
//! [`naive_opt`] enumerates every partition and exists only to cross-check
//! it on small inputs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::color_with_matching;
use crate::coloring::{Color, EdgeColoring};
use crate::graph::Graph;
use crate::matching::maximum_matching;

/// Largest edge count accepted by [`naive_opt`].
pub const NAIVE_MAX_EDGES: usize = 12;
/// Largest vertex count for which [`upper_bound_path_packing`] is exact.
pub const PATH_PACKING_EXACT_MAX_VERTICES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("minimum degree {0} is below 3")]
    MinDegreeTooSmall(usize),
    #[error("{0} edges exceed the naive enumeration limit of {NAIVE_MAX_EDGES}")]
    TooManyEdges(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptStatus {
    Exact,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub status: OptStatus,
    /// `None` unless the search finished.
    pub opt_colors: Option<usize>,
    /// A coloring with exactly `opt_colors` colors when exact.
    pub witness: Option<EdgeColoring>,
    pub nodes_explored: u64,
    /// Best coloring found before the budget ran out; a lower bound only.
    pub best_found: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptReport {
    pub opt: Option<usize>,
    pub nodes_explored: u64,
    pub status: OptStatus,
}

impl OptResult {
    pub fn is_exact(&self) -> bool {
        self.status == OptStatus::Exact
    }

    pub fn report(&self) -> OptReport {
        OptReport {
            opt: self.opt_colors,
            nodes_explored: self.nodes_explored,
            status: self.status,
        }
    }
}

/// Computes OPT(G). With a node budget, running out yields
/// [`OptStatus::Unknown`] rather than a best-so-far value.
pub fn exact_opt(g: &Graph, node_budget: Option<u64>) -> OptResult {
    let m = g.edge_count();
    if m == 0 {
        return OptResult {
            status: OptStatus::Exact,
            opt_colors: Some(0),
            witness: Some(EdgeColoring::from_labels(g, Vec::new()).expect("empty coloring")),
            nodes_explored: 0,
            best_found: 0,
        };
    }

    let incumbent = color_with_matching(g, &maximum_matching(g))
        .expect("a maximum matching is maximal")
        .coloring;
    let cap = if g.min_degree() >= 3 {
        upper_bound_path_packing(g).expect("min degree checked")
    } else {
        g.vertex_count()
    };

    let mut search = Search::new(g, node_budget, cap, incumbent);
    let finished = search.run();
    let best = search.best_count;
    if finished {
        let witness = EdgeColoring::normalized(g, &search.best_labels).expect("total labels");
        OptResult {
            status: OptStatus::Exact,
            opt_colors: Some(best),
            witness: Some(witness),
            nodes_explored: search.nodes,
            best_found: best,
        }
    } else {
        OptResult {
            status: OptStatus::Unknown,
            opt_colors: None,
            witness: None,
            nodes_explored: search.nodes,
            best_found: best,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Palette {
    len: u8,
    colors: [Color; 2],
}

impl Palette {
    fn has(&self, c: Color) -> bool {
        self.colors[..self.len as usize].contains(&c)
    }

    fn full(&self) -> bool {
        self.len == 2
    }

    fn accepts(&self, c: Color) -> bool {
        !self.full() || self.has(c)
    }
}

struct Search<'g> {
    g: &'g Graph,
    order: Vec<usize>,
    labels: Vec<Color>,
    pal: Vec<Palette>,
    /// Unassigned incident edges per vertex.
    rem_deg: Vec<usize>,
    /// Per class (index c-1): vertices touching it, edges in it.
    class_size: Vec<usize>,
    class_edges: Vec<usize>,
    cap: usize,
    budget: Option<u64>,
    nodes: u64,
    best_count: usize,
    best_labels: Vec<Color>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, budget: Option<u64>, cap: usize, incumbent: EdgeColoring) -> Self {
        let m = g.edge_count();
        let mut order: Vec<usize> = (0..m).collect();
        let weight = |i: usize| {
            let e = g.edge(i);
            g.degree(e.lo).max(g.degree(e.hi))
        };
        order.sort_by(|&a, &b| weight(b).cmp(&weight(a)).then(a.cmp(&b)));
        Search {
            g,
            order,
            labels: vec![0; m],
            pal: vec![Palette::default(); g.vertex_count()],
            rem_deg: (0..g.vertex_count()).map(|v| g.degree(v)).collect(),
            class_size: Vec::new(),
            class_edges: Vec::new(),
            cap,
            budget,
            nodes: 0,
            best_count: incumbent.color_count(),
            best_labels: incumbent.labels().to_vec(),
        }
    }

    /// Returns false when the budget ran out.
    fn run(&mut self) -> bool {
        if self.best_count >= self.cap {
            return true;
        }
        self.descend(0)
    }

    fn descend(&mut self, depth: usize) -> bool {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return false;
        }
        let k = self.class_size.len();
        if depth == self.order.len() {
            if k > self.best_count {
                self.best_count = k;
                self.best_labels.clone_from(&self.labels);
            }
            return true;
        }
        if self.upper_bound(depth) <= self.best_count {
            return true;
        }

        let idx = self.order[depth];
        let e = self.g.edge(idx);
        let (pu, pv) = (self.pal[e.lo], self.pal[e.hi]);

        let mut choices: Vec<Color> = Vec::with_capacity(k + 1);
        if !pu.full() && !pv.full() {
            choices.push(k as Color + 1);
        }
        // Shared colors first, then colors present at one endpoint, then the rest.
        for c in 1..=k as Color {
            if pu.has(c) && pv.has(c) {
                choices.push(c);
            }
        }
        for c in 1..=k as Color {
            if pu.has(c) != pv.has(c) && pu.accepts(c) && pv.accepts(c) {
                choices.push(c);
            }
        }
        if !pu.full() && !pv.full() {
            for c in 1..=k as Color {
                if !pu.has(c) && !pv.has(c) {
                    choices.push(c);
                }
            }
        }

        for c in choices {
            let undo = self.assign(idx, c);
            let ok = if self.forward_check(e.lo) && self.forward_check(e.hi) {
                self.descend(depth + 1)
            } else {
                true
            };
            self.unassign(idx, c, undo);
            if !ok {
                return false;
            }
            if self.best_count >= self.cap {
                return true;
            }
        }
        true
    }

    fn assign(&mut self, idx: usize, c: Color) -> [bool; 2] {
        let e = self.g.edge(idx);
        if c as usize > self.class_size.len() {
            self.class_size.push(0);
            self.class_edges.push(0);
        }
        let ci = c as usize - 1;
        let mut added = [false; 2];
        for (slot, v) in [e.lo, e.hi].into_iter().enumerate() {
            let p = &mut self.pal[v];
            if !p.has(c) {
                p.colors[p.len as usize] = c;
                p.len += 1;
                self.class_size[ci] += 1;
                added[slot] = true;
            }
            self.rem_deg[v] -= 1;
        }
        self.class_edges[ci] += 1;
        self.labels[idx] = c;
        added
    }

    fn unassign(&mut self, idx: usize, c: Color, added: [bool; 2]) {
        let e = self.g.edge(idx);
        let ci = c as usize - 1;
        for (slot, v) in [e.lo, e.hi].into_iter().enumerate() {
            if added[slot] {
                self.pal[v].len -= 1;
                self.class_size[ci] -= 1;
            }
            self.rem_deg[v] += 1;
        }
        self.class_edges[ci] -= 1;
        self.labels[idx] = 0;
        if self.class_edges[ci] == 0 {
            self.class_size.pop();
            self.class_edges.pop();
        }
    }

    /// Every unassigned edge at `v` must still have a color both ends accept.
    fn forward_check(&self, v: usize) -> bool {
        let pv = self.pal[v];
        if !pv.full() {
            return true;
        }
        for &u in self.g.neighbors(v) {
            let idx = self.g.edge_index(u, v).expect("neighbor edge");
            if self.labels[idx] != 0 {
                continue;
            }
            let pu = self.pal[u];
            if pu.full() && !pu.has(pv.colors[0]) && !pu.has(pv.colors[1]) {
                return false;
            }
        }
        true
    }

    /// Admissible bound on the final class count below this node.
    ///
    /// Each vertex touches at most two classes, so the class vertex-set sizes
    /// sum to at most `2n`. A class on `s` vertices holds at most `s(s-1)/2`
    /// edges. New classes need two free slots each; leftover free slots are
    /// best spent growing the single largest class (the edge capacity is
    /// convex in class size). The largest `r` new classes whose total
    /// capacity still fits the remaining edges bounds the gain.
    fn upper_bound(&self, depth: usize) -> usize {
        let k = self.class_size.len();
        let remaining = self.order.len() - depth;
        let free: usize = (0..self.g.vertex_count())
            .filter(|&v| self.rem_deg[v] > 0)
            .map(|v| 2 - self.pal[v].len as usize)
            .sum();
        let pairs = |s: usize| s * s.saturating_sub(1) / 2;
        let slack: usize = self
            .class_size
            .iter()
            .zip(&self.class_edges)
            .map(|(&s, &e)| pairs(s) - e)
            .sum();
        let largest = self.class_size.iter().copied().max().unwrap_or(0);

        let r_max = (free / 2).min(remaining);
        let mut best_r = None;
        for r in (0..=r_max).rev() {
            let leftover = free - 2 * r;
            let base = if r > 0 { largest.max(2) } else { largest };
            let growth = if base == 0 {
                // No class to grow: free slots alone carry no edges.
                0
            } else {
                pairs(base + leftover) - pairs(base)
            };
            if slack + r + growth >= remaining {
                best_r = Some(r);
                break;
            }
        }
        match best_r {
            Some(r) => (k + r).min(self.cap),
            None => 0,
        }
    }
}

/// Maximum number of edges in a spanning linear forest. For `δ ≥ 3` every
/// edge 2-coloring has a characteristic subgraph that is a linear forest,
/// so this bounds OPT. Exact up to [`PATH_PACKING_EXACT_MAX_VERTICES`];
/// beyond that returns `n - #components`, which is still an upper bound.
pub fn upper_bound_path_packing(g: &Graph) -> Result<usize, ExactError> {
    let delta = g.min_degree();
    if delta < 3 {
        return Err(ExactError::MinDegreeTooSmall(delta));
    }
    let n = g.vertex_count();
    if n > PATH_PACKING_EXACT_MAX_VERTICES {
        return Ok(n - g.components().len());
    }
    Ok(n - min_path_cover(g))
}

/// Fewest vertex-disjoint paths covering all vertices (subset DP).
fn min_path_cover(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let full = (1usize << n) - 1;
    let adj: Vec<usize> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0, |acc, &u| acc | 1 << u))
        .collect();
    // ends[mask]: bitset of vertices at which some Hamiltonian path of mask can end.
    let mut ends = vec![0usize; full + 1];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for mask in 1..=full {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        let mut it = e;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            let mut ext = adj[v] & !mask;
            while ext != 0 {
                let u = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                ends[mask | 1 << u] |= 1 << u;
            }
        }
    }
    let mut cover = vec![usize::MAX; full + 1];
    cover[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Enumerate submasks of mask that contain its lowest vertex.
        let mut sub = rest;
        loop {
            let part = sub | low;
            if ends[part] != 0 && cover[mask ^ part] != usize::MAX {
                cover[mask] = cover[mask].min(cover[mask ^ part] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    cover[full]
}

/// OPT(G) by enumerating every set partition of the edges and keeping the
/// largest one whose classes meet the per-vertex constraint.
pub fn naive_opt(g: &Graph) -> Result<usize, ExactError> {
    let m = g.edge_count();
    if m > NAIVE_MAX_EDGES {
        return Err(ExactError::TooManyEdges(m));
    }
    let mut labels = vec![0usize; m];
    let mut best = 0;
    enumerate_partitions(g, &mut labels, 0, 0, &mut best);
    Ok(best)
}

fn enumerate_partitions(
    g: &Graph,
    labels: &mut [usize],
    i: usize,
    classes: usize,
    best: &mut usize,
) {
    if i == labels.len() {
        if classes > *best && satisfies_vertex_constraint(g, labels) {
            *best = classes;
        }
        return;
    }
    for c in 0..=classes {
        labels[i] = c;
        enumerate_partitions(g, labels, i + 1, classes.max(c + 1), best);
    }
}

fn satisfies_vertex_constraint(g: &Graph, labels: &[usize]) -> bool {
    (0..g.vertex_count()).all(|v| {
        let mut seen: Vec<usize> = g.incident_edges(v).map(|i| labels[i]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len() <= 2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::validate_coloring;

    /// Largest linear-forest edge count by brute force over edge subsets.
    fn brute_force_linear_forest(g: &Graph) -> usize {
        let m = g.edge_count();
        let n = g.vertex_count();
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let k = mask.count_ones() as usize;
            if k <= best {
                continue;
            }
            let mut deg = vec![0; n];
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            let mut ok = true;
            for i in 0..m {
                if mask >> i & 1 == 0 {
                    continue;
                }
                let e = g.edge(i);
                deg[e.lo] += 1;
                deg[e.hi] += 1;
                let (a, b) = (find(&mut parent, e.lo), find(&mut parent, e.hi));
                if deg[e.lo] > 2 || deg[e.hi] > 2 || a == b {
                    ok = false;
                    break;
                }
                parent[a] = b;
            }
            if ok {
                best = k;
            }
        }
        best
    }

    #[test]
    fn exact_small_examples() {
        let c5 = exact_opt(&Graph::cycle(5), None);
        assert_eq!(c5.opt_colors, Some(5));
        assert_eq!(exact_opt(&Graph::star(3), None).opt_colors, Some(2));
        let k4 = Graph::complete(4);
        let r = exact_opt(&k4, None);
        assert_eq!(r.opt_colors, Some(3));
        let w = r.witness.unwrap();
        assert_eq!(w.color_count(), 3);
        assert!(validate_coloring(&k4, &w).unwrap().is_valid());
    }

    #[test]
    fn naive_small_examples() {
        assert_eq!(naive_opt(&Graph::complete(3)), Ok(3));
        assert_eq!(naive_opt(&Graph::path(3)), Ok(2));
        assert_eq!(naive_opt(&Graph::complete(4)), Ok(3));
        let k5 = Graph::complete(5);
        assert_eq!(naive_opt(&k5).ok(), exact_opt(&k5, None).opt_colors);
        assert_eq!(
            naive_opt(&Graph::petersen()),
            Err(ExactError::TooManyEdges(15))
        );
    }

    #[test]
    fn path_packing_examples() {
        assert_eq!(upper_bound_path_packing(&Graph::complete(4)), Ok(3));
        assert_eq!(upper_bound_path_packing(&Graph::complete(5)), Ok(4));
        let p = Graph::petersen();
        assert_eq!(brute_force_linear_forest(&p), 9);
        assert_eq!(upper_bound_path_packing(&p), Ok(9));
        assert_eq!(
            upper_bound_path_packing(&Graph::cycle(6)),
            Err(ExactError::MinDegreeTooSmall(2))
        );
    }

    #[test]
    fn path_packing_matches_brute_force() {
        for g in [
            Graph::complete_bipartite(3, 3),
            Graph::complete_bipartite(3, 4),
            Graph::complete(6),
        ] {
            assert_eq!(
                upper_bound_path_packing(&g).unwrap(),
                brute_force_linear_forest(&g)
            );
        }
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let r = exact_opt(&Graph::petersen(), Some(10));
        assert_eq!(r.status, OptStatus::Unknown);
        assert_eq!(r.opt_colors, None);
        assert!(r.witness.is_none());
    }

    #[test]
    fn edgeless() {
        let r = exact_opt(&Graph::empty(3), None);
        assert_eq!(r.opt_colors, Some(0));
    }

    #[test]
    fn repeat_runs_agree() {
        let g = Graph::petersen();
        let a = exact_opt(&g, None);
        let b = exact_opt(&g, None);
        assert_eq!(a.opt_colors, b.opt_colors);
        assert!(a.opt_colors.unwrap() <= 9);
    }
}
