//! Simple undirected graphs on dense vertex indices `0..n`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

/// An undirected edge stored canonically with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub lo: Vertex,
    pub hi: Vertex,
}

impl Edge {
    /// Canonicalizes the pair. Callers must not pass `a == b`.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: Vertex) -> Vertex {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn shares_vertex(&self, e: &Edge) -> bool {
        self.touches(e.lo) || self.touches(e.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lo, self.hi)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
}

/// Immutable simple graph. Edges are kept sorted in canonical order and the
/// position of an edge in that order is its edge index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
    index: HashMap<Edge, usize>,
}

impl Graph {
    /// Builds a validated graph; rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            edges.push(Edge::new(u, v));
        }
        Self::from_edges(n, edges)
    }

    fn from_edges(n: usize, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0]));
        }
        let mut adj = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            adj[e.lo].push(e.hi);
            adj[e.hi].push(e.lo);
            index.insert(*e, i);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adj,
            index,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            index: HashMap::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Self::new(n, &pairs).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &pairs).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &pairs).expect("path is simple")
    }

    /// Star `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        let pairs: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::new(leaves + 1, &pairs).expect("star is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut pairs = Vec::new();
        for u in 0..a {
            for v in 0..b {
                pairs.push((u, a + v));
            }
        }
        Self::new(a + b, &pairs).expect("complete bipartite graph is simple")
    }

    pub fn petersen() -> Self {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, &pairs).expect("Petersen graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> Edge {
        self.edges[idx]
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// δ; zero for the empty vertex set.
    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Δ; zero for the empty vertex set.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.index.contains_key(&Edge::new(u, v))
    }

    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u == v {
            return None;
        }
        self.index.get(&Edge::new(u, v)).copied()
    }

    pub fn index_of(&self, e: Edge) -> Option<usize> {
        self.index.get(&e).copied()
    }

    /// Indices of the edges incident to `v`, ordered by neighbor.
    pub fn incident_edges(&self, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        self.adj[v]
            .iter()
            .map(move |&u| self.index[&Edge::new(u, v)])
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        self.components_masked(|_| true)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Components of the graph with `removed` deleted; every vertex is kept.
    pub fn components_after_removal(
        &self,
        removed: &[Edge],
    ) -> Result<Vec<Vec<Vertex>>, GraphError> {
        let mut keep = vec![true; self.edges.len()];
        for e in removed {
            let idx = self.index_of(*e).ok_or(GraphError::MissingEdge(*e))?;
            keep[idx] = false;
        }
        Ok(self.components_masked(|idx| keep[idx]))
    }

    pub(crate) fn components_masked(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<Vertex>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            stack.push(s);
            let mut members = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if comp[u] == usize::MAX && keep(self.index[&Edge::new(u, v)]) {
                        comp[u] = id;
                        members.push(u);
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges.iter().all(|e| {
            let (a, b) = (&self.adj[e.lo], &self.adj[e.hi]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return false,
                }
            }
            true
        })
    }

    /// Two-coloring of the vertices when the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let sv = side[v].unwrap();
                for &u in &self.adj[v] {
                    match side[u] {
                        None => {
                            side[u] = Some(!sv);
                            stack.push(u);
                        }
                        Some(su) if su == sv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_edge() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!((g.min_degree(), g.max_degree()), (1, 1));
    }

    #[test]
    fn complete_four() {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let g = Graph::new(4, &pairs).unwrap();
        assert_eq!((g.min_degree(), g.max_degree()), (3, 3));
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Graph::new(3, &[(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge(Edge::new(0, 1)))
        );
        assert_eq!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(Edge::new(0, 1)))
        );
        assert_eq!(Graph::new(3, &[(2, 2)]), Err(GraphError::SelfLoop(2)));
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn connectivity() {
        assert!(Graph::complete(4).is_connected());
        assert!(!Graph::new(4, &[(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(Graph::empty(0).is_connected());
        assert!(!Graph::empty(2).is_connected());
    }

    #[test]
    fn removal_components() {
        let k4 = Graph::complete(4);
        let pm = [Edge::new(0, 1), Edge::new(2, 3)];
        assert_eq!(k4.components_after_removal(&pm).unwrap().len(), 1);

        let c4 = Graph::cycle(4);
        let m = [Edge::new(0, 1), Edge::new(2, 3)];
        assert_eq!(
            c4.components_after_removal(&m).unwrap(),
            vec![vec![0, 3], vec![1, 2]]
        );
        assert_eq!(c4.components_after_removal(&[]).unwrap(), c4.components());
        assert_eq!(
            c4.components_after_removal(&[Edge::new(0, 2)]),
            Err(GraphError::MissingEdge(Edge::new(0, 2)))
        );
    }

    #[test]
    fn triangles() {
        assert!(!Graph::complete(4).is_triangle_free());
        assert!(Graph::cycle(5).is_triangle_free());
        assert!(Graph::complete_bipartite(3, 4).is_triangle_free());
        assert!(Graph::petersen().is_triangle_free());
    }

    #[test]
    fn petersen_shape() {
        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert_eq!((p.min_degree(), p.max_degree()), (3, 3));
        assert!(!p.is_bipartite());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..10).prop_flat_map(|n| {
            let all: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let len = all.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
                let pairs: Vec<_> = all
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &k)| k)
                    .map(|(p, _)| *p)
                    .collect();
                Graph::new(n, &pairs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn handshake(g in arb_graph()) {
            let total: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(total, 2 * g.edge_count());
        }

        #[test]
        fn removal_partitions_vertices(g in arb_graph(), pick in any::<u64>()) {
            let removed: Vec<Edge> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|(i, _)| pick >> (i % 64) & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            let comps = g.components_after_removal(&removed).unwrap();
            let mut seen: Vec<usize> = comps.iter().flatten().copied().collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..g.vertex_count()).collect::<Vec<_>>());
            for comp in &comps {
                for &v in comp {
                    for &u in g.neighbors(v) {
                        if !removed.contains(&Edge::new(u, v)) {
                            prop_assert!(comp.contains(&u));
                        }
                    }
                }
            }
        }
    }
}
