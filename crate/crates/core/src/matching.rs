//! Maximum cardinality matching in general graphs.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matched pair {0} is not an edge of the graph")]
    NotAnEdge(Edge),
    #[error("vertex {0} is covered by more than one matched edge")]
    SharedVertex(Vertex),
    #[error("matched pair ({0}, {0}) is a self-loop")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

/// A set of pairwise vertex-disjoint edges of a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    edges: Vec<Edge>,
    mate: Vec<Option<Vertex>>,
}

impl Matching {
    pub fn new(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Result<Self, MatchingError> {
        let n = g.vertex_count();
        let mut mate = vec![None; n];
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(MatchingError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(MatchingError::SelfLoop(u));
            }
            let e = Edge::new(u, v);
            if !g.has_edge(u, v) {
                return Err(MatchingError::NotAnEdge(e));
            }
            for w in [e.lo, e.hi] {
                if mate[w].is_some() {
                    return Err(MatchingError::SharedVertex(w));
                }
            }
            mate[e.lo] = Some(e.hi);
            mate[e.hi] = Some(e.lo);
            edges.push(e);
        }
        edges.sort_unstable();
        Ok(Matching { edges, mate })
    }

    fn from_mates(mate: Vec<Option<Vertex>>) -> Self {
        let edges = mate
            .iter()
            .enumerate()
            .filter_map(|(v, m)| m.filter(|&u| v < u).map(|u| Edge::new(v, u)))
            .collect();
        Matching { edges, mate }
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Matched edges in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mate(&self, v: Vertex) -> Option<Vertex> {
        self.mate.get(v).copied().flatten()
    }

    pub fn covers(&self, v: Vertex) -> bool {
        self.mate(v).is_some()
    }

    /// True when this matching was built for a graph with `g`'s vertex
    /// count and every matched pair is an edge of `g`.
    pub fn belongs_to(&self, g: &Graph) -> bool {
        self.mate.len() == g.vertex_count() && self.edges.iter().all(|e| g.index_of(*e).is_some())
    }

    /// No edge of `g` has both endpoints uncovered.
    pub fn is_maximal_in(&self, g: &Graph) -> bool {
        g.edges()
            .iter()
            .all(|e| self.covers(e.lo) || self.covers(e.hi))
    }
}

pub fn is_perfect(g: &Graph, m: &Matching) -> bool {
    2 * m.size() == g.vertex_count()
}

/// Maximum cardinality matching by augmenting paths with blossom
/// contraction, seeded by a greedy pass. Deterministic: roots and
/// neighbors are scanned in index order.
pub fn maximum_matching(g: &Graph) -> Matching {
    let n = g.vertex_count();
    let mut mate: Vec<Option<Vertex>> = vec![None; n];

    for v in 0..n {
        if mate[v].is_some() {
            continue;
        }
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| mate[u].is_none()) {
            mate[v] = Some(u);
            mate[u] = Some(v);
        }
    }

    let mut search = BlossomSearch::new(n);
    for root in 0..n {
        if mate[root].is_none() {
            if let Some(end) = search.find_augmenting_path(g, &mate, root) {
                search.augment(&mut mate, end);
            }
        }
    }
    Matching::from_mates(mate)
}

struct BlossomSearch {
    parent: Vec<Option<Vertex>>,
    base: Vec<Vertex>,
    in_tree: Vec<bool>,
    queue: VecDeque<Vertex>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        BlossomSearch {
            parent: vec![None; n],
            base: (0..n).collect(),
            in_tree: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    /// BFS over the alternating forest rooted at `root`. Returns the free
    /// vertex that ends an augmenting path; `parent` then encodes the path.
    fn find_augmenting_path(
        &mut self,
        g: &Graph,
        mate: &[Option<Vertex>],
        root: Vertex,
    ) -> Option<Vertex> {
        let n = g.vertex_count();
        self.parent.iter_mut().for_each(|p| *p = None);
        self.in_tree.iter_mut().for_each(|u| *u = false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.in_tree[root] = true;
        self.queue.push_back(root);

        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == Some(to) {
                    continue;
                }
                let outer = to == root || mate[to].is_some_and(|m| self.parent[m].is_some());
                if outer {
                    let cur = self.lowest_common_base(mate, v, to);
                    let mut in_blossom = vec![false; n];
                    self.mark_path(mate, &mut in_blossom, v, cur, to);
                    self.mark_path(mate, &mut in_blossom, to, cur, v);
                    for i in 0..n {
                        if in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.in_tree[i] {
                                self.in_tree[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.in_tree[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn lowest_common_base(&self, mate: &[Option<Vertex>], a: Vertex, b: Vertex) -> Vertex {
        let mut seen = vec![false; mate.len()];
        let mut a = a;
        loop {
            a = self.base[a];
            seen[a] = true;
            match mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("outer vertex has a tree parent"),
            }
        }
        let mut b = b;
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            let m = mate[b].expect("path to the root alternates");
            b = self.parent[m].expect("outer vertex has a tree parent");
        }
    }

    fn mark_path(
        &mut self,
        mate: &[Option<Vertex>],
        in_blossom: &mut [bool],
        mut v: Vertex,
        b: Vertex,
        mut child: Vertex,
    ) {
        while self.base[v] != b {
            let m = mate[v].expect("inner blossom vertex is matched");
            in_blossom[self.base[v]] = true;
            in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a tree parent");
        }
    }

    fn augment(&self, mate: &mut [Option<Vertex>], end: Vertex) {
        let mut v = Some(end);
        while let Some(cur) = v {
            let pv = self.parent[cur].expect("augmenting path is rooted");
            let next = mate[pv];
            mate[cur] = Some(pv);
            mate[pv] = Some(cur);
            v = next;
        }
    }
}

const TUTTE_PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1
const TUTTE_TRIALS: usize = 3;

/// Certifies that `m` has maximum cardinality, independently of
/// [`maximum_matching`]: by Berge's theorem this holds iff no augmenting
/// path exists, and the matching number is read off as half the rank of a
/// random evaluation of the Tutte matrix over GF(2^61 - 1).
///
/// A random evaluation can only underestimate the rank, so a `false` answer
/// is always correct; a `true` answer is wrong with probability at most
/// `(n / 2^61)^3`.
pub fn verify_maximality(g: &Graph, m: &Matching) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0074_7574_7465);
    let nu = (0..TUTTE_TRIALS)
        .map(|_| tutte_rank(g, &mut rng) / 2)
        .max()
        .unwrap_or(0);
    m.size() >= nu
}

fn tutte_rank(g: &Graph, rng: &mut ChaCha8Rng) -> usize {
    let n = g.vertex_count();
    let mut a = vec![vec![0u64; n]; n];
    for e in g.edges() {
        let x = rng.gen_range(1..TUTTE_PRIME);
        a[e.lo][e.hi] = x;
        a[e.hi][e.lo] = TUTTE_PRIME - x;
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = mod_pow(a[rank][col], TUTTE_PRIME - 2);
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = mul_mod(row[col], inv);
                for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + TUTTE_PRIME - mul_mod(f, p)) % TUTTE_PRIME;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % TUTTE_PRIME as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Largest matching by enumerating every edge subset.
    fn brute_force_matching_number(g: &Graph) -> usize {
        let m = g.edge_count();
        assert!(m <= 20);
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let mut used = 0u64;
            let mut ok = true;
            for i in 0..m {
                if mask >> i & 1 == 1 {
                    let e = g.edge(i);
                    let bits = (1u64 << e.lo) | (1u64 << e.hi);
                    if used & bits != 0 {
                        ok = false;
                        break;
                    }
                    used |= bits;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    /// Smallest vertex cover by enumerating vertex subsets.
    fn brute_force_vertex_cover(g: &Graph) -> usize {
        let n = g.vertex_count();
        (0u32..(1 << n))
            .filter(|mask| {
                g.edges()
                    .iter()
                    .all(|e| mask >> e.lo & 1 == 1 || mask >> e.hi & 1 == 1)
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(maximum_matching(&Graph::path(2)).size(), 1);
        let k4 = Graph::complete(4);
        let m = maximum_matching(&k4);
        assert_eq!(m.size(), 2);
        assert!(is_perfect(&k4, &m));
        assert_eq!(maximum_matching(&Graph::petersen()).size(), 5);
        assert_eq!(brute_force_matching_number(&Graph::petersen()), 5);
    }

    #[test]
    fn perfectness() {
        let c5 = Graph::cycle(5);
        assert!(!is_perfect(&c5, &maximum_matching(&c5)));
        let e = Graph::empty(0);
        assert!(is_perfect(&e, &maximum_matching(&e)));
    }

    #[test]
    fn maximality_certificate() {
        let k4 = Graph::complete(4);
        let pm = Matching::new(&k4, &[(0, 1), (2, 3)]).unwrap();
        assert!(verify_maximality(&k4, &pm));
        let single = Matching::new(&k4, &[(0, 1)]).unwrap();
        assert!(!verify_maximality(&k4, &single));

        let p4 = Graph::path(4);
        let middle = Matching::new(&p4, &[(1, 2)]).unwrap();
        assert!(middle.is_maximal_in(&p4));
        assert!(!verify_maximality(&p4, &middle));
        assert_eq!(brute_force_matching_number(&p4), 2);
    }

    #[test]
    fn construction_errors() {
        let p4 = Graph::path(4);
        assert_eq!(
            Matching::new(&p4, &[(0, 2)]),
            Err(MatchingError::NotAnEdge(Edge::new(0, 2)))
        );
        assert_eq!(
            Matching::new(&p4, &[(0, 1), (1, 2)]),
            Err(MatchingError::SharedVertex(1))
        );
    }

    #[test]
    fn blossom_needed() {
        // Two triangles joined by a path: greedy alone can get stuck.
        let g = Graph::new(
            8,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (5, 7),
            ],
        )
        .unwrap();
        assert_eq!(maximum_matching(&g).size(), 4);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1usize..=max_n).prop_flat_map(|n| {
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

    fn arb_bipartite() -> impl Strategy<Value = Graph> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(a, b)| {
            proptest::collection::vec(any::<bool>(), a * b).prop_map(move |mask| {
                let pairs: Vec<_> = (0..a * b)
                    .filter(|&i| mask[i])
                    .map(|i| (i / b, a + i % b))
                    .collect();
                Graph::new(a + b, &pairs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force(g in arb_graph(8).prop_filter("m <= 20", |g| g.edge_count() <= 20)) {
            let m = maximum_matching(&g);
            prop_assert!(m.belongs_to(&g));
            prop_assert_eq!(m.size(), brute_force_matching_number(&g));
            prop_assert!(verify_maximality(&g, &m));
            prop_assert!(m.is_maximal_in(&g));
            let (n, k) = (g.vertex_count(), m.size());
            prop_assert!(2 * k * g.max_degree() >= (n - 2 * k) * g.min_degree());
        }

        #[test]
        fn koenig(g in arb_bipartite().prop_filter("m <= 20", |g| g.edge_count() <= 20)) {
            prop_assert_eq!(maximum_matching(&g).size(), brute_force_vertex_cover(&g));
        }
    }
}
