//! Tight-example families and random test instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, EdgeColoring};
use crate::graph::{Graph, Vertex};
use crate::matching::Matching;
use crate::rational::{self, frac, int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("base graph is not {0}-regular")]
    NotRegular(usize),
    #[error("coloring is not a proper edge coloring with exactly {0} colors")]
    NotProper(usize),
    #[error("removing the color-{0} class disconnects the base graph")]
    OddDegreeDisconnected(usize),
}

fn infeasible(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::Infeasible(msg.into())
}

/// JSON header describing how an instance was built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    pub params: BTreeMap<String, i64>,
    /// Derived quantities as `p/q` strings.
    pub formulas_evaluated: BTreeMap<String, String>,
    /// Half-open vertex ranges of the named blocks.
    pub vertex_blocks: BTreeMap<String, [usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tight1Params {
    pub kappa: usize,
    pub delta: usize,
    pub t: usize,
}

impl Tight1Params {
    /// Returns `(h, α)` or the first violated constraint.
    pub fn derived(&self) -> Result<(usize, usize), GeneratorError> {
        let Tight1Params { kappa, delta, t } = *self;
        if kappa < 1 {
            return Err(infeasible("kappa must be positive"));
        }
        if kappa + 3 >= delta {
            return Err(infeasible(format!(
                "kappa < delta - 3 fails: {kappa} >= {}",
                delta as i64 - 3
            )));
        }
        let lower = frac((delta - 1) * (delta - 1), delta + 1 - kappa);
        if int(t) <= lower {
            return Err(infeasible(format!(
                "t > (delta-1)^2/(delta+1-kappa) fails: {t} <= {}",
                rational::to_string(&lower)
            )));
        }
        let h = frac(t * (delta + 1 - kappa), delta - 1) - int(delta - 1);
        if !h.is_integer() {
            return Err(infeasible(format!(
                "h = t(delta+1-kappa)/(delta-1) - (delta-1) = {} is not an integer",
                rational::to_string(&h)
            )));
        }
        if h <= int(0) {
            return Err(infeasible(format!("h = {} is not positive", h.numer())));
        }
        let h = *h.numer() as usize;
        if h > t - delta {
            return Err(infeasible(format!(
                "h <= t - delta fails: h = {h}, t - delta = {}",
                t - delta
            )));
        }
        Ok((h, (t - delta - h + 1) * (delta - 1)))
    }

    /// `t(1 + (κ-2)/(δ-1))`.
    pub fn color_bound(&self) -> Rational {
        int(self.t) * (int(1) + Rational::new(self.kappa as i64 - 2, self.delta as i64 - 1))
    }
}

/// Smallest feasible `t` for the given `κ` and `δ`, if one exists below a
/// search cap. Feasibility needs `κ ≥ 3`, so `κ = 2` never succeeds.
pub fn smallest_feasible_t(kappa: usize, delta: usize) -> Option<usize> {
    if kappa < 3 || kappa + 3 >= delta {
        return None;
    }
    let start = (delta - 1) * (delta - 1) / (delta + 1 - kappa) + 1;
    let cap = start + 4 * delta * delta;
    (start..=cap).find(|&t| Tight1Params { kappa, delta, t }.derived().is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tight1Instance {
    pub params: Tight1Params,
    pub h: usize,
    pub alpha: usize,
    pub graph: Graph,
    pub coloring: EdgeColoring,
    /// The A–S matching.
    pub matching: Matching,
}

impl Tight1Instance {
    /// `2t - h - δ + 2`.
    pub fn expected_colors(&self) -> usize {
        2 * self.params.t + 2 - self.h - self.params.delta
    }

    pub fn provenance(&self) -> Provenance {
        let Tight1Params { kappa, delta, t } = self.params;
        let n = self.graph.vertex_count();
        Provenance {
            family: "tight1".into(),
            params: [("kappa", kappa), ("delta", delta), ("t", t)]
                .into_iter()
                .map(|(k, v)| (k.to_owned(), v as i64))
                .collect(),
            formulas_evaluated: [
                ("h", int(self.h)),
                ("alpha", int(self.alpha)),
                ("n", int(n)),
                ("colors", int(self.expected_colors())),
                ("color_bound", self.params.color_bound()),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_owned(), rational::to_string(&v)))
            .collect(),
            vertex_blocks: [
                ("S1", [0, delta]),
                ("S2", [delta, t]),
                ("A", [t, 2 * t]),
                ("B", [2 * t, 2 * t + self.alpha]),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v))
            .collect(),
        }
    }
}

/// Bipartite tight example. Vertices: `S1 = [0, δ)`, `S2 = [δ, t)`,
/// `A = [t, 2t)`, `B = [2t, 2t + α)`. A-vertex `t + i` is matched to `i`.
pub fn gen_tight1(p: Tight1Params) -> Result<Tight1Instance, GeneratorError> {
    let (h, alpha) = p.derived()?;
    let Tight1Params { delta, t, .. } = p;
    let n = 2 * t + alpha;
    let block = delta - 1;

    let mut triples: Vec<(Vertex, Vertex, Color)> = Vec::new();
    for i in 0..t {
        triples.push((i, t + i, i as Color + 1));
    }
    for x in t..n {
        for s in 0..delta {
            if x != t + s {
                triples.push((s, x, t as Color + 1));
            }
        }
    }
    for k in 0..(t - delta) {
        let u = delta + k;
        // u_1..u_h share block 0; u_{h+j} owns block j.
        let (b, color) = if k < h {
            (0, t + 2)
        } else {
            let j = k + 1 - h;
            (j, t + 2 + j)
        };
        for v in 2 * t + b * block..2 * t + (b + 1) * block {
            triples.push((u, v, color as Color));
        }
    }

    let pairs: Vec<(Vertex, Vertex)> = triples.iter().map(|&(u, v, _)| (u, v)).collect();
    let graph = Graph::new(n, &pairs).expect("construction is simple");
    let coloring =
        EdgeColoring::from_triples(&graph, &triples).expect("construction colors every edge");
    let matching = Matching::new(&graph, &(0..t).map(|i| (i, t + i)).collect::<Vec<_>>())
        .expect("A-S matching");
    Ok(Tight1Instance {
        params: p,
        h,
        alpha,
        graph,
        coloring,
        matching,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupInstance {
    pub d: usize,
    pub base_vertices: usize,
    pub graph: Graph,
    /// Cross edges between cliques.
    pub m: Matching,
    /// Matching whose removal keeps the graph connected.
    pub m1: Matching,
}

impl BlowupInstance {
    pub fn provenance(&self) -> Provenance {
        let n = self.graph.vertex_count();
        let d = self.d;
        Provenance {
            family: "blowup".into(),
            params: [
                ("d".to_owned(), d as i64),
                ("base_vertices".to_owned(), self.base_vertices as i64),
            ]
            .into(),
            formulas_evaluated: [
                ("n", int(n)),
                ("alg_with_m", frac(n, 2) * (int(1) + frac(2, d))),
                ("alg_with_m1", frac(n, 2) + int(1)),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_owned(), rational::to_string(&v)))
            .collect(),
            vertex_blocks: (0..self.base_vertices)
                .map(|v| (format!("K{v}"), [v * d, (v + 1) * d]))
                .collect(),
        }
    }
}

/// Replaces every base vertex `v` by a clique on `v*d .. v*d + d` and joins
/// copy `i` of `u` and `v` when `uv` has color `i`.
pub fn gen_blowup(
    base: &Graph,
    coloring: &EdgeColoring,
    d: usize,
) -> Result<BlowupInstance, GeneratorError> {
    let n = base.vertex_count();
    if d == 0 || (0..n).any(|v| base.degree(v) != d) {
        return Err(GeneratorError::NotRegular(d));
    }
    let proper = coloring.color_count() == d
        && (0..n).all(|v| {
            let mut seen: Vec<Color> = base.incident_edges(v).map(|i| coloring.color(i)).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == d
        });
    if !proper {
        return Err(GeneratorError::NotProper(d));
    }
    if d % 2 == 1 {
        let f: Vec<_> = coloring.classes()[d - 1]
            .iter()
            .map(|&i| base.edge(i))
            .collect();
        if base
            .components_after_removal(&f)
            .expect("class edges are in the base")
            .len()
            > 1
        {
            return Err(GeneratorError::OddDegreeDisconnected(d));
        }
    }

    let copy = |v: Vertex, i: usize| v * d + i;
    let mut pairs = Vec::new();
    let mut cross = Vec::new();
    for v in 0..n {
        for i in 0..d {
            for j in i + 1..d {
                pairs.push((copy(v, i), copy(v, j)));
            }
        }
    }
    for (idx, e) in base.edges().iter().enumerate() {
        let i = coloring.color(idx) as usize - 1;
        let pair = (copy(e.lo, i), copy(e.hi, i));
        pairs.push(pair);
        cross.push((pair, i));
    }
    let graph = Graph::new(n * d, &pairs).expect("blowup is simple");
    let m_pairs: Vec<_> = cross.iter().map(|&(p, _)| p).collect();
    let m = Matching::new(&graph, &m_pairs).expect("cross edges form a matching");

    let mut m1_pairs = Vec::new();
    for v in 0..n {
        for k in 0..d / 2 {
            m1_pairs.push((copy(v, 2 * k), copy(v, 2 * k + 1)));
        }
    }
    if d % 2 == 1 {
        m1_pairs.extend(cross.iter().filter(|&&(_, i)| i == d - 1).map(|&(p, _)| p));
    }
    let m1 = Matching::new(&graph, &m1_pairs).expect("clique pairs form a matching");
    Ok(BlowupInstance {
        d,
        base_vertices: n,
        graph,
        m,
        m1,
    })
}

/// Circulant bipartite graph: `u_j = j`, `w_k = half + k`, with
/// `u_j ~ w_{(j+i) mod half}` colored `i + 1` for `i < d`.
pub fn gen_bipartite_regular(
    half: usize,
    d: usize,
) -> Result<(Graph, EdgeColoring), GeneratorError> {
    if d > half {
        return Err(infeasible(format!("d <= half fails: {d} > {half}")));
    }
    if d == 0 {
        return Err(infeasible("d must be positive"));
    }
    let triples: Vec<(Vertex, Vertex, Color)> = (0..half)
        .flat_map(|j| (0..d).map(move |i| (j, half + (j + i) % half, i as Color + 1)))
        .collect();
    let pairs: Vec<_> = triples.iter().map(|&(u, v, _)| (u, v)).collect();
    let g = Graph::new(2 * half, &pairs).expect("circulant is simple");
    let labels = triples
        .iter()
        .fold(vec![0; g.edge_count()], |mut acc, &(u, v, c)| {
            acc[g.edge_index(u, v).unwrap()] = c;
            acc
        });
    let coloring = EdgeColoring::from_labels(&g, labels).expect("colors 1..d all used");
    Ok((g, coloring))
}

/// Connected graph with minimum degree at least `delta`, deterministic per
/// seed. A random Hamilton path gives connectivity, a few random extra
/// edges vary the density, then deficient vertices get random neighbors.
/// With `triangle_free` the output is bipartite with sides `⌈n/2⌉, ⌊n/2⌋`.
pub fn gen_random_min_degree(
    n: usize,
    delta: usize,
    seed: u64,
    triangle_free: bool,
) -> Result<Graph, GeneratorError> {
    if n <= delta {
        return Err(infeasible(format!("n > delta fails: {n} <= {delta}")));
    }
    if triangle_free && n / 2 < delta {
        return Err(infeasible(format!(
            "bipartite sides of size {} cannot give min degree {delta}",
            n / 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    let add = |u: Vertex, v: Vertex, adj: &mut Vec<Vec<bool>>, deg: &mut Vec<usize>| {
        if !adj[u][v] {
            adj[u][v] = true;
            adj[v][u] = true;
            deg[u] += 1;
            deg[v] += 1;
        }
    };
    // Side of each vertex in the bipartite case.
    let side = |v: Vertex| v % 2;
    let allowed = |u: Vertex, v: Vertex| u != v && (!triangle_free || side(u) != side(v));

    let order: Vec<Vertex> = if triangle_free {
        let mut even: Vec<Vertex> = (0..n).step_by(2).collect();
        let mut odd: Vec<Vertex> = (1..n).step_by(2).collect();
        even.shuffle(&mut rng);
        odd.shuffle(&mut rng);
        (0..n)
            .map(|k| if k % 2 == 0 { even[k / 2] } else { odd[k / 2] })
            .collect()
    } else {
        let mut o: Vec<Vertex> = (0..n).collect();
        o.shuffle(&mut rng);
        o
    };
    for w in order.windows(2) {
        add(w[0], w[1], &mut adj, &mut deg);
    }
    let extra = rng.gen_range(0..=n);
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if allowed(u, v) {
            add(u, v, &mut adj, &mut deg);
        }
    }
    for u in 0..n {
        while deg[u] < delta {
            let candidates: Vec<Vertex> = (0..n).filter(|&v| allowed(u, v) && !adj[u][v]).collect();
            let v = *candidates.choose(&mut rng).expect("a non-neighbor remains");
            add(u, v, &mut adj, &mut deg);
        }
    }
    let pairs: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| adj[u][v])
        .collect();
    Ok(Graph::new(n, &pairs).expect("generated graph is simple"))
}

/// Random valid edge 2-coloring. Edges are colored in random order with a
/// shared color, a color one endpoint already has, or a fresh color; when
/// both palettes are full and disjoint, one class of each is merged.
pub fn random_valid_coloring(g: &Graph, seed: u64) -> EdgeColoring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(&mut rng);
    let mut labels: Vec<Color> = vec![0; g.edge_count()];
    let mut next: Color = 1;
    let palette = |labels: &[Color], v: Vertex| {
        let mut p: Vec<Color> = g
            .incident_edges(v)
            .map(|i| labels[i])
            .filter(|&c| c != 0)
            .collect();
        p.sort_unstable();
        p.dedup();
        p
    };
    for i in order {
        let e = g.edge(i);
        let (pu, pv) = (palette(&labels, e.lo), palette(&labels, e.hi));
        let mut options: Vec<Color> = Vec::new();
        options.extend(pu.iter().filter(|c| pv.contains(c) || pv.len() < 2));
        options.extend(pv.iter().filter(|c| !pu.contains(c) && pu.len() < 2));
        let fresh = pu.len() < 2 && pv.len() < 2;
        let color = if fresh && (options.is_empty() || rng.gen_bool(0.5)) {
            next += 1;
            next - 1
        } else if let Some(&c) = options.choose(&mut rng) {
            c
        } else {
            let keep = *pu.choose(&mut rng).unwrap();
            let gone = *pv.choose(&mut rng).unwrap();
            for l in labels.iter_mut() {
                if *l == gone {
                    *l = keep;
                }
            }
            keep
        };
        labels[i] = color;
    }
    EdgeColoring::normalized(g, &labels).expect("every edge colored")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::color_with_matching;
    use crate::coloring::validate_coloring;
    use crate::matching::{is_perfect, maximum_matching};
    use proptest::prelude::*;

    #[test]
    fn tight1_reference_instance() {
        let p = Tight1Params {
            kappa: 4,
            delta: 8,
            t: 21,
        };
        let inst = gen_tight1(p).unwrap();
        assert_eq!((inst.h, inst.alpha), (8, 42));
        let g = &inst.graph;
        assert_eq!(g.vertex_count(), 84);
        assert_eq!(g.min_degree(), 8);
        assert!(g.is_bipartite());
        assert!(validate_coloring(g, &inst.coloring).unwrap().is_valid());
        assert_eq!(inst.coloring.color_count(), 28);
        assert_eq!(inst.expected_colors(), 28);
        assert_eq!(p.color_bound(), int(27));
        assert_eq!(maximum_matching(g).size(), 21);
        assert_eq!(inst.matching.size(), 21);
    }

    #[test]
    fn tight1_rejections() {
        let err = gen_tight1(Tight1Params {
            kappa: 4,
            delta: 8,
            t: 20,
        })
        .unwrap_err();
        assert!(err.to_string().contains("not an integer"), "{err}");
        let err = gen_tight1(Tight1Params {
            kappa: 5,
            delta: 8,
            t: 21,
        })
        .unwrap_err();
        assert!(err.to_string().contains("kappa < delta - 3"), "{err}");
        let err = gen_tight1(Tight1Params {
            kappa: 4,
            delta: 8,
            t: 7,
        })
        .unwrap_err();
        assert!(err.to_string().contains("t > "), "{err}");
        assert_eq!(smallest_feasible_t(2, 9), None);
    }

    #[test]
    fn smallest_t_is_feasible_and_minimal() {
        for (kappa, delta) in [(3, 7), (4, 8), (3, 10), (5, 12)] {
            let t = smallest_feasible_t(kappa, delta).unwrap();
            let inst = gen_tight1(Tight1Params { kappa, delta, t }).unwrap();
            assert_eq!(inst.graph.vertex_count(), kappa * t);
            for s in 1..t {
                assert!(Tight1Params { kappa, delta, t: s }.derived().is_err());
            }
        }
        assert_eq!(smallest_feasible_t(4, 8), Some(14));
    }

    #[test]
    fn tight1_family_invariants() {
        for kappa in 3..6 {
            for delta in kappa + 4..kappa + 7 {
                let Some(t0) = smallest_feasible_t(kappa, delta) else {
                    continue;
                };
                for t in (t0..t0 + 3 * (delta - 1))
                    .filter(|&t| Tight1Params { kappa, delta, t }.derived().is_ok())
                {
                    let p = Tight1Params { kappa, delta, t };
                    let inst = gen_tight1(p).unwrap();
                    let g = &inst.graph;
                    assert_eq!(g.vertex_count(), kappa * t);
                    assert_eq!(g.min_degree(), delta);
                    assert!(validate_coloring(g, &inst.coloring).unwrap().is_valid());
                    assert_eq!(inst.coloring.color_count(), inst.expected_colors());
                    assert!(int(inst.expected_colors()) >= p.color_bound());
                    assert_eq!(maximum_matching(g).size(), t);
                }
            }
        }
    }

    #[test]
    fn bipartite_regular_examples() {
        let (g, c) = gen_bipartite_regular(3, 3).unwrap();
        assert_eq!(g, Graph::complete_bipartite(3, 3));
        assert_eq!(c.color_count(), 3);
        let (g, c) = gen_bipartite_regular(5, 2).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert!(g.is_connected() && (0..10).all(|v| g.degree(v) == 2));
        assert_eq!(c.color_count(), 2);
        let (g, c) = gen_bipartite_regular(5, 4).unwrap();
        let f: Vec<_> = c.classes()[3].iter().map(|&i| g.edge(i)).collect();
        assert_eq!(g.components_after_removal(&f).unwrap().len(), 1);
        assert!(gen_bipartite_regular(3, 4).is_err());
    }

    #[test]
    fn blowup_k33() {
        let (base, c) = gen_bipartite_regular(3, 3).unwrap();
        let b = gen_blowup(&base, &c, 3).unwrap();
        let g = &b.graph;
        assert_eq!(g.vertex_count(), 18);
        assert!((0..18).all(|v| g.degree(v) == 3));
        assert!(is_perfect(g, &b.m) && is_perfect(g, &b.m1));
        let with_m = color_with_matching(g, &b.m).unwrap();
        let with_m1 = color_with_matching(g, &b.m1).unwrap();
        assert_eq!((with_m.component_count, with_m.alg_colors), (6, 15));
        assert_eq!((with_m1.component_count, with_m1.alg_colors), (1, 10));
    }

    #[test]
    fn blowup_degree_four() {
        let (base, c) = gen_bipartite_regular(5, 4).unwrap();
        let b = gen_blowup(&base, &c, 4).unwrap();
        assert_eq!(b.graph.vertex_count(), 40);
        let with_m = color_with_matching(&b.graph, &b.m).unwrap();
        let with_m1 = color_with_matching(&b.graph, &b.m1).unwrap();
        assert_eq!((with_m.component_count, with_m.alg_colors), (10, 30));
        assert_eq!((with_m1.component_count, with_m1.alg_colors), (1, 21));
    }

    #[test]
    fn blowup_rejections() {
        let g = Graph::star(3);
        let c = EdgeColoring::from_labels(&g, vec![1, 2, 3]).unwrap();
        assert_eq!(gen_blowup(&g, &c, 3), Err(GeneratorError::NotRegular(3)));
        let k4 = Graph::complete(4);
        let c = EdgeColoring::from_labels(&k4, vec![1, 2, 3, 3, 2, 2]).unwrap();
        assert_eq!(gen_blowup(&k4, &c, 3), Err(GeneratorError::NotProper(3)));
        // K4 with its three perfect matchings: removing one leaves a 4-cycle.
        let c = EdgeColoring::from_labels(&k4, vec![1, 2, 3, 3, 2, 1]).unwrap();
        assert!(gen_blowup(&k4, &c, 3).is_ok());
        // Two disjoint K4s: the color-3 class removal keeps them apart.
        let two = Graph::new(
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (4, 5),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (6, 7),
            ],
        )
        .unwrap();
        let c = EdgeColoring::from_labels(&two, vec![1, 2, 3, 3, 2, 1, 1, 2, 3, 3, 2, 1]).unwrap();
        assert_eq!(
            gen_blowup(&two, &c, 3),
            Err(GeneratorError::OddDegreeDisconnected(3))
        );
    }

    #[test]
    fn random_examples() {
        let g = gen_random_min_degree(8, 3, 1, false).unwrap();
        assert!(g.is_connected() && g.min_degree() >= 3);
        assert_eq!(g, gen_random_min_degree(8, 3, 1, false).unwrap());
        let b = gen_random_min_degree(10, 3, 1, true).unwrap();
        assert!(b.is_bipartite() && b.is_connected() && b.min_degree() >= 3);
        assert!(gen_random_min_degree(3, 3, 0, false).is_err());
        assert!(gen_random_min_degree(7, 4, 0, true).is_err());
    }

    proptest! {
        #[test]
        fn random_graphs_meet_contract(n in 4usize..14, delta in 1usize..6, seed: u64, tf: bool) {
            prop_assume!(n > delta && (!tf || n / 2 >= delta));
            let g = gen_random_min_degree(n, delta, seed, tf).unwrap();
            prop_assert!(g.is_connected());
            prop_assert!(g.min_degree() >= delta);
            prop_assert!(!tf || g.is_bipartite());
        }

        #[test]
        fn random_colorings_are_valid(n in 4usize..12, seed: u64) {
            let g = gen_random_min_degree(n, 3, seed, false).unwrap();
            let c = random_valid_coloring(&g, seed);
            prop_assert!(validate_coloring(&g, &c).unwrap().is_valid());
            prop_assert_eq!(c, random_valid_coloring(&g, seed));
        }
    }
}
