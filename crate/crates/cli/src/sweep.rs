//! Batch runs that tabulate one CSV row per generated instance.

use anyhow::Result;
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use q2color::analysis::{check_ratio, diagnostics_general, AnalysisError, RatioVerdict, Verdict};
use q2color::approx::{color_with_matching, run_algorithm};
use q2color::coloring::{validate_coloring, EdgeColoring};
use q2color::generators::{
    gen_bipartite_regular, gen_blowup, gen_random_min_degree, gen_tight1, smallest_feasible_t,
    Tight1Params,
};
use q2color::graph::Graph;
use q2color::matching::maximum_matching;
use q2color::rational::{self, frac, int};

use crate::SweepArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    Tight1,
    Blowup,
    Bipartite,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: Family,
    pub count: usize,
    pub seed: u64,
    pub min_n: usize,
    pub max_n: usize,
    pub delta: usize,
    pub triangle_free: bool,
    pub kappa: usize,
    pub t: Option<usize>,
    pub d: usize,
    pub half: Option<usize>,
    pub budget: Option<u64>,
}

impl SweepConfig {
    pub fn from_args(a: &SweepArgs) -> Self {
        let f = &a.family;
        SweepConfig {
            family: f.family,
            count: a.count,
            seed: f.seed,
            min_n: f.min_n,
            max_n: f.max_n,
            delta: f.delta.unwrap_or(match f.family {
                Family::Tight1 => 8,
                _ => 3,
            }),
            triangle_free: f.triangle_free,
            kappa: f.kappa.unwrap_or(4),
            t: f.t,
            d: f.d.unwrap_or(3),
            half: f.half,
            budget: a.budget.get(),
        }
    }

    pub fn random(count: usize, seed: u64, min_n: usize, max_n: usize) -> Self {
        SweepConfig {
            family: Family::Random,
            count,
            seed,
            min_n,
            max_n,
            delta: 3,
            triangle_free: false,
            kappa: 4,
            t: None,
            d: 3,
            half: None,
            budget: Some(5_000_000),
        }
    }
}

/// One CSV row. Empty cells mean "not applicable to this family".
#[derive(Clone, Debug, Default, Serialize)]
pub struct Row {
    pub index: usize,
    pub family: String,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub delta: Option<usize>,
    pub matching_size: Option<usize>,
    pub kappa: Option<String>,
    pub perfect_matching: Option<bool>,
    pub triangle_free: Option<bool>,
    /// Construction parameter of the tight family.
    pub param_t: Option<usize>,
    pub alg: Option<usize>,
    pub opt: Option<usize>,
    pub opt_status: Option<String>,
    pub verdict: Option<String>,
    /// Colors of the witness coloring.
    pub colors: Option<usize>,
    pub color_bound: Option<String>,
    pub alg_m: Option<usize>,
    pub alg_m1: Option<usize>,
    pub components_m: Option<usize>,
    pub components_m1: Option<usize>,
    pub n0: Option<usize>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    /// Unselected path edges in the diagnostics.
    pub t: Option<usize>,
    pub h0: Option<usize>,
    pub h1: Option<usize>,
    pub h2: Option<usize>,
    /// Names of failed hard checks, `;`-separated.
    pub failed: String,
    pub error: String,
}

impl Row {
    pub fn hard_failure(&self) -> bool {
        !self.failed.is_empty()
    }

    fn fail(&mut self, name: &str) {
        if !self.failed.is_empty() {
            self.failed.push(';');
        }
        self.failed.push_str(name);
    }

    fn require(&mut self, name: &str, ok: bool) {
        if !ok {
            self.fail(name);
        }
    }

    fn graph_fields(&mut self, g: &Graph) {
        self.n = Some(g.vertex_count());
        self.m = Some(g.edge_count());
        self.delta = Some(g.min_degree());
        self.triangle_free = Some(g.is_triangle_free());
    }

    fn ratio_fields(&mut self, v: &RatioVerdict) {
        self.matching_size = Some(v.matching_size);
        self.kappa = Some(rational::to_string(&v.kappa));
        self.perfect_matching = Some(v.perfect_matching);
        self.alg = Some(v.alg);
        self.opt = v.opt;
        self.opt_status = Some(format!("{:?}", v.opt_status).to_lowercase());
        self.verdict = Some(format!("{:?}", v.verdict).to_lowercase());
        if v.verdict == Verdict::Fail {
            for c in v.checks.iter().filter(|c| c.failed_hard()) {
                self.fail(&c.name);
            }
        }
    }

    fn diagnostics_fields(&mut self, g: &Graph, coloring: &EdgeColoring) {
        if g.min_degree() < 3 {
            return;
        }
        let report = match diagnostics_general(g, coloring, &maximum_matching(g)) {
            Ok(r) => r,
            Err(AnalysisError::Violation(r)) => {
                for name in r.failed_assertions() {
                    self.fail(&name);
                }
                *r
            }
            Err(e) => {
                self.fail("diagnostics");
                self.error = e.to_string();
                return;
            }
        };
        self.n0 = report.n0;
        self.n1 = report.n1;
        self.n2 = report.n2;
        self.t = report.t;
        self.h0 = report.h0;
        self.h1 = report.h1;
        self.h2 = report.h2;
    }
}

pub struct SweepOutcome {
    pub rows: Vec<Row>,
    pub csv: String,
    pub hard_failures: usize,
}

/// Seed of instance `i`.
pub fn instance_seed(base: u64, i: usize) -> u64 {
    base.wrapping_add(i as u64)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let rows: Vec<Row> = (0..cfg.count)
        .into_par_iter()
        .map(|i| sweep_row(cfg, i))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r)?;
    }
    let csv = String::from_utf8(w.into_inner()?)?;
    let hard_failures = rows.iter().filter(|r| r.hard_failure()).count();
    Ok(SweepOutcome {
        rows,
        csv,
        hard_failures,
    })
}

fn sweep_row(cfg: &SweepConfig, i: usize) -> Row {
    let mut row = Row {
        index: i,
        family: format!("{:?}", cfg.family).to_lowercase(),
        ..Row::default()
    };
    match cfg.family {
        Family::Random => random_row(cfg, i, &mut row),
        Family::Tight1 => tight1_row(cfg, i, &mut row),
        Family::Blowup => blowup_row(cfg, i, &mut row),
        Family::Bipartite => bipartite_row(cfg, i, &mut row),
    }
    row
}

fn random_row(cfg: &SweepConfig, i: usize, row: &mut Row) {
    let seed = instance_seed(cfg.seed, i);
    row.seed = Some(seed);
    let n = ChaCha8Rng::seed_from_u64(seed).gen_range(cfg.min_n..=cfg.max_n.max(cfg.min_n));
    let g = match gen_random_min_degree(n, cfg.delta, seed, cfg.triangle_free) {
        Ok(g) => g,
        Err(e) => {
            row.error = e.to_string();
            return;
        }
    };
    row.graph_fields(&g);
    ratio_and_diagnostics(cfg, &g, row);
}

fn ratio_and_diagnostics(cfg: &SweepConfig, g: &Graph, row: &mut Row) {
    let verdict = match check_ratio(g, cfg.budget) {
        Ok(v) => v,
        Err(e) => {
            row.fail("ratio");
            row.error = e.to_string();
            return;
        }
    };
    row.ratio_fields(&verdict);
    let coloring = match verdict.witness {
        Some(w) => w,
        None => {
            run_algorithm(g)
                .expect("check_ratio accepted the graph")
                .coloring
        }
    };
    row.colors = Some(coloring.color_count());
    row.diagnostics_fields(g, &coloring);
}

fn tight1_row(cfg: &SweepConfig, i: usize, row: &mut Row) {
    let Some(t0) = cfg.t.or_else(|| smallest_feasible_t(cfg.kappa, cfg.delta)) else {
        row.error = format!("no feasible t for kappa={} delta={}", cfg.kappa, cfg.delta);
        return;
    };
    let p = Tight1Params {
        kappa: cfg.kappa,
        delta: cfg.delta,
        t: t0 + i * cfg.delta.saturating_sub(1),
    };
    let inst = match gen_tight1(p) {
        Ok(x) => x,
        Err(e) => {
            row.error = e.to_string();
            return;
        }
    };
    let g = &inst.graph;
    row.graph_fields(g);
    row.param_t = Some(p.t);
    let nu = maximum_matching(g).size();
    row.matching_size = Some(nu);
    row.kappa = Some(rational::to_string(&frac(g.vertex_count(), nu)));
    row.colors = Some(inst.coloring.color_count());
    row.color_bound = Some(rational::to_string(&p.color_bound()));
    match run_algorithm(g) {
        Ok(run) => row.alg = Some(run.alg_colors),
        Err(e) => row.error = e.to_string(),
    }
    let valid = validate_coloring(g, &inst.coloring).is_ok_and(|v| v.is_valid());
    row.require("witness_valid", valid);
    row.require(
        "colors_formula",
        inst.coloring.color_count() == inst.expected_colors(),
    );
    row.require(
        "colors_ge_bound",
        int(inst.coloring.color_count()) >= p.color_bound(),
    );
    row.require("vertices", g.vertex_count() == p.kappa * p.t);
    row.require("min_degree", g.min_degree() == p.delta);
    row.require("matching_number", nu == p.t);
}

fn blowup_row(cfg: &SweepConfig, i: usize, row: &mut Row) {
    let d = cfg.d;
    let half = cfg.half.unwrap_or(d) + i;
    let built = gen_bipartite_regular(half, d).and_then(|(base, c)| gen_blowup(&base, &c, d));
    let inst = match built {
        Ok(x) => x,
        Err(e) => {
            row.error = e.to_string();
            return;
        }
    };
    let g = &inst.graph;
    row.graph_fields(g);
    row.matching_size = Some(inst.m.size());
    row.kappa = Some(rational::to_string(&frac(g.vertex_count(), inst.m.size())));
    row.perfect_matching = Some(2 * inst.m.size() == g.vertex_count());
    let (Ok(with_m), Ok(with_m1)) = (
        color_with_matching(g, &inst.m),
        color_with_matching(g, &inst.m1),
    ) else {
        row.fail("alg_run");
        return;
    };
    let n = g.vertex_count();
    row.alg_m = Some(with_m.alg_colors);
    row.alg_m1 = Some(with_m1.alg_colors);
    row.components_m = Some(with_m.component_count);
    row.components_m1 = Some(with_m1.component_count);
    row.colors = Some(with_m.alg_colors);
    row.color_bound = Some(rational::to_string(&(frac(n, 2) * (int(1) + frac(2, d)))));
    row.require("components_m", with_m.component_count == n / d);
    row.require("components_m1", with_m1.component_count == 1);
    row.require(
        "alg_m",
        int(with_m.alg_colors) == frac(n, 2) * (int(1) + frac(2, d)),
    );
    row.require("alg_m1", with_m1.alg_colors == n / 2 + 1);
    let valid = validate_coloring(g, &with_m.coloring).is_ok_and(|v| v.is_valid());
    row.require("witness_valid", valid);
}

fn bipartite_row(cfg: &SweepConfig, i: usize, row: &mut Row) {
    let half = cfg.half.unwrap_or(cfg.d) + i;
    let g = match gen_bipartite_regular(half, cfg.d) {
        Ok((g, _)) => g,
        Err(e) => {
            row.error = e.to_string();
            return;
        }
    };
    row.graph_fields(&g);
    if !g.is_connected() {
        row.error = "graph is disconnected".into();
        return;
    }
    ratio_and_diagnostics(cfg, &g, row);
}
