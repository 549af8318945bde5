//! Command-line experiments over the `q2color` library.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use q2color::analysis::{
    characteristic_subgraph, check_ratio, diagnostics_general, AnalysisError, Verdict,
};
use q2color::approx::{color_with_matching, run_algorithm};
use q2color::coloring::{validate_coloring, EdgeColoring, Validity};
use q2color::exact::exact_opt;
use q2color::generators::{
    gen_bipartite_regular, gen_blowup, gen_random_min_degree, gen_tight1, random_valid_coloring,
    smallest_feasible_t, Provenance, Tight1Params,
};
use q2color::graph::Graph;
use q2color::io;
use q2color::matching::{maximum_matching, Matching};
use q2color::rational;

pub mod sweep;

pub use sweep::{run_sweep, Family, SweepConfig, SweepOutcome};

#[derive(Parser, Debug)]
#[command(
    name = "q2color",
    version,
    about = "Maximum edge 2-coloring experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Edge-list file.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArg {
    /// Search node budget for the exact oracle; 0 means unlimited.
    #[arg(long, env = "Q2_BUDGET", default_value_t = 5_000_000)]
    pub budget: u64,
}

impl BudgetArg {
    pub fn get(&self) -> Option<u64> {
        (self.budget > 0).then_some(self.budget)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the matching-based algorithm.
    Color {
        #[command(flatten)]
        io: InputArgs,
        /// Use this maximal matching instead of computing a maximum one.
        #[arg(long)]
        matching: Option<PathBuf>,
        /// Write the coloring here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compute the optimum with the exact oracle.
    Exact {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        budget: BudgetArg,
        /// Write the optimal coloring here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check that a coloring uses at most two colors per vertex.
    Verify {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Build the characteristic subgraph of a coloring.
    Char {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Counting diagnostics; defaults to the algorithm's own coloring.
    Diag {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Maximum matching to analyse; computed when absent.
        #[arg(long)]
        matching: Option<PathBuf>,
    },
    /// Compare OPT with ALG against every applicable bound.
    Ratio {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Generate an instance.
    Gen(GenArgs),
    /// Generate many instances and tabulate them as CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = Family::Random)]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub kappa: Option<usize>,
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub half: Option<usize>,
    #[arg(long)]
    pub triangle_free: bool,
    #[arg(long, default_value_t = 6)]
    pub min_n: usize,
    #[arg(long, default_value_t = 9)]
    pub max_n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Output prefix: writes `.edges`, `.coloring`, `.matching` and `.json`.
    /// Without it the edge list goes to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[command(flatten)]
    pub budget: BudgetArg,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    io::parse_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_coloring(path: &Path, g: &Graph) -> Result<EdgeColoring> {
    io::parse_coloring(&read(path)?, g).with_context(|| format!("parsing {}", path.display()))
}

fn load_matching(path: &Path, g: &Graph) -> Result<Matching> {
    io::parse_matching(&read(path)?, g).with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    value: &T,
    text: impl FnOnce() -> String,
) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value)?)?,
        Format::Text => writeln!(out, "{}", text())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(value)?;
            out.write_all(&w.into_inner()?)?;
        }
    }
    Ok(())
}

/// Runs one command, writing reports to `out`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Color {
            io: a,
            matching,
            output,
        } => {
            let g = load_graph(&a.input)?;
            let run = match matching {
                Some(p) => color_with_matching(&g, &load_matching(&p, &g)?)?,
                None => run_algorithm(&g)?,
            };
            if let Some(p) = output {
                write_file(&p, &io::write_coloring(&g, &run.coloring))?;
            }
            let report = run.report(&g);
            emit(out, a.format, &report, || {
                format!(
                    "alg_colors={} matching_size={} components={}",
                    report.alg_colors, report.matching_size, report.components
                )
            })?;
            Ok(0)
        }
        Command::Exact {
            io: a,
            budget,
            output,
        } => {
            let g = load_graph(&a.input)?;
            let res = exact_opt(&g, budget.get());
            if let (Some(p), Some(w)) = (output, &res.witness) {
                write_file(&p, &io::write_coloring(&g, w))?;
            }
            let report = res.report();
            emit(out, a.format, &report, || match report.opt {
                Some(o) => format!("opt={o} nodes={}", report.nodes_explored),
                None => format!("opt=unknown nodes={}", report.nodes_explored),
            })?;
            Ok(if res.is_exact() { 0 } else { 3 })
        }
        Command::Verify { io: a, coloring } => {
            let g = load_graph(&a.input)?;
            let c = load_coloring(&coloring, &g)?;
            let v = validate_coloring(&g, &c)?;
            emit(out, a.format, &v, || match &v {
                Validity::Valid => format!("valid colors={}", c.color_count()),
                Validity::Violation { vertex, palette } => {
                    format!("invalid vertex={vertex} palette={palette:?}")
                }
            })?;
            Ok(if v.is_valid() { 0 } else { 1 })
        }
        Command::Char { io: a, coloring } => {
            let g = load_graph(&a.input)?;
            let c = load_coloring(&coloring, &g)?;
            let report = characteristic_subgraph(&g, &c)?.report(&g);
            emit(out, a.format, &report, || {
                format!(
                    "colors={} paths={} n0={} n1={} n2={}",
                    report.colors,
                    report.paths.len(),
                    report.n0,
                    report.n1,
                    report.n2
                )
            })?;
            Ok(0)
        }
        Command::Diag {
            io: a,
            coloring,
            matching,
        } => {
            let g = load_graph(&a.input)?;
            let m = match matching {
                Some(p) => load_matching(&p, &g)?,
                None => maximum_matching(&g),
            };
            let c = match coloring {
                Some(p) => load_coloring(&p, &g)?,
                None => run_algorithm(&g)?.coloring,
            };
            let (report, code) = match diagnostics_general(&g, &c, &m) {
                Ok(r) => (r, 0),
                Err(AnalysisError::Violation(r)) => (*r, 1),
                Err(e) => return Err(e.into()),
            };
            emit(out, a.format, &report, || {
                report
                    .checks
                    .iter()
                    .map(|c| {
                        format!(
                            "{} {} {} {} {}",
                            c.name,
                            rational::to_string(&c.lhs),
                            if c.relation == q2color::analysis::Relation::Le {
                                "<="
                            } else {
                                "=="
                            },
                            rational::to_string(&c.rhs),
                            if c.holds { "ok" } else { "FAIL" }
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
            Ok(code)
        }
        Command::Ratio { io: a, budget } => {
            let g = load_graph(&a.input)?;
            let v = check_ratio(&g, budget.get())?;
            emit(out, a.format, &v, || {
                let mut s = format!(
                    "{} opt={} alg={}",
                    match v.verdict {
                        Verdict::Pass => "pass",
                        Verdict::Fail => "fail",
                        Verdict::Skipped => "skipped",
                    },
                    v.opt.map_or("unknown".to_owned(), |o| o.to_string()),
                    v.alg
                );
                for c in &v.checks {
                    s.push_str(&format!(
                        " {}:{}<={}:{}",
                        c.name,
                        rational::to_string(&c.lhs),
                        rational::to_string(&c.rhs),
                        if c.holds { "ok" } else { "FAIL" }
                    ));
                }
                s
            })?;
            Ok(if v.verdict == Verdict::Fail { 1 } else { 0 })
        }
        Command::Gen(args) => generate(&args, out),
        Command::Sweep(args) => {
            let cfg = SweepConfig::from_args(&args);
            let outcome = run_sweep(&cfg)?;
            match &args.output {
                Some(p) => write_file(p, &outcome.csv)?,
                None => out.write_all(outcome.csv.as_bytes())?,
            }
            Ok(if outcome.hard_failures > 0 { 1 } else { 0 })
        }
    }
}

/// Files produced by `gen`.
pub struct Generated {
    pub graph: Graph,
    pub coloring: Option<EdgeColoring>,
    pub matchings: Vec<(&'static str, Matching)>,
    pub provenance: Provenance,
}

pub fn build_instance(f: &FamilyArgs) -> Result<Generated> {
    Ok(match f.family {
        Family::Tight1 => {
            let kappa = f.kappa.unwrap_or(4);
            let delta = f.delta.unwrap_or(8);
            let t = match f.t {
                Some(t) => t,
                None => smallest_feasible_t(kappa, delta)
                    .with_context(|| format!("no feasible t for kappa={kappa} delta={delta}"))?,
            };
            let inst = gen_tight1(Tight1Params { kappa, delta, t })?;
            Generated {
                provenance: inst.provenance(),
                graph: inst.graph,
                coloring: Some(inst.coloring),
                matchings: vec![("matching", inst.matching)],
            }
        }
        Family::Blowup => {
            let d = f.d.unwrap_or(3);
            let half = f.half.unwrap_or(d);
            let (base, c) = gen_bipartite_regular(half, d)?;
            let inst = gen_blowup(&base, &c, d)?;
            let witness = color_with_matching(&inst.graph, &inst.m)?.coloring;
            Generated {
                provenance: inst.provenance(),
                graph: inst.graph,
                coloring: Some(witness),
                matchings: vec![("m", inst.m), ("m1", inst.m1)],
            }
        }
        Family::Bipartite => {
            let d = f.d.unwrap_or(3);
            let half = f.half.unwrap_or(d);
            let (g, c) = gen_bipartite_regular(half, d)?;
            Generated {
                provenance: Provenance {
                    family: "bipartite".into(),
                    params: [("d".to_owned(), d as i64), ("half".to_owned(), half as i64)].into(),
                    formulas_evaluated: Default::default(),
                    vertex_blocks: [
                        ("U".to_owned(), [0, half]),
                        ("W".to_owned(), [half, 2 * half]),
                    ]
                    .into(),
                },
                graph: g,
                coloring: Some(c),
                matchings: Vec::new(),
            }
        }
        Family::Random => {
            let delta = f.delta.unwrap_or(3);
            let n = f.max_n;
            let g = gen_random_min_degree(n, delta, f.seed, f.triangle_free)?;
            let c = random_valid_coloring(&g, f.seed);
            Generated {
                provenance: Provenance {
                    family: "random".into(),
                    params: [
                        ("n".to_owned(), n as i64),
                        ("delta".to_owned(), delta as i64),
                        ("seed".to_owned(), f.seed as i64),
                        ("triangle_free".to_owned(), f.triangle_free as i64),
                    ]
                    .into(),
                    formulas_evaluated: Default::default(),
                    vertex_blocks: Default::default(),
                },
                matchings: vec![("matching", maximum_matching(&g))],
                graph: g,
                coloring: Some(c),
            }
        }
    })
}

fn generate(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = build_instance(&args.family)?;
    let Some(prefix) = &args.output else {
        out.write_all(io::write_edge_list(&inst.graph).as_bytes())?;
        return Ok(0);
    };
    let path = |ext: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    write_file(&path(".edges"), &io::write_edge_list(&inst.graph))?;
    if let Some(c) = &inst.coloring {
        write_file(&path(".coloring"), &io::write_coloring(&inst.graph, c))?;
    }
    for (name, m) in &inst.matchings {
        write_file(&path(&format!(".{name}")), &io::write_matching(m))?;
    }
    write_file(
        &path(".json"),
        &(serde_json::to_string_pretty(&inst.provenance)? + "\n"),
    )?;
    writeln!(out, "{}", serde_json::to_string(&inst.provenance)?)?;
    Ok(0)
}

/// Parses arguments and runs; used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
