//! `entrocol`: bounds, seeded coloring runs, record counts and validators.

mod files;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use entropy_coloring::bounds::{
    kappa_preset, optimal_alpha, preset_terms, round3, BoundsError, Pattern, PresetReport, Problem, ALPHA_TABLE_DELTAS,
    DEFAULT_SET_CAP,
};
use entropy_coloring::families::{self, BuildError, Family};
use entropy_coloring::records::{self, IntTerm, RecordsError};
use entropy_coloring::validators::{self, Scope, ValidateError, Verdict};
use entropy_coloring::{
    decode, load_graph, load_rotation, run, run_list, BadEventFamily, EngineError, EngineInput, Graph, Manifest,
    PlaneGraph, Status,
};

// A closed stdout (e.g. piping into `head`) ends the program quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! put {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if write!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("contract violation: {0}")]
    Contract(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Contract(_) => 3,
            _ => 2,
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RecordsError> for CliError {
    fn from(e: RecordsError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ValidateError> for CliError {
    fn from(e: ValidateError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Contract { .. } | EngineError::Family { .. } => CliError::Contract(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "entrocol", version, about = "Randomized coloring with invertible records")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color bound for a problem preset.
    Bound(BoundArgs),
    /// Reproduce a named table as TSV.
    Table {
        #[arg(long)]
        name: String,
    },
    /// Run the coloring engine and write the record.
    Color(ColorArgs),
    /// Run, decode and compare the input vector.
    Roundtrip(RoundtripArgs),
    /// Record counts b_t and r_t.
    CountRecords(CountArgs),
    /// Check a coloring against a property.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct ProblemArgs {
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long)]
    gamma: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<u64>,
    /// Edge threshold for the pair-forbidden problem.
    #[arg(long)]
    m: Option<u64>,
    /// Forbidden patterns, one `path K` or `graph V E` per line.
    #[arg(long)]
    family_file: Option<PathBuf>,
    /// Replace α by its optimal value for the given Δ.
    #[arg(long)]
    optimize_alpha: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Use finite sums for an n-vertex host instead of closed forms.
    #[arg(long)]
    exact_n: Option<usize>,
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Edge-list graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Rotation-system file; required for facial families.
    #[arg(long)]
    embedding: Option<PathBuf>,
    #[arg(long)]
    family: String,
    /// Defaults to the largest codegree of the graph (at least 1).
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Anchor edge of the facial edge family (1-based edge index).
    #[arg(long, default_value_t = 1)]
    estar: usize,
}

#[derive(Args)]
struct ColorArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    kappa: u32,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    /// Explicit input vector instead of a seed.
    #[arg(long, conflicts_with = "seed")]
    vector: Option<PathBuf>,
    /// Per-element color lists (`x: c1 c2 ...`).
    #[arg(long)]
    lists: Option<PathBuf>,
    /// Where to write the coloring; omitted means not written.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Where to write manifest and record; defaults to standard output.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Check every uncolor step against reconstruction.
    #[arg(long)]
    self_check: bool,
}

#[derive(Args)]
struct RoundtripArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    kappa: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    budget: usize,
    /// Number of consecutive seeds to try.
    #[arg(long, default_value_t = 1)]
    cases: u64,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Terms `C:s,C:s,...`.
    #[arg(long, conflicts_with = "problem")]
    terms: Option<String>,
    /// Level cap; for problems also the host size.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    tmax: usize,
    /// Cross-check with exhaustive enumeration.
    #[arg(long)]
    brute: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    embedding: Option<PathBuf>,
    #[arg(long)]
    coloring: PathBuf,
    /// proper, acyclic, nonrep, nonrep-edge, facial, facial-edge,
    /// r-acyclic, star or pair-forbidden.
    #[arg(long)]
    property: String,
    #[arg(long)]
    r: Option<usize>,
    /// Pattern graph (edge-list file) for pair-forbidden.
    #[arg(long)]
    pattern: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn require<T>(v: Option<T>, flag: &str, problem: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {problem}")))
}

fn build_problem(a: &ProblemArgs) -> Result<Problem, CliError> {
    let name = a.problem.as_deref().ok_or_else(|| CliError::Usage("--problem is required".into()))?;
    let delta = || require(a.delta, "delta", name);
    Ok(match name {
        "acyclic-gamma" => Problem::AcyclicGamma { delta: delta()?, gamma: a.gamma.unwrap_or(1) },
        "acyclic-v1" => {
            let d = delta()?;
            let alpha = if a.optimize_alpha { optimal_alpha(d)? } else { a.alpha.unwrap_or(0.5) };
            Problem::AcyclicV1 { delta: d, alpha }
        }
        "acyclic-v2" => Problem::AcyclicV2 { delta: delta()? },
        "nonrep-vertex" => Problem::NonrepVertex { delta: delta()? },
        "nonrep-edge" => Problem::NonrepEdge { delta: delta()? },
        "facial-vertex" | "facial-thue-vertex" => Problem::FacialVertex { delta: delta()? },
        "facial-edge" | "facial-thue-edge" => Problem::FacialEdge,
        "r-acyclic" => Problem::RAcyclic { delta: delta()?, r: require(a.r, "r", name)? },
        "star" => Problem::StarColoring { delta: delta()? },
        "pair-forbidden" => {
            let path = require(a.family_file.as_ref(), "family-file", name)?;
            let patterns = files::parse_patterns(&read(path)?)?;
            let m = a.m.unwrap_or_else(|| patterns.iter().map(Pattern::edges).min().unwrap_or(2) as u64);
            Problem::PairForbidden { delta: delta()?, m, patterns }
        }
        other => return Err(CliError::Usage(format!("unknown problem {other:?}"))),
    })
}

fn bound(args: &BoundArgs) -> Result<ExitCode, CliError> {
    let problem = build_problem(&args.problem)?;
    let rep = kappa_preset(&problem, args.exact_n)?;
    put!("{}", bound_tsv(&problem, &rep));
    eprintln!("{}: kappa {} (+{} reserve)", rep.problem, rep.kappa, rep.reserve);
    Ok(ExitCode::SUCCESS)
}

fn bound_tsv(problem: &Problem, rep: &PresetReport) -> String {
    let mut rows: Vec<(String, String)> = vec![("problem".into(), rep.problem.into())];
    let mut add = |k: &str, v: String| rows.push((k.into(), v));
    match problem {
        Problem::AcyclicGamma { delta, gamma } => {
            add("delta", delta.to_string());
            add("gamma", gamma.to_string());
        }
        Problem::AcyclicV1 { delta, alpha } => {
            add("delta", delta.to_string());
            add("alpha", format!("{alpha}"));
        }
        Problem::RAcyclic { delta, r } => {
            add("delta", delta.to_string());
            add("r", r.to_string());
        }
        Problem::PairForbidden { delta, m, .. } => {
            add("delta", delta.to_string());
            add("m", m.to_string());
        }
        Problem::AcyclicV2 { delta }
        | Problem::NonrepVertex { delta }
        | Problem::NonrepEdge { delta }
        | Problem::FacialVertex { delta }
        | Problem::StarColoring { delta } => add("delta", delta.to_string()),
        Problem::FacialEdge => {}
    }
    if let Some(p) = rep.pinned {
        add("x_pinned", format!("{:.12e}", p.x));
        add("ratio_pinned", format!("{:.6}", p.ratio));
        add("kappa_pinned", p.kappa.to_string());
    }
    add("x_optimized", format!("{:.12e}", rep.optimized.x));
    add("ratio_optimized", format!("{:.6}", rep.optimized.ratio));
    add("kappa_optimized", rep.optimized.kappa.to_string());
    add("residual", format!("{:.3e}", rep.optimized.residual));
    add("boundary", rep.optimized.boundary.to_string());
    if let Some(s) = rep.stated {
        add("stated", format!("{s:.6}"));
    }
    add("kappa", rep.kappa.to_string());
    add("reserve", rep.reserve.to_string());
    add("kappa_total", rep.kappa_total().to_string());
    for (name, v) in &rep.references {
        add(&format!("ref:{name}"), format!("{v:.3}"));
    }
    rows.into_iter().map(|(k, v)| format!("{k}\t{v}\n")).collect()
}

fn table(name: &str) -> Result<ExitCode, CliError> {
    if name != "cs" {
        return Err(CliError::Usage(format!("unknown table {name:?}; available: cs")));
    }
    out!("delta\talpha\talpha_3dp");
    for &d in &ALPHA_TABLE_DELTAS {
        let a = optimal_alpha(d)?;
        out!("{d}\t{a:.6}\t{:.3}", round3(a));
    }
    Ok(ExitCode::SUCCESS)
}

struct Loaded {
    graph: Graph,
    plane: Option<PlaneGraph>,
}

fn load(graph: Option<&PathBuf>, embedding: Option<&PathBuf>) -> Result<Loaded, CliError> {
    match (graph, embedding) {
        (_, Some(e)) => {
            let plane = load_rotation(&read(e)?).map_err(|err| CliError::Input(err.to_string()))?;
            Ok(Loaded { graph: plane.graph().clone(), plane: Some(plane) })
        }
        (Some(g), None) => {
            let graph = load_graph(&read(g)?).map_err(|err| CliError::Input(err.to_string()))?;
            Ok(Loaded { graph, plane: None })
        }
        (None, None) => Err(CliError::Usage("--graph or --embedding is required".into())),
    }
}

fn build_family(a: &GraphArgs, l: &Loaded) -> Result<Family, CliError> {
    let plane = || l.plane.as_ref().ok_or_else(|| CliError::Usage(format!("family {} needs --embedding", a.family)));
    Ok(match a.family.as_str() {
        "acyclic-gamma" => {
            let gamma = a.gamma.unwrap_or_else(|| l.graph.max_codegree().max(1));
            families::acyclic_gamma(&l.graph, gamma)?
        }
        "acyclic-v1" => families::acyclic_v1(&l.graph, a.alpha)?,
        "acyclic-v2" => families::acyclic_v2(&l.graph, a.alpha)?,
        "nonrep-vertex" => families::nonrepetitive_vertex(&l.graph),
        "nonrep-edge" => families::nonrepetitive_edge(&l.graph),
        "facial-vertex" | "facial-thue-vertex" => families::facial_thue_vertex(plane()?),
        "facial-edge" | "facial-thue-edge" => {
            if a.estar == 0 {
                return Err(CliError::Usage("--estar is 1-based".into()));
            }
            families::facial_thue_edge(plane()?, a.estar - 1)?
        }
        other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
    })
}

fn color(args: &ColorArgs) -> Result<ExitCode, CliError> {
    let loaded = load(args.graph.graph.as_ref(), args.graph.embedding.as_ref())?;
    let fam = build_family(&args.graph, &loaded)?;
    let (mut input, seed) = match (&args.vector, args.seed) {
        (Some(path), _) => (EngineInput::explicit(args.kappa, files::parse_vector(&read(path)?)?), None),
        (None, Some(seed)) => {
            let budget = args.budget.ok_or_else(|| CliError::Usage("--budget is required with --seed".into()))?;
            (EngineInput::seeded(args.kappa, seed, budget), Some(seed))
        }
        (None, None) => return Err(CliError::Usage("give --seed and --budget, or --vector".into())),
    };
    if args.self_check {
        input = input.checked();
    }
    let outcome = match &args.lists {
        Some(path) => run_list(&fam, &files::parse_lists(&read(path)?, loaded.elements(&fam))?, &input)?,
        None => run(&fam, &input)?,
    };
    let manifest = Manifest {
        family: fam.name().to_string(),
        kappa: args.kappa,
        budget: input.vector().len(),
        seed,
        graph_hash: loaded.graph.fingerprint(),
    };
    let text = manifest.write_with(&outcome.record);
    match &args.record {
        Some(path) => write(path, &text)?,
        None => put!("{text}"),
    }
    let mut colors = outcome.coloring.colors().to_vec();
    let reserve = fam.reserved_element().filter(|_| outcome.status == Status::Completed);
    if let Some(e) = reserve {
        colors[e] = Some(args.kappa + 1);
    }
    if let Some(path) = &args.coloring {
        let body = if fam.colors_edges() {
            files::write_edge_coloring(&loaded.graph, &colors)
        } else {
            files::write_vertex_coloring(&colors)
        };
        write(path, &body)?;
    }
    let colored = outcome.coloring.colored_set().len();
    eprintln!(
        "{}: {:?} after {} steps, {colored} of {} colored{}",
        manifest.family,
        outcome.status,
        outcome.record.step_count(),
        outcome.coloring.len(),
        if reserve.is_some() { format!(", anchor given reserve color {}", args.kappa + 1) } else { String::new() }
    );
    Ok(match outcome.status {
        Status::Completed => ExitCode::SUCCESS,
        Status::BudgetExhausted => ExitCode::from(1),
    })
}

impl Loaded {
    fn elements(&self, fam: &Family) -> usize {
        if fam.colors_edges() {
            self.graph.m()
        } else {
            self.graph.n()
        }
    }
}

fn roundtrip(args: &RoundtripArgs) -> Result<ExitCode, CliError> {
    let loaded = load(args.graph.graph.as_ref(), args.graph.embedding.as_ref())?;
    let fam = build_family(&args.graph, &loaded)?;
    let mut failures = 0;
    out!("seed\tstatus\tsteps\tresult");
    for seed in args.seed..args.seed + args.cases {
        let input = EngineInput::seeded(args.kappa, seed, args.budget);
        let out = run(&fam, &input)?;
        let result = match decode(&fam, &out.coloring, &out.record, None) {
            Ok(v) if v == out.consumed => "pass".to_string(),
            Ok(v) => {
                failures += 1;
                let i =
                    v.iter().zip(&out.consumed).position(|(a, b)| a != b).unwrap_or(v.len().min(out.consumed.len()));
                format!("fail at {}", i + 1)
            }
            Err(e) => {
                failures += 1;
                format!("fail: {e}")
            }
        };
        out!("{seed}\t{:?}\t{}\t{result}", out.status, out.record.step_count());
    }
    eprintln!("{} of {} cases passed", args.cases - failures, args.cases);
    Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Brute-force cross-checks are limited to this size.
const BRUTE_LIMIT: usize = 12;

fn count_records(args: &CountArgs) -> Result<ExitCode, CliError> {
    let terms: Vec<IntTerm> = match (&args.terms, &args.problem.problem) {
        (Some(spec), _) => files::parse_terms(spec)?.into_iter().map(|(c, s)| IntTerm::new(c, s)).collect(),
        (None, Some(_)) => {
            let problem = build_problem(&args.problem)?;
            let n = if matches!(problem, Problem::PairForbidden { .. }) { DEFAULT_SET_CAP.min(args.n) } else { args.n };
            let real: Vec<(f64, usize)> =
                preset_terms(&problem, n)?.iter().map(|t| (t.cost, t.size as usize)).collect();
            records::floor_terms(&real)
        }
        (None, None) => return Err(CliError::Usage("give --terms or --problem".into())),
    };
    if terms.iter().all(|t| t.cost == 0) {
        return Err(CliError::Usage("no term has a class count of at least 1".into()));
    }
    if args.brute && args.tmax > BRUTE_LIMIT {
        return Err(CliError::Usage(format!("--brute is limited to --tmax {BRUTE_LIMIT}")));
    }
    let b = records::count_b(&terms, args.tmax)?;
    let r = records::count_r(&terms, args.n, args.tmax)?;
    let growth = if terms.iter().any(|t| t.size >= 2 && t.cost > 0) {
        Some(records::growth_check(&terms, args.tmax)?)
    } else {
        None
    };
    put!("t\tb_t\tr_t\tbound");
    if args.brute {
        put!("\tbrute_b\tbrute_r");
    }
    out!();
    let mut mismatches = 0;
    for t in 0..=args.tmax {
        let bound = match &growth {
            Some(g) => format!("{:.6e}", g.rows[t].ln_bound.exp()),
            None => "-".into(),
        };
        put!("{t}\t{}\t{}\t{bound}", b[t], r[t]);
        if args.brute {
            let (bb, br) = records::brute_counts(&terms, args.n, t)?;
            if b[t] != bb.into() || r[t] != br.into() {
                mismatches += 1;
            }
            put!("\t{bb}\t{br}");
        }
        out!();
    }
    if let Some(g) = &growth {
        eprintln!("X = {:.9}, s = {:.9}, Q(X)/X = {:.9}, growth bound holds: {}", g.x, g.s, g.ratio, g.all_hold());
    }
    if args.brute {
        eprintln!("enumeration mismatches: {mismatches}");
    }
    Ok(if mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let loaded = load(args.graph.as_ref(), args.embedding.as_ref())?;
    let g = &loaded.graph;
    let text = read(&args.coloring)?;
    let plane = || loaded.plane.as_ref().ok_or_else(|| CliError::Usage("facial properties need --embedding".into()));
    let verdict = match args.property.as_str() {
        "proper" => validators::check_proper(g, &files::parse_vertex_coloring(&text, g.n())?)?,
        "acyclic" => validators::check_acyclic(g, &files::parse_vertex_coloring(&text, g.n())?)?,
        "nonrep" => validators::check_nonrepetitive(g, &files::parse_vertex_coloring(&text, g.n())?, Scope::AllPaths)?,
        "nonrep-edge" => validators::check_nonrepetitive(g, &files::parse_edge_coloring(&text, g)?, Scope::Edges)?,
        "facial" => validators::check_nonrepetitive(
            g,
            &files::parse_vertex_coloring(&text, g.n())?,
            Scope::FacialVertices(plane()?),
        )?,
        "facial-edge" => {
            validators::check_nonrepetitive(g, &files::parse_edge_coloring(&text, g)?, Scope::FacialEdges(plane()?))?
        }
        "r-acyclic" => {
            let r = require(args.r, "r", "r-acyclic")?;
            validators::check_r_acyclic(g, &files::parse_vertex_coloring(&text, g.n())?, r)?
        }
        "star" => validators::check_star(g, &files::parse_vertex_coloring(&text, g.n())?)?,
        "pair-forbidden" => {
            let path = require(args.pattern.as_ref(), "pattern", "pair-forbidden")?;
            let h = load_graph(&read(path)?).map_err(|e| CliError::Input(e.to_string()))?;
            validators::check_pair_forbidden(g, &files::parse_vertex_coloring(&text, g.n())?, &h)?
        }
        other => return Err(CliError::Usage(format!("unknown property {other:?}"))),
    };
    Ok(match verdict {
        Verdict::Accept => {
            out!("accept");
            ExitCode::SUCCESS
        }
        Verdict::Reject(v) => {
            out!("reject\t{v}");
            ExitCode::from(1)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bound(a) => bound(a),
        Command::Table { name } => table(name),
        Command::Color(a) => color(a),
        Command::Roundtrip(a) => roundtrip(a),
        Command::CountRecords(a) => count_records(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
