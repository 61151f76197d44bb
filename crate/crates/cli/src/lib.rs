//! Command-line front end for the `genpos` library.
//!
//! [`run`] takes the argument vector and standard input and returns the
//! exit code with everything that would be printed, so the binary is a thin
//! wrapper and the whole interface is testable in-process.
//!
//! Exit codes: 0 on success, 1 on any input or usage error, 2 when a solve
//! ran out of budget and reported its best certified set instead.

pub mod formats;
pub mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use genpos::bounds::{bounds_report, BoundsOptions};
use genpos::families::{self, FamilyInstance};
use genpos::graph::EdgeList;
use genpos::reduction::{build_reduction, solve_value_claim};
use genpos::{all_pairs_distances, collinear_triples, gp_exact, verify_general_position, Graph, SolveOptions};

use formats::{parse_cover, parse_edge_list, parse_graph6_batch, parse_vertex_list, serialize_graph6, to_edge_list};
use report::{FamilySummary, InputDescriptor, ReductionCheck, ReductionSummary, Results, RunReport, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "genpos", version, about = "Exact solver and bounds for the graph general position problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute gp(G) exactly, or the best certified set within the budget.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Run every lower and upper bound plus the exact solver.
    Bounds {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Isometric cover file: one part per line, optional `path:`/`cycle:` tag.
        #[arg(long)]
        cover: Vec<PathBuf>,
    },
    /// Check whether a vertex set is in general position.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated vertex indices, e.g. "0,5,9".
        #[arg(long)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a graph from one of the built-in families.
    Generate(GenerateArgs),
    /// Build the independent-set-to-general-position lift of a graph.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        /// Where to write the lifted graph; the layer map goes to `<out>.layers.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solve both sides exactly and check gp(lift) = α(base) + n.
        #[arg(long)]
        check: bool,
        #[arg(long, value_name = "SECONDS")]
        time_limit: Option<f64>,
        #[arg(long, env = "GP_THREADS", default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        deterministic: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Edgelist,
    Graph6,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Edgelist => "edgelist",
            Format::Graph6 => "graph6",
        }
    }

    fn write(self, g: &Graph) -> String {
        match self {
            Format::Edgelist => to_edge_list(g),
            Format::Graph6 => serialize_graph6(g) + "\n",
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input file; standard input when absent or `-`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Lexicographically smallest witness and no timings, for reproducible reports.
    #[arg(long)]
    deterministic: bool,
    #[arg(long, env = "GP_THREADS", default_value_t = 1)]
    threads: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    Theta,
    Gt,
    Petersen,
    Gn,
    Spider,
    BlockRandom,
    Cbt,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Order for path, cycle and complete; leaves for star; `n` for gn and spider.
    #[arg(long)]
    n: Option<usize>,
    /// Number of paths in a theta graph.
    #[arg(long)]
    k: Option<usize>,
    /// Path length in a theta graph.
    #[arg(long)]
    ell: Option<usize>,
    /// Height for gt and cbt.
    #[arg(long)]
    r: Option<u32>,
    /// Subdivisions per spider arm.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    blocks: usize,
    #[arg(long, default_value_t = 4)]
    max_block_size: usize,
    /// Graph destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
}

/// Everything one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

type CmdResult = Result<Outcome, String>;

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(EXIT_OK, text)
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = match cli.command {
        Command::Solve { input, solve } => cmd_solve(&input, &solve, stdin),
        Command::Bounds { input, solve, cover } => cmd_bounds(&input, &solve, &cover, stdin),
        Command::Verify { input, set, out } => cmd_verify(&input, &set, out.as_deref(), stdin),
        Command::Generate(args) => cmd_generate(&args),
        Command::Reduce { input, out, check, time_limit, threads, deterministic } => {
            cmd_reduce(&input, out.as_deref(), check, time_limit, threads, deterministic, stdin)
        }
    };
    result.unwrap_or_else(Outcome::error)
}

fn read_input(input: &InputArgs, stdin: &mut dyn Read) -> Result<(Vec<Graph>, InputDescriptor), String> {
    let (text, path) = match &input.input {
        Some(p) if p.as_os_str() != "-" => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            (text, Some(p.display().to_string()))
        }
        _ => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(|e| format!("standard input: {e}"))?;
            (text, None)
        }
    };
    let graphs = match input.format {
        Format::Edgelist => vec![parse_edge_list(&text).map_err(|e| e.to_string())?],
        Format::Graph6 => parse_graph6_batch(&text).map_err(|e| e.to_string())?,
    };
    let desc = InputDescriptor { path, format: input.format.name().into(), n: 0, m: 0 };
    Ok((graphs, desc))
}

fn budget(seconds: Option<f64>) -> Result<Option<Duration>, String> {
    seconds.map(|s| Duration::try_from_secs_f64(s).map_err(|_| format!("invalid time limit {s}"))).transpose()
}

fn describe(desc: &InputDescriptor, g: &Graph) -> InputDescriptor {
    InputDescriptor { n: g.n(), m: g.edge_count(), ..desc.clone() }
}

struct Timer {
    enabled: bool,
    stages: BTreeMap<String, u64>,
}

impl Timer {
    fn new(deterministic: bool) -> Self {
        Timer { enabled: !deterministic, stages: BTreeMap::new() }
    }

    fn time<R>(&mut self, stage: &str, f: impl FnOnce() -> R) -> R {
        let start = Instant::now();
        let r = f();
        *self.stages.entry(stage.into()).or_default() += start.elapsed().as_micros() as u64;
        r
    }

    fn finish(self) -> Option<BTreeMap<String, u64>> {
        self.enabled.then_some(self.stages)
    }
}

fn report(command: &str, desc: &InputDescriptor, g: &Graph, results: Results, timer: Timer) -> RunReport {
    RunReport {
        tool_version: TOOL_VERSION.into(),
        command: command.into(),
        input: describe(desc, g),
        graph: EdgeList::from(g.clone()),
        results,
        timing_us: timer.finish(),
    }
}

/// Writes one report per graph: a bare object for a single graph, an array
/// for a batch.
fn emit(reports: &[RunReport], out: Option<&Path>, code: i32) -> CmdResult {
    let text = if let [single] = reports {
        single.to_json()
    } else {
        serde_json::to_string_pretty(reports).map_err(|e| e.to_string())? + "\n"
    };
    match out {
        Some(p) => {
            fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok(Outcome::ok(code, String::new()))
        }
        None => Ok(Outcome::ok(code, text)),
    }
}

fn solve_options(args: &SolveArgs) -> Result<SolveOptions, String> {
    Ok(SolveOptions {
        time_limit: budget(args.time_limit)?,
        threads: args.threads.max(1),
        deterministic: args.deterministic,
    })
}

fn cmd_solve(input: &InputArgs, args: &SolveArgs, stdin: &mut dyn Read) -> CmdResult {
    let opts = solve_options(args)?;
    let (graphs, desc) = read_input(input, stdin)?;
    let mut code = EXIT_OK;
    let mut reports = Vec::new();
    for g in &graphs {
        let mut timer = Timer::new(args.deterministic);
        let t = timer.time("triples", || collinear_triples(&all_pairs_distances(g))).map_err(|e| e.to_string())?;
        let solve = timer.time("solve", || gp_exact(g, &t, &opts));
        if !solve.is_exact() {
            code = EXIT_TIMEOUT;
        }
        reports.push(report("solve", &desc, g, Results { solve: Some(solve), ..Default::default() }, timer));
    }
    emit(&reports, args.out.as_deref(), code)
}

fn cmd_bounds(input: &InputArgs, args: &SolveArgs, covers: &[PathBuf], stdin: &mut dyn Read) -> CmdResult {
    let budget = budget(args.time_limit)?;
    let covers = covers
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let cover = parse_cover(&text).map_err(|e| format!("{}: {e}", p.display()))?;
            let name = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
            Ok((name, cover))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let opts = BoundsOptions { budget, covers, threads: args.threads.max(1), deterministic: args.deterministic };
    let (graphs, desc) = read_input(input, stdin)?;
    let mut code = EXIT_OK;
    let mut reports = Vec::new();
    for g in &graphs {
        let mut timer = Timer::new(args.deterministic);
        let b = timer.time("bounds", || bounds_report(g, &opts));
        if b.solve.as_ref().is_some_and(|s| !s.is_exact()) {
            code = EXIT_TIMEOUT;
        }
        reports.push(report("bounds", &desc, g, Results { bounds: Some(b), ..Default::default() }, timer));
    }
    emit(&reports, args.out.as_deref(), code)
}

fn cmd_verify(input: &InputArgs, set: &str, out: Option<&Path>, stdin: &mut dyn Read) -> CmdResult {
    let set = parse_vertex_list(set).map_err(|e| format!("--set: {e}"))?;
    let (graphs, desc) = read_input(input, stdin)?;
    let mut reports = Vec::new();
    for g in &graphs {
        let mut timer = Timer::new(true);
        let t = timer.time("triples", || collinear_triples(&all_pairs_distances(g))).map_err(|e| e.to_string())?;
        let v = verify_general_position(&t, &set).map_err(|e| e.to_string())?;
        reports.push(report("verify", &desc, g, Results { verification: Some(v), ..Default::default() }, timer));
    }
    emit(&reports, out, EXIT_OK)
}

fn need<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, String> {
    value.ok_or_else(|| format!("family {family} needs --{flag}"))
}

fn build_family(a: &GenerateArgs) -> Result<FamilyInstance, String> {
    use Family::*;
    let name = a.family.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    let n = || need(a.n, "n", &name);
    let inst = match a.family {
        Path => families::make_path(n()?),
        Cycle => families::make_cycle(n()?),
        Complete => families::make_complete(n()?),
        Star => families::make_star(n()?),
        Theta => families::make_theta(need(a.k, "k", &name)?, need(a.ell, "ell", &name)?),
        Gt => families::make_glued_binary_tree(need(a.r, "r", &name)?),
        Cbt => families::make_complete_binary_tree(need(a.r, "r", &name)?),
        Petersen => Ok(families::make_petersen()),
        Gn => families::make_gn_counterexample(n()?),
        Spider => families::make_spider_triangles(n()?, need(a.s, "s", &name)?),
        BlockRandom => families::make_random_block_graph(a.seed, a.blocks, a.max_block_size),
    };
    inst.map_err(|e| e.to_string())
}

fn cmd_generate(a: &GenerateArgs) -> CmdResult {
    let f = build_family(a)?;
    let text = a.format.write(&f.graph);
    let Some(out) = &a.out else {
        return Ok(Outcome::ok(EXIT_OK, text));
    };
    fs::write(out, &text).map_err(|e| format!("{}: {e}", out.display()))?;
    let desc = InputDescriptor { path: Some(out.display().to_string()), format: a.format.name().into(), n: 0, m: 0 };
    let summary = FamilySummary {
        name: f.name.clone(),
        predicted_gp: f.predicted_gp,
        predicted_witness: f.predicted_witness.clone(),
        lower_witness: f.lower_witness.clone(),
        cover: f.cover.clone(),
        edge_certificate: f.edge_certificate.clone(),
    };
    let r =
        report("generate", &desc, &f.graph, Results { family: Some(summary), ..Default::default() }, Timer::new(true));
    emit(&[r], None, EXIT_OK)
}

fn cmd_reduce(
    input: &InputArgs,
    out: Option<&Path>,
    check: bool,
    time_limit: Option<f64>,
    threads: usize,
    deterministic: bool,
    stdin: &mut dyn Read,
) -> CmdResult {
    let budget = budget(time_limit)?;
    let (graphs, desc) = read_input(input, stdin)?;
    let [base] = &graphs[..] else {
        return Err("reduce takes exactly one graph".into());
    };
    let mut timer = Timer::new(deterministic);
    let r = timer.time("lift", || build_reduction(base)).map_err(|e| e.to_string())?;
    if let Some(out) = out {
        fs::write(out, input.format.write(&r.lifted)).map_err(|e| format!("{}: {e}", out.display()))?;
        let mut sidecar = out.as_os_str().to_owned();
        sidecar.push(".layers.json");
        let layers = serde_json::to_string_pretty(&r.layer_map).map_err(|e| e.to_string())? + "\n";
        fs::write(&sidecar, layers).map_err(|e| format!("{}: {e}", Path::new(&sidecar).display()))?;
    }
    let mut code = EXIT_OK;
    let mut summary =
        ReductionSummary { base: EdgeList::from(base.clone()), layer_map: r.layer_map.clone(), check: None };
    if check {
        match timer.time("check", || solve_value_claim(&r, budget, threads)) {
            Ok(claim) => {
                summary.check = Some(ReductionCheck {
                    alpha: claim.alpha.optimum,
                    independent_set: claim.alpha.witness.clone(),
                    gp_lifted: claim.gp.optimum,
                    gp_witness: claim.gp.witness.vertices.clone(),
                    equality: claim.holds(base.n()),
                });
            }
            Err(genpos::Error::TimedOut) => code = EXIT_TIMEOUT,
            Err(e) => return Err(e.to_string()),
        }
    }
    let desc = InputDescriptor { path: desc.path, format: desc.format, n: 0, m: 0 };
    let rep = report("reduce", &desc, &r.lifted, Results { reduction: Some(summary), ..Default::default() }, timer);
    emit(&[rep], None, code)
}
