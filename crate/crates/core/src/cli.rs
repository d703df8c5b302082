//! `covsketch` command line.
//!
//! Exit codes: 0 on success, 1 on runtime errors (including infeasible
//! outlier fractions), 2 on usage errors.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distsim::{run_kcover_mapreduce, run_setcover_mapreduce, DistSolver};
use crate::error::{invalid, Result};
use crate::experiment::{load_spec, run_experiment, to_csv, Baseline};
use crate::instance::{
    adjacency_from_edges, feature_pairs_instance, generate_adversarial, generate_planted, khop_dominating_instance,
    load_edge_list, write_edge_list, CoverageInstance,
};
use crate::sketch::{build_sketch, theory_params, HashSource, PracticalParams, SketchParams, DEFAULT_DELTA_DPRIME};
use crate::solvers::{
    brute_force_kcover, brute_force_set_cover, greedy_kcover, lazy_greedy, set_cover_outliers, stochastic_greedy,
    Engine, Solution,
};

#[derive(Debug, Parser)]
#[command(
    name = "covsketch",
    version,
    about = "Coverage sketches, solvers and MapReduce simulation"
)]
pub struct Cli {
    /// Leave the timestamp header line out of generated files.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance as an edge list.
    Generate(GenerateArgs),
    /// Build a sketch of an edge-list instance.
    Sketch(SketchArgs),
    /// Solve k-cover or set cover with outliers.
    Solve(SolveArgs),
    /// Run the four-round MapReduce simulation.
    Simulate(SimulateArgs),
    /// Run a parameter sweep described by a spec file.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: GenerateKind,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// k disjoint planted sets plus larger random decoys.
    Planted {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        kprime: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Instance on which uniform element sampling is misleading.
    Adversarial {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// k-hop dominating set from a graph given as `u v` lines.
    Khop {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        hops: usize,
        /// Vertex count; defaults to the largest id plus one.
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Feature selection from a 0/1 matrix (rows of whitespace-separated entries).
    FeaturePairs {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SketchArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Practical mode: element sampling probability.
    #[arg(long, conflicts_with = "theory", requires = "sigma")]
    pub rho: Option<f64>,
    /// Practical mode: per-element degree cap.
    #[arg(long, requires = "rho")]
    pub sigma: Option<usize>,
    /// Theory mode, parameterized by --k, --eps and --delta-dprime.
    #[arg(long, requires_all = ["k", "eps"])]
    pub theory: bool,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DELTA_DPRIME)]
    pub delta_dprime: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Kcover,
    SetcoverOutliers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Greedy,
    Lazy,
    Stochastic,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Direct,
    Sketch,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "kcover")]
    pub problem: Problem,
    #[arg(long, value_enum, default_value = "greedy")]
    pub solver: SolverChoice,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA_DPRIME)]
    pub delta_dprime: f64,
    /// Where set cover with outliers runs greedy.
    #[arg(long, value_enum, default_value = "direct")]
    pub engine: EngineChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Solution file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimSolver {
    Greedy,
    Stochastic,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "kcover")]
    pub problem: Problem,
    #[arg(long)]
    pub machines: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA_DPRIME)]
    pub delta_dprime: f64,
    #[arg(long, value_enum, default_value = "greedy")]
    pub solver: SimSolver,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Solution file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Overrides the spec's `output`; stdout when neither is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use lazy greedy as the baseline (exact greedy; for small inputs).
    #[arg(long)]
    pub lazy_baseline: bool,
}

fn timestamp_header(no_timestamp: bool) -> Vec<String> {
    if no_timestamp {
        return Vec::new();
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    vec![format!("generated_at={secs}")]
}

fn load_instance(path: &Path) -> Result<CoverageInstance> {
    load_edge_list(BufReader::new(File::open(path)?))
}

fn write_instance(path: &Path, instance: &CoverageInstance, header: &[String]) -> Result<()> {
    write_edge_list(instance, BufWriter::new(File::create(path)?), header)?;
    Ok(())
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| invalid(format!("--{flag} is required for this problem")))
}

fn read_graph(path: &Path, vertices: Option<usize>) -> Result<Vec<Vec<u32>>> {
    let mut edges = Vec::new();
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let mut it = text.split_whitespace().map(str::parse::<u32>);
        match (it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v))) => edges.push((u, v)),
            _ => {
                return Err(crate::Error::Parse {
                    line: i + 1,
                    message: format!("expected `u v`, got {text:?}"),
                })
            }
        }
    }
    let count = vertices.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0));
    adjacency_from_edges(count, &edges)
}

fn read_matrix(path: &Path) -> Result<Vec<Vec<u8>>> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let row = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u8>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| crate::Error::Parse {
                line: i + 1,
                message: format!("expected 0/1 entries, got {text:?}"),
            })?;
        rows.push(row);
    }
    Ok(rows)
}

fn cmd_generate(args: GenerateArgs, no_timestamp: bool, stdout: &mut dyn Write) -> Result<()> {
    let mut header = timestamp_header(no_timestamp);
    match args.kind {
        GenerateKind::Planted {
            k,
            m,
            kprime,
            eps,
            seed,
            out,
        } => {
            let p = generate_planted(k, m, kprime, eps, seed)?;
            header.push(format!("planted k={k} m={m} kprime={kprime} eps={eps} seed={seed}"));
            write_instance(&out, &p.instance, &header)?;
            let ids: Vec<String> = p.planted.iter().map(u32::to_string).collect();
            fs::write(sidecar(&out, ".opt"), format!("opt={k}\n{}\n", ids.join("\n")))?;
            writeln!(stdout, "{}", p.instance.stats())?;
        }
        GenerateKind::Adversarial { n, k, beta, seed, out } => {
            let a = generate_adversarial(n, k, beta, seed)?;
            header.push(format!("adversarial n={n} k={k} beta={beta} seed={seed}"));
            write_instance(&out, &a.instance, &header)?;
            let ids: Vec<String> = a.bonus_sets.iter().map(u32::to_string).collect();
            fs::write(
                sidecar(&out, ".opt"),
                format!("opt={}\n{}\n", a.instance.m(), ids.join("\n")),
            )?;
            writeln!(stdout, "{}", a.instance.stats())?;
        }
        GenerateKind::Khop {
            graph,
            hops,
            vertices,
            out,
        } => {
            let adjacency = read_graph(&graph, vertices)?;
            let inst = khop_dominating_instance(&adjacency, hops)?;
            header.push(format!("khop hops={hops} vertices={}", adjacency.len()));
            write_instance(&out, &inst, &header)?;
            writeln!(stdout, "{}", inst.stats())?;
        }
        GenerateKind::FeaturePairs { matrix, out } => {
            let fp = feature_pairs_instance(&read_matrix(&matrix)?)?;
            header.push("feature-pairs".to_string());
            write_instance(&out, &fp.instance, &header)?;
            let codes: Vec<String> = fp.pair_codes.iter().map(u64::to_string).collect();
            fs::write(sidecar(&out, ".pairs"), codes.join("\n") + "\n")?;
            writeln!(stdout, "{}", fp.instance.stats())?;
        }
    }
    Ok(())
}

fn cmd_sketch(args: SketchArgs, no_timestamp: bool, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.input)?;
    let params = if args.theory {
        let (k, eps) = (need(args.k, "k")?, need(args.eps, "eps")?);
        SketchParams::Theory(theory_params(
            inst.n(),
            inst.m(),
            inst.edge_count(),
            k,
            eps,
            args.delta_dprime,
        )?)
    } else {
        let rho = args.rho.ok_or_else(|| invalid("give --rho and --sigma, or --theory"))?;
        SketchParams::Practical(PracticalParams::new(rho, need(args.sigma, "sigma")?)?)
    };
    let sketch = build_sketch(&inst, &params, &HashSource::new(args.seed));
    sketch.write_to(
        BufWriter::new(File::create(&args.out)?),
        &timestamp_header(no_timestamp),
    )?;
    let ratio = if inst.edge_count() == 0 {
        0.0
    } else {
        sketch.edge_count() as f64 / inst.edge_count() as f64
    };
    writeln!(
        stdout,
        "edges_in={} edges_out={} ratio={ratio:.4}",
        inst.edge_count(),
        sketch.edge_count()
    )?;
    Ok(())
}

fn cmd_solve(args: SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.input)?;
    let solution: Solution = match args.problem {
        Problem::Kcover => {
            let k = need(args.k, "k")?;
            match args.solver {
                SolverChoice::Greedy => greedy_kcover(&inst, k),
                SolverChoice::Lazy => lazy_greedy(&inst, k),
                SolverChoice::Stochastic => stochastic_greedy(&inst, k, args.eps, args.seed),
                SolverChoice::BruteForce => brute_force_kcover(&inst, k)?,
            }
        }
        Problem::SetcoverOutliers => {
            let lambda = need(args.lambda, "lambda")?;
            match args.solver {
                SolverChoice::BruteForce => brute_force_set_cover(&inst, lambda)?,
                SolverChoice::Greedy => {
                    let engine = match args.engine {
                        EngineChoice::Direct => Engine::Direct,
                        EngineChoice::Sketch => Engine::Sketch,
                    };
                    set_cover_outliers(&inst, lambda, args.eps, args.delta_dprime, args.seed, engine)?.solution
                }
                other => {
                    return Err(invalid(format!(
                        "solver {other:?} is not available for setcover-outliers (use greedy or brute-force)"
                    )))
                }
            }
        }
    };
    emit(args.out.as_deref(), &solution.to_text(), stdout)?;
    if args.out.is_some() {
        writeln!(stdout, "value={} size={}", solution.value, solution.len())?;
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs, no_timestamp: bool, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.input)?;
    let (solution, report) = match args.problem {
        Problem::Kcover => {
            let solver = match args.solver {
                SimSolver::Greedy => DistSolver::Greedy,
                SimSolver::Stochastic => DistSolver::Stochastic,
            };
            let run = run_kcover_mapreduce(
                &inst,
                need(args.k, "k")?,
                args.eps,
                args.delta_dprime,
                args.seed,
                args.machines,
                solver,
            )?;
            (run.solution, run.report)
        }
        Problem::SetcoverOutliers => {
            let run = run_setcover_mapreduce(
                &inst,
                need(args.lambda, "lambda")?,
                args.eps,
                args.delta_dprime,
                args.seed,
                args.machines,
            )?;
            (run.outcome.solution, run.report)
        }
    };
    emit(args.out.as_deref(), &solution.to_text(), stdout)?;
    let mut report_text = String::new();
    for line in timestamp_header(no_timestamp) {
        report_text.push_str(&format!("# {line}\n"));
    }
    report_text.push_str(&report.to_text());
    emit(args.report.as_deref(), &report_text, stdout)?;
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs, no_timestamp: bool, stdout: &mut dyn Write) -> Result<()> {
    let mut spec = load_spec(&args.spec)?;
    if args.lazy_baseline {
        spec.baseline = Baseline::Lazy;
    }
    let instance = spec.source.load()?;
    let rows = run_experiment(&spec, &instance)?;
    let header = timestamp_header(no_timestamp).pop();
    let csv = to_csv(&rows, header.as_deref());
    emit(args.out.as_deref().or(spec.output.as_deref()), &csv, stdout)
}

/// Runs a parsed command, writing console output to `stdout`.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a, cli.no_timestamp, stdout),
        Command::Sketch(a) => cmd_sketch(a, cli.no_timestamp, stdout),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Simulate(a) => cmd_simulate(a, cli.no_timestamp, stdout),
        Command::Experiment(a) => cmd_experiment(a, cli.no_timestamp, stdout),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            1
        }
    }
}
