//! Parameter sweeps over practical sketches, written as CSV.
//!
//! A spec file is flat `key = value` text; `#` starts a comment. Grid keys
//! take comma-separated lists.
//!
//! ```text
//! # either an edge-list file ...
//! instance = data/graph.txt
//! # ... or a generator
//! generator = planted k=100 m=10000 kprime=10000 eps=0.2 seed=1
//!
//! rho = 0.02, 0.05, 0.1
//! sigma = 100
//! k = 100
//! seeds = 1, 2, 3
//! solver = stochastic      # greedy | lazy | stochastic, run on the sketch
//! baseline = stochastic    # stochastic | lazy, run on the full instance
//! eps = 0.1                # stochastic greedy accuracy
//! output = results.csv
//! ```
//!
//! Supported generators: `planted k= m= kprime= eps= seed=` and
//! `adversarial n= k= beta= seed=`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::instance::{generate_adversarial, generate_planted, load_edge_list, CoverageInstance};
use crate::sketch::{build_sketch, HashSource, PracticalParams, SketchParams};
use crate::solvers::{coverage, greedy_kcover, lazy_greedy, stochastic_greedy};

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 9] = [
    "rho",
    "sigma",
    "k",
    "seed",
    "sketch_edges",
    "sketch_ratio",
    "coverage",
    "baseline_coverage",
    "quality_ratio",
];

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    Planted {
        k: usize,
        m: usize,
        k_prime: usize,
        eps: f64,
        seed: u64,
    },
    Adversarial {
        n: usize,
        k: usize,
        beta: f64,
        seed: u64,
    },
}

impl InstanceSource {
    pub fn load(&self) -> Result<CoverageInstance> {
        match self {
            InstanceSource::File(path) => load_edge_list(BufReader::new(File::open(path)?)),
            InstanceSource::Planted {
                k,
                m,
                k_prime,
                eps,
                seed,
            } => Ok(generate_planted(*k, *m, *k_prime, *eps, *seed)?.instance),
            InstanceSource::Adversarial { n, k, beta, seed } => {
                Ok(generate_adversarial(*n, *k, *beta, *seed)?.instance)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SketchSolver {
    Greedy,
    Lazy,
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Stochastic,
    Lazy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub source: InstanceSource,
    pub rho: Vec<f64>,
    pub sigma: Vec<usize>,
    pub k: Vec<usize>,
    pub seeds: Vec<u64>,
    pub solver: SketchSolver,
    pub baseline: Baseline,
    pub eps: f64,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Spec with the given source and grids, stochastic solver and baseline,
    /// `eps = 0.1`.
    pub fn new(source: InstanceSource, rho: Vec<f64>, sigma: Vec<usize>, k: Vec<usize>, seeds: Vec<u64>) -> Self {
        Self {
            source,
            rho,
            sigma,
            k,
            seeds,
            solver: SketchSolver::Stochastic,
            baseline: Baseline::Stochastic,
            eps: 0.1,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rho.is_empty() || self.sigma.is_empty() || self.k.is_empty() || self.seeds.is_empty() {
            return Err(invalid("rho, sigma, k and seeds grids must be non-empty"));
        }
        for &rho in &self.rho {
            PracticalParams::new(rho, 1)?;
        }
        if self.sigma.contains(&0) {
            return Err(invalid("sigma values must be positive"));
        }
        let distinct: BTreeSet<u64> = self.seeds.iter().copied().collect();
        if distinct.len() != self.seeds.len() {
            return Err(invalid("seeds must be distinct"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(invalid(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        Ok(())
    }
}

fn spec_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| spec_error(line, format!("bad value {s:?} for {key}")))
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| spec_error(line, format!("bad value {value:?} for {key}")))
}

fn parse_generator(line: usize, value: &str) -> Result<InstanceSource> {
    let mut words = value.split_whitespace();
    let kind = words.next().ok_or_else(|| spec_error(line, "empty generator"))?;
    let mut args: HashMap<&str, &str> = HashMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| spec_error(line, format!("expected key=value, got {w:?}")))?;
        args.insert(k, v);
    }
    let get = |key: &str| -> Result<&str> {
        args.get(key)
            .copied()
            .ok_or_else(|| spec_error(line, format!("generator {kind} needs {key}=")))
    };
    match kind {
        "planted" => Ok(InstanceSource::Planted {
            k: parse_one(line, "k", get("k")?)?,
            m: parse_one(line, "m", get("m")?)?,
            k_prime: parse_one(line, "kprime", get("kprime")?)?,
            eps: parse_one(line, "eps", get("eps")?)?,
            seed: parse_one(line, "seed", get("seed")?)?,
        }),
        "adversarial" => Ok(InstanceSource::Adversarial {
            n: parse_one(line, "n", get("n")?)?,
            k: parse_one(line, "k", get("k")?)?,
            beta: parse_one(line, "beta", get("beta")?)?,
            seed: parse_one(line, "seed", get("seed")?)?,
        }),
        other => Err(spec_error(line, format!("unknown generator {other:?}"))),
    }
}

/// Parses a spec file. Relative `instance` and `output` paths resolve
/// against `base_dir` when given.
pub fn parse_spec<R: BufRead>(source: R, base_dir: Option<&Path>) -> Result<ExperimentSpec> {
    let resolve = |p: &str| match base_dir {
        Some(dir) if Path::new(p).is_relative() => dir.join(p),
        _ => PathBuf::from(p),
    };
    let mut instance = None;
    let mut spec = ExperimentSpec::new(InstanceSource::File(PathBuf::new()), vec![], vec![], vec![], vec![]);
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| spec_error(line_no, format!("expected key = value, got {text:?}")))?;
        match key {
            "instance" => instance = Some(InstanceSource::File(resolve(value))),
            "generator" => instance = Some(parse_generator(line_no, value)?),
            "rho" => spec.rho = parse_list(line_no, key, value)?,
            "sigma" => spec.sigma = parse_list(line_no, key, value)?,
            "k" => spec.k = parse_list(line_no, key, value)?,
            "seeds" | "seed" => spec.seeds = parse_list(line_no, key, value)?,
            "eps" => spec.eps = parse_one(line_no, key, value)?,
            "output" => spec.output = Some(resolve(value)),
            "solver" => {
                spec.solver = match value {
                    "greedy" => SketchSolver::Greedy,
                    "lazy" => SketchSolver::Lazy,
                    "stochastic" => SketchSolver::Stochastic,
                    _ => return Err(spec_error(line_no, format!("unknown solver {value:?}"))),
                }
            }
            "baseline" => {
                spec.baseline = match value {
                    "stochastic" => Baseline::Stochastic,
                    "lazy" => Baseline::Lazy,
                    _ => return Err(spec_error(line_no, format!("unknown baseline {value:?}"))),
                }
            }
            _ => return Err(spec_error(line_no, format!("unknown key {key:?}"))),
        }
    }
    spec.source = instance.ok_or_else(|| invalid("spec needs `instance` or `generator`"))?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_spec(path: &Path) -> Result<ExperimentSpec> {
    parse_spec(BufReader::new(File::open(path)?), path.parent())
}

/// One result row; `seed` is `None` on mean rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub rho: f64,
    pub sigma: usize,
    pub k: usize,
    pub seed: Option<u64>,
    pub sketch_edges: f64,
    pub sketch_ratio: f64,
    pub coverage: f64,
    pub baseline_coverage: f64,
    pub quality_ratio: f64,
}

fn mean_row(rows: &[ExperimentRow]) -> ExperimentRow {
    let c = rows.len() as f64;
    let mean = |f: fn(&ExperimentRow) -> f64| rows.iter().map(f).sum::<f64>() / c;
    ExperimentRow {
        seed: None,
        sketch_edges: mean(|r| r.sketch_edges),
        sketch_ratio: mean(|r| r.sketch_ratio),
        coverage: mean(|r| r.coverage),
        baseline_coverage: mean(|r| r.baseline_coverage),
        quality_ratio: mean(|r| r.quality_ratio),
        ..rows[0].clone()
    }
}

/// Runs every `(rho, sigma, k, seed)` point on `instance`. Rows come out
/// sorted by `(rho, sigma, k, seed)`, each grid point followed by its mean
/// row.
pub fn run_experiment(spec: &ExperimentSpec, instance: &CoverageInstance) -> Result<Vec<ExperimentRow>> {
    spec.validate()?;
    if instance.edge_count() == 0 {
        return Err(Error::EmptyInstance);
    }
    let mut seeds = spec.seeds.clone();
    seeds.sort_unstable();
    let mut rho = spec.rho.clone();
    rho.sort_by(f64::total_cmp);
    rho.dedup();
    let mut sigma = spec.sigma.clone();
    sigma.sort_unstable();
    sigma.dedup();
    let mut ks = spec.k.clone();
    ks.sort_unstable();
    ks.dedup();

    let baselines: HashMap<(usize, u64), u64> = ks
        .iter()
        .flat_map(|&k| seeds.iter().map(move |&s| (k, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, seed)| {
            let sol = match spec.baseline {
                Baseline::Stochastic => stochastic_greedy(instance, k, spec.eps, seed),
                Baseline::Lazy => lazy_greedy(instance, k),
            };
            ((k, seed), sol.value)
        })
        .collect();

    let mut points = Vec::new();
    for &r in &rho {
        for &s in &sigma {
            for &k in &ks {
                for &seed in &seeds {
                    points.push((r, s, k, seed));
                }
            }
        }
    }
    let rows: Vec<ExperimentRow> = points
        .into_par_iter()
        .map(|(r, s, k, seed)| -> Result<ExperimentRow> {
            let params = SketchParams::Practical(PracticalParams::new(r, s)?);
            let sketch = build_sketch(instance, &params, &HashSource::new(seed));
            let sol = match spec.solver {
                SketchSolver::Greedy => greedy_kcover(&sketch, k),
                SketchSolver::Lazy => lazy_greedy(&sketch, k),
                SketchSolver::Stochastic => stochastic_greedy(&sketch, k, spec.eps, seed),
            };
            let value = coverage(instance, &sol.chosen)? as f64;
            let base = baselines[&(k, seed)] as f64;
            Ok(ExperimentRow {
                rho: r,
                sigma: s,
                k,
                seed: Some(seed),
                sketch_edges: sketch.edge_count() as f64,
                sketch_ratio: sketch.edge_count() as f64 / instance.edge_count() as f64,
                coverage: value,
                baseline_coverage: base,
                quality_ratio: if base == 0.0 { 1.0 } else { value / base },
            })
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(rows.len() + rows.len() / seeds.len());
    for group in rows.chunks(seeds.len()) {
        out.extend_from_slice(group);
        out.push(mean_row(group));
    }
    Ok(out)
}

/// CSV text: optional `#` comment header, the column line, then rows.
pub fn to_csv(rows: &[ExperimentRow], header: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(h) = header {
        let _ = writeln!(s, "# {h}");
    }
    s.push_str(&CSV_COLUMNS.join(","));
    s.push('\n');
    for r in rows {
        let seed = r.seed.map_or_else(|| "mean".to_string(), |v| v.to_string());
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.rho, r.sigma, r.k, seed, r.sketch_edges, r.sketch_ratio, r.coverage, r.baseline_coverage, r.quality_ratio
        );
    }
    s
}
