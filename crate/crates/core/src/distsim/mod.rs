//! Deterministic simulation of the four-round MapReduce pipelines.
//!
//! Machine 0 is the coordinator; element `v` and its edge list live on
//! machine `1 + v mod (machine_count - 1)`.
//!
//! 1. Hosts send `(v, h(v), degree)` for every element with
//!    `h(v) <= 2 * target / m`.
//! 2. The coordinator sorts the tuples by `(h, v)`, selects the prefix whose
//!    capped degree sum first reaches the target, and notifies the hosts.
//! 3. Hosts send the capped edge lists of the selected elements.
//! 4. The coordinator assembles the sketch and solves on it.
//!
//! Set cover with outliers runs one selection per guess in the same rounds,
//! with rounds 2 to 4 messages tagged by guess.
//!
//! Load units: a tuple costs 3, an edge 1, a notification 1, and a guess
//! tag adds 1 to a message.

mod cluster;
mod report;

use std::collections::HashMap;

pub use cluster::{Cluster, Machine, Outbox, Units};
pub use report::{Handoff, LoadRow, SimReport};

use crate::error::{invalid, Error, Result};
use crate::instance::CoverageInstance;
use crate::sketch::{theory_params, HashSource, Sketch, SketchAssembly, SketchParams, TheoryParams};
use crate::solvers::{
    greedy_kcover, greedy_partial_cover, guess_ladder, outlier_budget, required_coverage, stochastic_greedy,
    OutlierSolution, Solution,
};

/// Rounds in both pipelines.
pub const ROUNDS: usize = 4;

/// Solver the coordinator runs in round 4 of the k-cover pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistSolver {
    Greedy,
    /// Stochastic greedy with the pipeline's `eps` and seed.
    Stochastic,
}

/// Elements owned by each machine; entry 0 (the coordinator) is empty.
pub fn partition_input(instance: &CoverageInstance, machine_count: usize) -> Result<Vec<Vec<u32>>> {
    if machine_count < 2 {
        return Err(invalid(format!(
            "machine_count must be at least 2 (coordinator plus a worker), got {machine_count}"
        )));
    }
    let mut placement = vec![Vec::new(); machine_count];
    for v in 0..instance.m() as u32 {
        placement[owner(v, machine_count)].push(v);
    }
    Ok(placement)
}

fn owner(v: u32, machine_count: usize) -> usize {
    1 + v as usize % (machine_count - 1)
}

#[derive(Debug, Clone)]
enum Message {
    Tuple {
        element: u32,
        hash: f64,
        degree: usize,
    },
    Select {
        element: u32,
        track: Option<u32>,
    },
    Edges {
        element: u32,
        track: Option<u32>,
        sets: Vec<u32>,
    },
}

impl Units for Message {
    fn units(&self) -> u64 {
        match self {
            Message::Tuple { .. } => 3,
            Message::Select { track, .. } => 1 + track.is_some() as u64,
            Message::Edges { track, sets, .. } => sets.len() as u64 + track.is_some() as u64,
        }
    }
}

#[derive(Debug, Default)]
struct Coordinator {
    tuples: usize,
    selected: Vec<Vec<u32>>,
    masses: Vec<usize>,
    received_edges: u64,
    sketches: Vec<Sketch>,
}

#[derive(Debug)]
enum Storage {
    Coordinator(Box<Coordinator>),
    /// Owned `(element, sorted sets)`, in increasing element order.
    Worker(Vec<(u32, Vec<u32>)>),
}

impl Units for Storage {
    fn units(&self) -> u64 {
        match self {
            Storage::Coordinator(c) => {
                3 * c.tuples as u64 + c.selected.iter().map(|s| s.len() as u64).sum::<u64>() + c.received_edges
            }
            Storage::Worker(owned) => owned.iter().map(|(_, s)| s.len() as u64).sum(),
        }
    }
}

/// Shared rounds 1 to 3 plus sketch assembly, for one or more tracks that
/// share a target mass but differ in degree cap.
struct Pipeline<'a> {
    instance: &'a CoverageInstance,
    tracks: &'a [TheoryParams],
    tagged: bool,
    hash: HashSource,
    threshold: f64,
    cluster: Cluster<Storage, Message>,
    placement: Vec<usize>,
}

impl<'a> Pipeline<'a> {
    fn new(
        instance: &'a CoverageInstance,
        tracks: &'a [TheoryParams],
        tagged: bool,
        seed: u64,
        machine_count: usize,
    ) -> Result<Self> {
        let parts = partition_input(instance, machine_count)?;
        let placement = parts.iter().map(Vec::len).collect();
        let storages = parts
            .into_iter()
            .enumerate()
            .map(|(id, elements)| {
                if id == 0 {
                    Storage::Coordinator(Box::default())
                } else {
                    Storage::Worker(
                        elements
                            .into_iter()
                            .map(|v| (v, instance.element_sets(v).to_vec()))
                            .collect(),
                    )
                }
            })
            .collect();
        let target = tracks[0].target_edges;
        let threshold = (2.0 * target as f64 / instance.m() as f64).min(1.0);
        Ok(Self {
            instance,
            tracks,
            tagged,
            hash: HashSource::new(seed),
            threshold,
            cluster: Cluster::new(storages),
            placement,
        })
    }

    /// Rounds 1 to 3. Returns whether any track diverged.
    fn sample(&mut self) -> bool {
        let machine_count = self.cluster.machine_count();
        let hash = self.hash;
        let threshold = self.threshold;
        let tracks = self.tracks;
        let tagged = self.tagged;

        self.cluster.round(|_, storage, _, out| {
            if let Storage::Worker(owned) = storage {
                for (v, sets) in owned.iter() {
                    let h = hash.element_hash(*v);
                    if !sets.is_empty() && h <= threshold {
                        out.send(
                            0,
                            Message::Tuple {
                                element: *v,
                                hash: h,
                                degree: sets.len(),
                            },
                        );
                    }
                }
            }
        });

        self.cluster.round(|_, storage, inbox, out| {
            let Storage::Coordinator(c) = storage else { return };
            let mut tuples: Vec<(f64, u32, usize)> = inbox
                .into_iter()
                .filter_map(|m| match m {
                    Message::Tuple { element, hash, degree } => Some((hash, element, degree)),
                    _ => None,
                })
                .collect();
            tuples.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            c.tuples = tuples.len();
            for (t, params) in tracks.iter().enumerate() {
                let mut mass = 0usize;
                let mut chosen = Vec::new();
                for &(_, v, degree) in &tuples {
                    if mass >= params.target_edges {
                        break;
                    }
                    mass += degree.min(params.degree_cap);
                    chosen.push(v);
                    out.send(
                        owner(v, machine_count),
                        Message::Select {
                            element: v,
                            track: tagged.then_some(t as u32),
                        },
                    );
                }
                c.selected.push(chosen);
                c.masses.push(mass);
            }
        });

        self.cluster.round(|_, storage, inbox, out| {
            let Storage::Worker(owned) = storage else { return };
            for m in inbox {
                if let Message::Select { element, track } = m {
                    let (_, sets) = &owned[element as usize / (machine_count - 1)];
                    let cap = tracks[track.unwrap_or(0) as usize].degree_cap;
                    out.send(
                        0,
                        Message::Edges {
                            element,
                            track,
                            sets: sets[..sets.len().min(cap)].to_vec(),
                        },
                    );
                }
            }
        });

        let Storage::Coordinator(c) = &self.cluster.machines()[0].storage else {
            unreachable!("machine 0 is the coordinator")
        };
        threshold < 1.0 && c.masses.iter().zip(tracks).any(|(&mass, p)| mass < p.target_edges)
    }

    /// Round 4: assemble one sketch per track, then run `solve` on them.
    fn assemble_and_solve<T, F>(&mut self, solve: F) -> Result<T>
    where
        T: Send,
        F: Fn(&[Sketch]) -> Result<T> + Sync,
    {
        let n = self.instance.n();
        let m = self.instance.m();
        let seed = self.hash.seed();
        let tracks = self.tracks;
        let result = std::sync::Mutex::new(None);
        self.cluster.round(|_, storage, inbox, _| {
            let Storage::Coordinator(c) = storage else { return };
            let mut edges: Vec<HashMap<u32, Vec<u32>>> = vec![HashMap::new(); tracks.len()];
            for msg in inbox {
                if let Message::Edges { element, track, sets } = msg {
                    c.received_edges += sets.len() as u64;
                    edges[track.unwrap_or(0) as usize].insert(element, sets);
                }
            }
            c.sketches = tracks
                .iter()
                .enumerate()
                .map(|(t, params)| {
                    let mut assembly = SketchAssembly::new();
                    for v in &c.selected[t] {
                        assembly.push(*v, 0, &edges[t][v], usize::MAX);
                    }
                    assembly.finish(n, seed, SketchParams::Theory(*params), m)
                })
                .collect();
            *result.lock().expect("result lock") = Some(solve(&c.sketches));
        });
        result
            .into_inner()
            .expect("result lock")
            .expect("coordinator ran round 4")
    }

    fn coordinator(&self) -> &Coordinator {
        match &self.cluster.machines()[0].storage {
            Storage::Coordinator(c) => c,
            Storage::Worker(_) => unreachable!("machine 0 is the coordinator"),
        }
    }

    fn report(&self, divergence: bool, solution: &Solution, metrics: Vec<(String, String)>) -> SimReport {
        debug_assert_eq!(self.cluster.pending_messages(), 0);
        let c = self.coordinator();
        SimReport {
            machine_count: self.cluster.machine_count(),
            rounds_executed: self.cluster.rounds_executed(),
            rows: self.cluster.rows(),
            placement: self.placement.clone(),
            total_messages: self.cluster.total_messages(),
            tuples: c.tuples,
            target_edges: self.tracks[0].target_edges,
            threshold: self.threshold,
            sketch_edges: c.sketches.iter().map(Sketch::edge_count).sum(),
            divergence,
            handoff: SimReport::handoff_of(solution, self.cluster.rounds_executed()),
            metrics,
        }
    }
}

/// Output of [`run_kcover_mapreduce`].
#[derive(Debug, Clone)]
pub struct KCoverRun {
    /// Solution found on the sketch; `value` is sketch coverage.
    pub solution: Solution,
    pub report: SimReport,
    /// The sketch the coordinator assembled.
    pub sketch: Sketch,
}

/// Four-round distributed k-cover.
///
/// Unless `report.divergence` is set, the assembled sketch equals
/// `build_sketch(instance, Theory(theory_params(..)), seed)` and the
/// solution equals running the same solver on it.
pub fn run_kcover_mapreduce(
    instance: &CoverageInstance,
    k: usize,
    eps: f64,
    delta_dprime: f64,
    seed: u64,
    machine_count: usize,
    solver: DistSolver,
) -> Result<KCoverRun> {
    if instance.m() == 0 {
        return Err(Error::EmptyInstance);
    }
    let params = theory_params(instance.n(), instance.m(), instance.edge_count(), k, eps, delta_dprime)?;
    let tracks = [params];
    let mut pipe = Pipeline::new(instance, &tracks, false, seed, machine_count)?;
    let divergence = pipe.sample();
    let solution = pipe.assemble_and_solve(|sketches| {
        Ok(match solver {
            DistSolver::Greedy => greedy_kcover(&sketches[0], k),
            DistSolver::Stochastic => stochastic_greedy(&sketches[0], k, eps, seed),
        })
    })?;
    let report = pipe.report(divergence, &solution, Vec::new());
    let sketch = pipe.coordinator().sketches[0].clone();
    Ok(KCoverRun {
        solution,
        report,
        sketch,
    })
}

/// Output of [`run_setcover_mapreduce`].
#[derive(Debug, Clone)]
pub struct SetCoverRun {
    pub outcome: OutlierSolution,
    pub report: SimReport,
}

/// `24 n ln n / lambda^3`, the logged budget for total sketch mass across
/// guesses.
pub fn setcover_mass_budget(n: usize, lambda: f64) -> f64 {
    24.0 * n as f64 * (n.max(2) as f64).ln() / lambda.powi(3)
}

/// Four-round distributed set cover with outliers. Every guess on the
/// ladder gets its own selection and degree cap inside the same rounds;
/// round 4 picks the first guess whose sketch admits a partial cover, as
/// `set_cover_outliers` does with the sketch engine.
pub fn run_setcover_mapreduce(
    instance: &CoverageInstance,
    lambda: f64,
    eps: f64,
    delta_dprime: f64,
    seed: u64,
    machine_count: usize,
) -> Result<SetCoverRun> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if instance.n() == 0 || instance.m() == 0 {
        return Err(Error::EmptyInstance);
    }
    let ladder = guess_ladder(instance.n(), eps);
    let tracks = ladder
        .iter()
        .map(|&g| theory_params(instance.n(), instance.m(), instance.edge_count(), g, eps, delta_dprime))
        .collect::<Result<Vec<_>>>()?;
    let mut pipe = Pipeline::new(instance, &tracks, true, seed, machine_count)?;
    let divergence = pipe.sample();
    let outcome = pipe.assemble_and_solve(|sketches| {
        for (&g, sketch) in ladder.iter().zip(sketches) {
            let required = required_coverage(sketch.graph().m(), lambda);
            let budget = outlier_budget(g, eps, lambda);
            if let Some(solution) = greedy_partial_cover(sketch, budget, required) {
                return Ok(OutlierSolution {
                    solution,
                    guess: g,
                    budget,
                });
            }
        }
        Err(Error::Infeasible)
    })?;
    let mass: usize = pipe.coordinator().sketches.iter().map(Sketch::edge_count).sum();
    let budget = setcover_mass_budget(instance.n(), lambda);
    let metrics = vec![
        ("guesses".to_string(), ladder.len().to_string()),
        ("chosen_guess".to_string(), outcome.guess.to_string()),
        ("mass_budget".to_string(), format!("{budget:.0}")),
        ("mass_within_budget".to_string(), (mass as f64 <= budget).to_string()),
    ];
    let report = pipe.report(divergence, &outcome.solution, metrics);
    Ok(SetCoverRun { outcome, report })
}
