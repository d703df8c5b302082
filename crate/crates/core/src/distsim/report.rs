use std::fmt;

use crate::solvers::Solution;

/// Load of one machine in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadRow {
    pub machine: usize,
    pub round: usize,
    pub units_in: u64,
    pub units_out: u64,
    /// Larger of the storage size before and after the round.
    pub storage_peak: u64,
}

/// Where the final solution was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Handoff {
    pub machine: usize,
    pub round: usize,
    pub size: usize,
    /// Coverage on the assembled sketch.
    pub value: u64,
}

/// Per-machine, per-round accounting of a simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub machine_count: usize,
    pub rounds_executed: usize,
    /// Sorted by machine, then round.
    pub rows: Vec<LoadRow>,
    /// Elements owned by each machine (index 0 is the coordinator).
    pub placement: Vec<usize>,
    pub total_messages: u64,
    /// `(v, h, degree)` tuples the coordinator received.
    pub tuples: usize,
    /// Edge mass the coordinator aimed for.
    pub target_edges: usize,
    /// Hash threshold used in round 1.
    pub threshold: f64,
    /// Edges in the assembled sketch (all guesses for set cover).
    pub sketch_edges: usize,
    /// Set when the round-1 threshold cut off elements a single-process
    /// build would have used, so the sketches may differ.
    pub divergence: bool,
    pub handoff: Handoff,
    /// Extra `key=value` metrics, printed in the summary line.
    pub metrics: Vec<(String, String)>,
}

impl SimReport {
    /// Largest storage peak of `machine` over all rounds.
    pub fn machine_load(&self, machine: usize) -> u64 {
        self.rows
            .iter()
            .filter(|r| r.machine == machine)
            .map(|r| r.storage_peak)
            .max()
            .unwrap_or(0)
    }

    /// Largest storage peak over all machines and rounds.
    pub fn max_load(&self) -> u64 {
        self.rows.iter().map(|r| r.storage_peak).max().unwrap_or(0)
    }

    /// Units the coordinator received over all rounds.
    pub fn coordinator_load(&self) -> u64 {
        self.rows.iter().filter(|r| r.machine == 0).map(|r| r.units_in).sum()
    }

    pub(crate) fn handoff_of(solution: &Solution, rounds: usize) -> Handoff {
        Handoff {
            machine: 0,
            round: rounds,
            size: solution.len(),
            value: solution.value,
        }
    }

    /// One line per machine per round, then a `summary` line.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "machine={} round={} units_in={} units_out={} storage_peak={}",
                r.machine, r.round, r.units_in, r.units_out, r.storage_peak
            )?;
        }
        write!(
            f,
            "summary rounds={} machines={} max_load={} coordinator_load={} total_messages={} tuples={} \
             target_edges={} threshold={:.6} sketch_edges={} divergence={} handoff_machine={} handoff_round={} \
             solution_size={} solution_value={}",
            self.rounds_executed,
            self.machine_count,
            self.max_load(),
            self.coordinator_load(),
            self.total_messages,
            self.tuples,
            self.target_edges,
            self.threshold,
            self.sketch_edges,
            self.divergence,
            self.handoff.machine,
            self.handoff.round,
            self.handoff.size,
            self.handoff.value,
        )?;
        for (k, v) in &self.metrics {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)
    }
}
