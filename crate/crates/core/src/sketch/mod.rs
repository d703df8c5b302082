//! Adaptive sampling sketches.
//!
//! A sketch keeps every set of the input but only a sample of its elements,
//! each with a bounded number of edges. Theory mode takes elements in
//! increasing hash order until the retained edge mass reaches a target;
//! practical mode keeps each element independently with probability `rho`.
//! Truncated edge lists keep the smallest set ids.
//!
//! Weighted, fractional and probabilistic instances are sketched through
//! implicit expansions (see [`expand`]): every element stands for several
//! unit copies, each hashed on its own, and only the copies that survive
//! sampling are ever materialized.

pub mod expand;
mod hash;
mod lazy;
mod params;

use std::io::Write;

use crate::instance::{write_edge_list, CoverageInstance};

pub use expand::{
    probabilistic_copies, sketch_fractional, sketch_probabilistic, sketch_probabilistic_with_budget, sketch_weighted,
    DEFAULT_EXPANSION_BUDGET,
};
pub use hash::{element_hash, HashSource};
pub use lazy::{build_sketch_lazy, LazyOrder, LazySketch};
pub use params::{theory_params, PracticalParams, SketchParams, TheoryParams, DEFAULT_DELTA_DPRIME};

/// A sketch: the reduced graph plus the provenance needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sketch {
    graph: CoverageInstance,
    hash_seed: u64,
    params: SketchParams,
    selected_elements: Vec<u32>,
    selected_copies: Vec<u32>,
    original_m: usize,
}

impl Sketch {
    /// The reduced instance. Element `i` of it is copy
    /// `selected_copies()[i]` of original element `selected_elements()[i]`.
    pub fn graph(&self) -> &CoverageInstance {
        &self.graph
    }

    pub fn into_graph(self) -> CoverageInstance {
        self.graph
    }

    pub fn hash_seed(&self) -> u64 {
        self.hash_seed
    }

    pub fn params(&self) -> &SketchParams {
        &self.params
    }

    /// Original element ids in selection order.
    pub fn selected_elements(&self) -> &[u32] {
        &self.selected_elements
    }

    /// Copy index of each selected unit (all zero for plain sketches).
    pub fn selected_copies(&self) -> &[u32] {
        &self.selected_copies
    }

    pub fn original_m(&self) -> usize {
        self.original_m
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `#sketch ...` header text (without the leading `#`).
    pub fn header(&self) -> String {
        format!(
            "sketch {} seed={} original_m={}",
            self.params, self.hash_seed, self.original_m
        )
    }

    /// Serializes as an edge list with the sketch header.
    pub fn write_to<W: Write>(&self, out: W, extra_header: &[String]) -> std::io::Result<()> {
        let mut header = extra_header.to_vec();
        header.push(self.header());
        write_edge_list(&self.graph, out, &header)
    }
}

/// Source of sampling units: the elements of an instance, or the copies of
/// an implicit expansion. Implementations must return set lists sorted in
/// increasing order.
pub trait UnitSource {
    fn set_count(&self) -> usize;

    /// Number of original elements.
    fn element_count(&self) -> usize;

    /// Number of copies of `element` in the expansion.
    fn copies(&self, element: u32) -> u32;

    /// Appends the sorted set ids adjacent to copy `copy` of `element`.
    fn unit_sets(&self, hash: &HashSource, element: u32, copy: u32, out: &mut Vec<u32>);

    /// Hash of copy `copy` of `element`; sampling order and inclusion use it.
    fn unit_hash(&self, hash: &HashSource, element: u32, copy: u32) -> f64 {
        hash.copy_hash(element, copy)
    }

    fn total_units(&self) -> u64 {
        (0..self.element_count() as u32).map(|v| self.copies(v) as u64).sum()
    }
}

impl UnitSource for CoverageInstance {
    fn set_count(&self) -> usize {
        self.n()
    }

    fn element_count(&self) -> usize {
        self.m()
    }

    fn copies(&self, _element: u32) -> u32 {
        1
    }

    fn unit_sets(&self, _hash: &HashSource, element: u32, _copy: u32, out: &mut Vec<u32>) {
        out.extend_from_slice(self.element_sets(element));
    }

    fn total_units(&self) -> u64 {
        self.m() as u64
    }
}

/// Incrementally assembled sketch graph.
#[derive(Debug, Default)]
pub(crate) struct SketchAssembly {
    offsets: Vec<usize>,
    sets: Vec<u32>,
    elements: Vec<u32>,
    copies: Vec<u32>,
}

impl SketchAssembly {
    pub(crate) fn new() -> Self {
        Self {
            offsets: vec![0],
            ..Self::default()
        }
    }

    pub(crate) fn mass(&self) -> usize {
        self.sets.len()
    }

    /// Adds a unit with the first `cap` entries of its sorted `sets`.
    /// Units without edges are skipped. Returns the number of edges added.
    pub(crate) fn push(&mut self, element: u32, copy: u32, sets: &[u32], cap: usize) -> usize {
        let kept = &sets[..sets.len().min(cap)];
        if kept.is_empty() {
            return 0;
        }
        self.sets.extend_from_slice(kept);
        self.offsets.push(self.sets.len());
        self.elements.push(element);
        self.copies.push(copy);
        kept.len()
    }

    pub(crate) fn finish(self, n: usize, hash_seed: u64, params: SketchParams, original_m: usize) -> Sketch {
        Sketch {
            graph: CoverageInstance::from_csr(n, self.offsets, self.sets),
            hash_seed,
            params,
            selected_elements: self.elements,
            selected_copies: self.copies,
            original_m,
        }
    }
}

/// Builds a sketch over any unit source.
pub fn build_sketch_from_units<S: UnitSource + ?Sized>(source: &S, params: &SketchParams, hash: &HashSource) -> Sketch {
    let assembly = match params {
        SketchParams::Practical(p) => practical_units(source, p, hash),
        SketchParams::Theory(t) => theory_units(source, t, hash),
    };
    assembly.finish(source.set_count(), hash.seed(), *params, source.element_count())
}

fn practical_units<S: UnitSource + ?Sized>(source: &S, p: &PracticalParams, hash: &HashSource) -> SketchAssembly {
    let mut assembly = SketchAssembly::new();
    let mut buf = Vec::new();
    for v in 0..source.element_count() as u32 {
        for j in 0..source.copies(v) {
            if source.unit_hash(hash, v, j) < p.rho {
                buf.clear();
                source.unit_sets(hash, v, j, &mut buf);
                assembly.push(v, j, &buf, p.sigma);
            }
        }
    }
    assembly
}

/// Hash-ordered prefix selection.
///
/// Only units with hash at most a threshold are collected and sorted; the
/// threshold starts at `2 * target / units` and doubles whenever the
/// collected units cannot reach the target. Every unit below the threshold
/// is collected, so the walk always follows a prefix of the global
/// `(hash, element, copy)` order.
fn theory_units<S: UnitSource + ?Sized>(source: &S, t: &TheoryParams, hash: &HashSource) -> SketchAssembly {
    let total = source.total_units();
    let mut threshold = if total == 0 {
        1.0
    } else {
        (2.0 * t.target_edges as f64 / total as f64).min(1.0)
    };
    let mut buf = Vec::new();
    loop {
        let mut candidates: Vec<(f64, u32, u32)> = Vec::new();
        for v in 0..source.element_count() as u32 {
            for j in 0..source.copies(v) {
                let h = source.unit_hash(hash, v, j);
                if h <= threshold {
                    candidates.push((h, v, j));
                }
            }
        }
        candidates.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

        let mut assembly = SketchAssembly::new();
        for &(_, v, j) in &candidates {
            if assembly.mass() >= t.target_edges {
                break;
            }
            buf.clear();
            source.unit_sets(hash, v, j, &mut buf);
            assembly.push(v, j, &buf, t.degree_cap);
        }
        if assembly.mass() >= t.target_edges || threshold >= 1.0 {
            return assembly;
        }
        threshold = (threshold * 2.0).min(1.0);
    }
}

/// Builds the sketch of `instance`.
///
/// Theory mode takes elements by increasing `h(v)` (ties by id) and adds
/// `min(degree_cap, degree)` edges for each until the mass reaches
/// `target_edges` or the elements run out. Practical mode keeps `v` iff
/// `h(v) < rho`, with at most `sigma` edges.
pub fn build_sketch(instance: &CoverageInstance, params: &SketchParams, hash: &HashSource) -> Sketch {
    build_sketch_from_units(instance, params, hash)
}

/// Theory-mode construction with an explicit element order standing in for
/// hash order. Elements are consumed from `order` until the target mass is
/// reached; repeated ids are ignored.
pub fn build_sketch_in_order(
    instance: &CoverageInstance,
    params: &TheoryParams,
    order: impl IntoIterator<Item = u32>,
    hash_seed: u64,
) -> Sketch {
    let mut seen = vec![false; instance.m()];
    let mut assembly = SketchAssembly::new();
    for v in order {
        if assembly.mass() >= params.target_edges {
            break;
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            continue;
        }
        assembly.push(v, 0, instance.element_sets(v), params.degree_cap);
    }
    assembly.finish(instance.n(), hash_seed, SketchParams::Theory(*params), instance.m())
}
