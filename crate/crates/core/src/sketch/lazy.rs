//! RAM-model construction through oracle access.
//!
//! Instead of hashing every element, draw not-yet-selected elements
//! uniformly at random and treat the draw order as hash order. Only the
//! drawn elements' degrees and their retained edges are looked up.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HashSource, Sketch, SketchAssembly, SketchParams, TheoryParams};
use crate::error::{Error, Result};

/// Uniformly random permutation of `0..m`, produced lazily with a sparse
/// Fisher-Yates shuffle. Memory grows with the number of draws, not `m`.
#[derive(Debug, Clone)]
pub struct LazyOrder {
    rng: ChaCha8Rng,
    remaining: u64,
    displaced: HashMap<u64, u64>,
}

impl LazyOrder {
    pub fn new(seed: u64, m: usize) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            remaining: m as u64,
            displaced: HashMap::new(),
        }
    }
}

impl Iterator for LazyOrder {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        let pick = self.rng.random_range(0..self.remaining);
        let last = self.remaining - 1;
        let value = self.displaced.get(&pick).copied().unwrap_or(pick);
        let tail = self.displaced.remove(&last).unwrap_or(last);
        if pick != last {
            self.displaced.insert(pick, tail);
        }
        self.remaining -= 1;
        Some(value as u32)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

#[derive(Debug, Clone)]
pub struct LazySketch {
    pub sketch: Sketch,
    /// Degree probes plus edge probes issued to the oracles.
    pub lookups: u64,
}

/// Theory-mode sketch from oracle access to an instance with `set_count`
/// sets and `element_count` elements. `edge_oracle(v, i)` must return the
/// `i`-th smallest set containing `v` for the result to match
/// [`super::build_sketch`] under the same order.
pub fn build_sketch_lazy<D, E>(
    element_count: usize,
    set_count: usize,
    degree_oracle: D,
    edge_oracle: E,
    params: &TheoryParams,
    hash: &HashSource,
) -> Result<LazySketch>
where
    D: Fn(u32) -> usize,
    E: Fn(u32, usize) -> u32,
{
    let mut assembly = SketchAssembly::new();
    let mut lookups = 0u64;
    let mut edges = Vec::new();
    for v in LazyOrder::new(hash.seed(), element_count) {
        if assembly.mass() >= params.target_edges {
            break;
        }
        let degree = degree_oracle(v);
        lookups += 1;
        edges.clear();
        for i in 0..degree.min(params.degree_cap) {
            let set = edge_oracle(v, i);
            lookups += 1;
            if set as usize >= set_count {
                return Err(Error::OracleOutOfRange {
                    element: v,
                    id: set,
                    n: set_count,
                });
            }
            edges.push(set);
        }
        edges.sort_unstable();
        edges.dedup();
        assembly.push(v, 0, &edges, usize::MAX);
    }
    Ok(LazySketch {
        sketch: assembly.finish(set_count, hash.seed(), SketchParams::Theory(*params), element_count),
        lookups,
    })
}
