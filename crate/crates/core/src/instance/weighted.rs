//! Element-weighted, fractional and probabilistic coverage instances.
//!
//! All three carry integer data at a fixed resolution `U`: weights are
//! integers in `[1, U]`; fractions and probabilities are `a / U` for an
//! integer numerator `a` in `[0, U]`, stored per edge in the same order as
//! the base instance's element-major lists.

use std::collections::HashMap;
use std::io::BufRead;

use super::io::parse_edge_list;
use super::CoverageInstance;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedInstance {
    base: CoverageInstance,
    weights: Vec<u64>,
    max_weight: u64,
}

impl WeightedInstance {
    pub fn new(base: CoverageInstance, weights: Vec<u64>, max_weight: u64) -> Result<Self> {
        if weights.len() != base.m() {
            return Err(invalid(format!(
                "{} weights given for {} elements",
                weights.len(),
                base.m()
            )));
        }
        if let Some((v, w)) = weights.iter().enumerate().find(|(_, &w)| w == 0 || w > max_weight) {
            return Err(invalid(format!("weight {w} of element {v} outside [1, {max_weight}]")));
        }
        Ok(Self {
            base,
            weights,
            max_weight,
        })
    }

    pub fn base(&self) -> &CoverageInstance {
        &self.base
    }

    pub fn weight(&self, element: u32) -> u64 {
        self.weights[element as usize]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// The bound `U` on weights.
    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    /// Size of the unit-weight expansion, `sum_v w_v`.
    pub fn expanded_size(&self) -> u64 {
        self.weights.iter().sum()
    }
}

/// Per-edge integer numerators at resolution `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct EdgeFractions {
    base: CoverageInstance,
    numerators: Vec<u32>,
    offsets: Vec<usize>,
    resolution: u32,
}

impl EdgeFractions {
    fn new(n: usize, m: usize, resolution: u32, triples: &[(u32, u32, u32)]) -> Result<Self> {
        if resolution == 0 {
            return Err(invalid("resolution U must be positive"));
        }
        let mut lookup: HashMap<(u32, u32), u32> = HashMap::with_capacity(triples.len());
        for &(s, e, a) in triples {
            if a > resolution {
                return Err(invalid(format!("numerator {a} on ({s}, {e}) exceeds U = {resolution}")));
            }
            if let Some(prev) = lookup.insert((s, e), a) {
                if prev != a {
                    return Err(invalid(format!("conflicting fractions {prev} and {a} on ({s}, {e})")));
                }
            }
        }
        let base = CoverageInstance::from_edges(n, m, triples.iter().map(|&(s, e, _)| (s, e)))?;
        let mut numerators = Vec::with_capacity(base.edge_count());
        let mut offsets = Vec::with_capacity(m + 1);
        offsets.push(0);
        for e in 0..m as u32 {
            for &s in base.element_sets(e) {
                numerators.push(lookup[&(s, e)]);
            }
            offsets.push(numerators.len());
        }
        Ok(Self {
            base,
            numerators,
            offsets,
            resolution,
        })
    }

    fn numerators(&self, element: u32) -> &[u32] {
        let e = element as usize;
        &self.numerators[self.offsets[e]..self.offsets[e + 1]]
    }
}

macro_rules! fraction_instance {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq)]
        pub struct $name(EdgeFractions);

        impl $name {
            /// Builds from `(set, element, numerator)` triples.
            pub fn new(n: usize, m: usize, resolution: u32, triples: &[(u32, u32, u32)]) -> Result<Self> {
                EdgeFractions::new(n, m, resolution, triples).map(Self)
            }

            pub fn base(&self) -> &CoverageInstance {
                &self.0.base
            }

            /// Numerators aligned with `base().element_sets(element)`.
            pub fn numerators(&self, element: u32) -> &[u32] {
                self.0.numerators(element)
            }

            /// The resolution `U`.
            pub fn resolution(&self) -> u32 {
                self.0.resolution
            }

            /// Numerator of `alpha[set][element]`, 0 when the pair is not an edge.
            pub fn numerator(&self, set: u32, element: u32) -> u32 {
                let sets = self.0.base.element_sets(element);
                match sets.binary_search(&set) {
                    Ok(i) => self.0.numerators(element)[i],
                    Err(_) => 0,
                }
            }
        }
    };
}

fraction_instance!(
    /// Set `S` covers the fraction `alpha[S][v]` of element `v`; a family
    /// covers the maximum over its members.
    FractionalInstance
);

fraction_instance!(
    /// Set `S` covers element `v` independently with probability `alpha[S][v]`.
    ProbabilisticInstance
);

/// Loads a weighted instance: the third column is the element weight and
/// must agree across an element's lines. `U` is the `#U` header, or the
/// maximum weight when absent.
pub fn load_weighted<R: BufRead>(source: R) -> Result<WeightedInstance> {
    let parsed = parse_edge_list(source)?;
    let base = parsed.to_instance()?;
    let mut weights: Vec<Option<u64>> = vec![None; base.m()];
    for r in &parsed.records {
        let w = r.value.ok_or_else(|| Error::Parse {
            line: r.line,
            message: "missing weight column".into(),
        })?;
        match weights[r.element as usize] {
            Some(prev) if prev != w => {
                return Err(Error::Parse {
                    line: r.line,
                    message: format!("element {} has weights {prev} and {w}", r.element),
                })
            }
            _ => weights[r.element as usize] = Some(w),
        }
    }
    // Positional gaps are isolated elements; give them unit weight.
    let weights: Vec<u64> = weights.into_iter().map(|w| w.unwrap_or(1)).collect();
    let max_weight = parsed
        .resolution
        .unwrap_or_else(|| weights.iter().copied().max().unwrap_or(1));
    WeightedInstance::new(base, weights, max_weight)
}

/// `(n, m, U, (set, element, numerator) triples)` from a `#U` edge list.
type Triples = (usize, usize, u32, Vec<(u32, u32, u32)>);

fn load_triples<R: BufRead>(source: R) -> Result<Triples> {
    let parsed = parse_edge_list(source)?;
    if parsed.records.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let resolution = parsed
        .resolution
        .ok_or_else(|| invalid("fractional/probabilistic edge lists need a `#U <int>` header"))?;
    let resolution = u32::try_from(resolution).map_err(|_| invalid("U too large"))?;
    let (n, m) = parsed.dimensions()?;
    let mut triples = Vec::with_capacity(parsed.records.len());
    for r in &parsed.records {
        let a = r.value.ok_or_else(|| Error::Parse {
            line: r.line,
            message: "missing numerator column".into(),
        })?;
        let a = u32::try_from(a).map_err(|_| Error::Parse {
            line: r.line,
            message: format!("numerator {a} too large"),
        })?;
        triples.push((r.set, r.element, a));
    }
    Ok((n, m, resolution, triples))
}

pub fn load_fractional<R: BufRead>(source: R) -> Result<FractionalInstance> {
    let (n, m, u, triples) = load_triples(source)?;
    FractionalInstance::new(n, m, u, &triples)
}

pub fn load_probabilistic<R: BufRead>(source: R) -> Result<ProbabilisticInstance> {
    let (n, m, u, triples) = load_triples(source)?;
    ProbabilisticInstance::new(n, m, u, &triples)
}
