//! Implicit unit-copy expansions of the weighted coverage variants.
//!
//! * weighted: element `v` becomes `w_v` copies, each adjacent to every set
//!   containing `v`;
//! * fractional: `U` copies, copy `j` adjacent to `S` iff `j < alpha[S][v] * U`,
//!   so any family covers exactly `U` times its fractional value;
//! * probabilistic: `zeta` copies, copy `j` adjacent to `S` with probability
//!   `alpha[S][v]`, drawn from a coin keyed by `(seed, v, j, S)`.
//!
//! Copies with no adjacent set are never part of a sketch.

use super::{build_sketch_from_units, HashSource, Sketch, SketchParams, UnitSource};
use crate::error::{invalid, Error, Result};
use crate::instance::{FractionalInstance, ProbabilisticInstance, WeightedInstance};

/// Largest `zeta * m` accepted by [`sketch_probabilistic`].
pub const DEFAULT_EXPANSION_BUDGET: u64 = 200_000_000;

fn copies_u32(count: u64) -> u32 {
    u32::try_from(count).expect("copy count fits in u32")
}

impl UnitSource for WeightedInstance {
    fn set_count(&self) -> usize {
        self.base().n()
    }

    fn element_count(&self) -> usize {
        self.base().m()
    }

    fn copies(&self, element: u32) -> u32 {
        copies_u32(self.weight(element))
    }

    fn unit_sets(&self, _hash: &HashSource, element: u32, _copy: u32, out: &mut Vec<u32>) {
        out.extend_from_slice(self.base().element_sets(element));
    }

    fn total_units(&self) -> u64 {
        self.expanded_size()
    }
}

impl UnitSource for FractionalInstance {
    fn set_count(&self) -> usize {
        self.base().n()
    }

    fn element_count(&self) -> usize {
        self.base().m()
    }

    fn copies(&self, _element: u32) -> u32 {
        self.resolution()
    }

    fn unit_sets(&self, _hash: &HashSource, element: u32, copy: u32, out: &mut Vec<u32>) {
        let sets = self.base().element_sets(element);
        let nums = self.numerators(element);
        out.extend(sets.iter().zip(nums).filter(|&(_, &a)| copy < a).map(|(&s, _)| s));
    }
}

/// Probabilistic instance viewed with a fixed copy count.
struct ProbabilisticExpansion<'a> {
    inst: &'a ProbabilisticInstance,
    zeta: u32,
}

impl UnitSource for ProbabilisticExpansion<'_> {
    fn set_count(&self) -> usize {
        self.inst.base().n()
    }

    fn element_count(&self) -> usize {
        self.inst.base().m()
    }

    fn copies(&self, _element: u32) -> u32 {
        self.zeta
    }

    fn unit_sets(&self, hash: &HashSource, element: u32, copy: u32, out: &mut Vec<u32>) {
        let u = self.inst.resolution() as f64;
        let sets = self.inst.base().element_sets(element);
        for (&s, &a) in sets.iter().zip(self.inst.numerators(element)) {
            if hash.edge_coin(element, copy, s) < a as f64 / u {
                out.push(s);
            }
        }
    }
}

/// Copy count `ceil(12 (n + 1 + ln n) U / eps^2)` for probabilistic expansions.
pub fn probabilistic_copies(n: usize, resolution: u32, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1], got {eps}")));
    }
    let n_f = n.max(1) as f64;
    let zeta = 12.0 * (n_f + 1.0 + n_f.ln()) * resolution as f64 / (eps * eps);
    Ok(zeta.ceil() as u64)
}

/// Sketch of the weight expansion: each copy is sampled (or ordered) by its
/// own hash, so heavier elements are proportionally more likely to appear.
pub fn sketch_weighted(winst: &WeightedInstance, params: &SketchParams, hash: &HashSource) -> Sketch {
    build_sketch_from_units(winst, params, hash)
}

/// Sketch of the `U`-copy fractional expansion.
pub fn sketch_fractional(finst: &FractionalInstance, params: &SketchParams, hash: &HashSource) -> Sketch {
    build_sketch_from_units(finst, params, hash)
}

/// Sketch of the `zeta`-copy probabilistic expansion, `zeta` from
/// [`probabilistic_copies`]. Coverage on the sketch divided by `zeta`
/// estimates probabilistic coverage.
pub fn sketch_probabilistic(
    pinst: &ProbabilisticInstance,
    eps: f64,
    params: &SketchParams,
    hash: &HashSource,
) -> Result<Sketch> {
    sketch_probabilistic_with_budget(pinst, eps, params, hash, DEFAULT_EXPANSION_BUDGET)
}

pub fn sketch_probabilistic_with_budget(
    pinst: &ProbabilisticInstance,
    eps: f64,
    params: &SketchParams,
    hash: &HashSource,
    budget: u64,
) -> Result<Sketch> {
    let zeta = probabilistic_copies(pinst.base().n(), pinst.resolution(), eps)?;
    let requested = zeta.saturating_mul(pinst.base().m() as u64);
    if requested > budget || zeta > u32::MAX as u64 {
        return Err(Error::ExpansionBudget { requested, budget });
    }
    let expansion = ProbabilisticExpansion {
        inst: pinst,
        zeta: zeta as u32,
    };
    Ok(build_sketch_from_units(&expansion, params, hash))
}
