//! Exhaustive oracles for small instances.

use super::outliers::required_coverage;
use super::{EvaluatedOn, Solution};
use crate::error::{invalid, Error, Result};
use crate::instance::CoverageInstance;

/// Largest number of candidate families enumerated by default.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// `C(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct Bitsets {
    words: usize,
    sets: Vec<u64>,
}

impl Bitsets {
    fn new(instance: &CoverageInstance) -> Self {
        let words = instance.m().div_ceil(64).max(1);
        let mut sets = vec![0u64; words * instance.n()];
        for (s, e) in instance.edges() {
            sets[s as usize * words + e as usize / 64] |= 1 << (e % 64);
        }
        Self { words, sets }
    }

    fn set(&self, s: usize) -> &[u64] {
        &self.sets[s * self.words..(s + 1) * self.words]
    }
}

/// Visits every `r`-subset of `0..n` in lexicographic order with the union
/// bitset of the current subset. The visitor returns `true` to stop.
fn for_each_subset(bits: &Bitsets, n: usize, r: usize, mut visit: impl FnMut(&[u32], &[u64]) -> bool) {
    let w = bits.words;
    let mut stack = vec![0u64; w * (r + 1)];
    let mut combo: Vec<u32> = Vec::with_capacity(r);

    fn rec(
        bits: &Bitsets,
        n: usize,
        r: usize,
        start: usize,
        combo: &mut Vec<u32>,
        stack: &mut [u64],
        visit: &mut dyn FnMut(&[u32], &[u64]) -> bool,
    ) -> bool {
        let w = bits.words;
        let depth = combo.len();
        if depth == r {
            return visit(combo, &stack[depth * w..(depth + 1) * w]);
        }
        for s in start..=n - (r - depth) {
            let (lo, hi) = stack.split_at_mut((depth + 1) * w);
            let next = &mut hi[..w];
            for ((dst, &a), &b) in next.iter_mut().zip(&lo[depth * w..]).zip(bits.set(s)) {
                *dst = a | b;
            }
            combo.push(s as u32);
            let stop = rec(bits, n, r, s + 1, combo, stack, visit);
            combo.pop();
            if stop {
                return true;
            }
        }
        false
    }

    rec(bits, n, r, 0, &mut combo, &mut stack, &mut visit);
}

fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

pub fn brute_force_kcover(instance: &CoverageInstance, k: usize) -> Result<Solution> {
    brute_force_kcover_with_budget(instance, k, DEFAULT_ENUMERATION_BUDGET)
}

/// Exact maximum k-cover by enumeration of all `C(n, min(k, n))` families.
/// Among optimal families the lexicographically smallest (sorted ids) wins.
pub fn brute_force_kcover_with_budget(instance: &CoverageInstance, k: usize, budget: u64) -> Result<Solution> {
    let n = instance.n();
    let k = k.min(n);
    let requested = binomial(n, k);
    if requested > budget as u128 {
        return Err(Error::EnumerationBudget { requested, budget });
    }
    let bits = Bitsets::new(instance);
    let mut best: Option<(u64, Vec<u32>)> = None;
    for_each_subset(&bits, n, k, |combo, union| {
        let v = popcount(union);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, combo.to_vec()));
        }
        false
    });
    let (value, chosen) = best.unwrap_or_default();
    Ok(Solution {
        chosen,
        value,
        gains: Vec::new(),
        evaluated_on: EvaluatedOn::Instance,
    })
}

pub fn brute_force_set_cover(instance: &CoverageInstance, lambda: f64) -> Result<Solution> {
    brute_force_set_cover_with_budget(instance, lambda, DEFAULT_ENUMERATION_BUDGET)
}

/// Smallest family covering at least `ceil((1 - lambda) m)` elements,
/// `lambda` in `[0, 1)`. Sizes are tried in increasing order; the first
/// qualifying family in lexicographic order is returned.
pub fn brute_force_set_cover_with_budget(instance: &CoverageInstance, lambda: f64, budget: u64) -> Result<Solution> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(invalid(format!("lambda must lie in [0, 1), got {lambda}")));
    }
    let n = instance.n();
    let required = required_coverage(instance.m(), lambda) as u64;
    let bits = Bitsets::new(instance);
    let mut spent: u128 = 0;
    for r in 0..=n {
        spent = spent.saturating_add(binomial(n, r));
        if spent > budget as u128 {
            return Err(Error::EnumerationBudget {
                requested: spent,
                budget,
            });
        }
        let mut found = None;
        for_each_subset(&bits, n, r, |combo, union| {
            let v = popcount(union);
            if v >= required {
                found = Some((v, combo.to_vec()));
                return true;
            }
            false
        });
        if let Some((value, chosen)) = found {
            return Ok(Solution {
                chosen,
                value,
                gains: Vec::new(),
                evaluated_on: EvaluatedOn::Instance,
            });
        }
    }
    Err(Error::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_planted;
    use crate::solvers::tests::three_sets;
    use crate::solvers::{coverage, greedy_kcover};

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(100, 50), 100891344545564193334812497256);
    }

    #[test]
    fn three_sets_optimum() {
        let inst = three_sets();
        let sol = brute_force_kcover(&inst, 2).unwrap();
        assert_eq!(sol.chosen, vec![0, 2]);
        assert_eq!(sol.value, 5);
        assert_eq!(brute_force_kcover(&inst, 0).unwrap().value, 0);
        assert_eq!(brute_force_kcover(&inst, 9).unwrap().value, 5);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = generate_planted(5, 200, 60, 0.2, 1).unwrap().instance;
        let err = brute_force_kcover_with_budget(&inst, 5, 100).unwrap_err();
        assert!(matches!(err, Error::EnumerationBudget { .. }));
    }

    #[test]
    fn planted_full_cover_has_size_k() {
        let p = generate_planted(5, 25, 10, 0.2, 7).unwrap();
        let sol = brute_force_set_cover(&p.instance, 0.0).unwrap();
        assert_eq!(sol.len(), 5);
        assert_eq!(sol.value, 25);
        assert_eq!(coverage(&p.instance, &sol.chosen).unwrap(), 25);
    }

    #[test]
    fn set_cover_with_outliers_shrinks() {
        let inst = three_sets();
        assert_eq!(brute_force_set_cover(&inst, 0.0).unwrap().chosen, vec![0, 2]);
        assert_eq!(brute_force_set_cover(&inst, 0.4).unwrap().chosen, vec![0]);
        assert!(brute_force_set_cover(&inst, 1.0).is_err());
    }

    #[test]
    fn greedy_within_one_minus_inv_e() {
        let bound = 1.0 - (-1f64).exp();
        for seed in 0..20 {
            let inst = generate_planted(3, 60, 8, 0.3, seed).unwrap().instance;
            for k in 1..=3 {
                let opt = brute_force_kcover(&inst, k).unwrap().value as f64;
                let g = greedy_kcover(&inst, k).value as f64;
                assert!(g >= bound * opt - 1e-9, "seed {seed} k {k}: {g} vs {opt}");
            }
        }
    }
}
