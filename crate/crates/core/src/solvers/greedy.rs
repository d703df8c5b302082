use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CoverageTarget, Solution};
use crate::instance::CoverageInstance;

/// Incremental greedy state with exact marginal gains.
///
/// `gains[s]` is kept equal to the number of uncovered elements of `s`;
/// covering element `e` decrements the gain of every set containing `e`.
pub(crate) struct GreedyState<'a> {
    graph: &'a CoverageInstance,
    covered: Vec<bool>,
    gains: Vec<u64>,
    taken: Vec<bool>,
    pub(crate) covered_count: u64,
    pub(crate) evaluations: u64,
}

impl<'a> GreedyState<'a> {
    pub(crate) fn new(graph: &'a CoverageInstance) -> Self {
        Self {
            graph,
            covered: vec![false; graph.m()],
            gains: (0..graph.n() as u32).map(|s| graph.set_size(s) as u64).collect(),
            taken: vec![false; graph.n()],
            covered_count: 0,
            evaluations: 0,
        }
    }

    /// Best untaken set by `(gain, smallest id)`.
    pub(crate) fn argmax(&mut self) -> Option<(u32, u64)> {
        let mut best: Option<(u32, u64)> = None;
        for s in 0..self.graph.n() {
            if self.taken[s] {
                continue;
            }
            self.evaluations += 1;
            let g = self.gains[s];
            if best.is_none_or(|(_, bg)| g > bg) {
                best = Some((s as u32, g));
            }
        }
        best
    }

    pub(crate) fn take(&mut self, set: u32) -> u64 {
        self.taken[set as usize] = true;
        let mut gained = 0;
        for &e in self.graph.set_elements(set) {
            if !std::mem::replace(&mut self.covered[e as usize], true) {
                gained += 1;
                for &t in self.graph.element_sets(e) {
                    self.gains[t as usize] -= 1;
                }
            }
        }
        self.covered_count += gained;
        gained
    }
}

/// Greedy maximum k-cover: `min(k, n)` picks, each maximizing marginal
/// coverage with ties to the smallest id. Once every gain is zero the
/// remaining picks fill in increasing id order.
pub fn greedy_kcover<T: CoverageTarget + ?Sized>(target: &T, k: usize) -> Solution {
    greedy_kcover_counted(target, k).0
}

/// [`greedy_kcover`] plus the number of marginal-gain evaluations.
pub fn greedy_kcover_counted<T: CoverageTarget + ?Sized>(target: &T, k: usize) -> (Solution, u64) {
    let graph = target.graph();
    let mut state = GreedyState::new(graph);
    let mut sol = Solution::empty(target.evaluated_on());
    for _ in 0..k.min(graph.n()) {
        let (s, _) = state.argmax().expect("untaken set remains");
        let gained = state.take(s);
        sol.chosen.push(s);
        sol.gains.push(gained);
    }
    sol.value = state.covered_count;
    (sol, state.evaluations)
}

/// Lazy greedy with cached upper bounds; returns exactly what
/// [`greedy_kcover`] returns.
pub fn lazy_greedy<T: CoverageTarget + ?Sized>(target: &T, k: usize) -> Solution {
    lazy_greedy_counted(target, k).0
}

/// [`lazy_greedy`] plus the number of fresh marginal-gain evaluations.
pub fn lazy_greedy_counted<T: CoverageTarget + ?Sized>(target: &T, k: usize) -> (Solution, u64) {
    let graph = target.graph();
    let mut covered = vec![false; graph.m()];
    let mut heap: BinaryHeap<(u64, Reverse<u32>)> = (0..graph.n() as u32)
        .map(|s| (graph.set_size(s) as u64, Reverse(s)))
        .collect();
    let mut sol = Solution::empty(target.evaluated_on());
    let mut evaluations = 0u64;
    while sol.chosen.len() < k.min(graph.n()) {
        let (_, Reverse(s)) = heap.pop().expect("untaken set remains");
        let fresh = graph.set_elements(s).iter().filter(|&&e| !covered[e as usize]).count() as u64;
        evaluations += 1;
        // Stale keys bound true keys from above, and keys are unique per id,
        // so beating the best stale key means beating every true key.
        if heap.peek().is_none_or(|top| (fresh, Reverse(s)) >= *top) {
            for &e in graph.set_elements(s) {
                covered[e as usize] = true;
            }
            sol.chosen.push(s);
            sol.gains.push(fresh);
            sol.value += fresh;
        } else {
            heap.push((fresh, Reverse(s)));
        }
    }
    (sol, evaluations)
}

/// Candidates per step, `ceil((n / k) * ln(1 / eps))`.
pub fn stochastic_sample_size(n: usize, k: usize, eps: f64) -> usize {
    ((n as f64 / k.max(1) as f64) * (1.0 / eps).ln()).ceil().max(1.0) as usize
}

/// Stochastic greedy: each of the `k` steps draws
/// [`stochastic_sample_size`] candidates uniformly with replacement from
/// the untaken sets and takes the best (ties to the smallest id). When the
/// sample size reaches `n` this is a full scan, i.e. [`greedy_kcover`].
pub fn stochastic_greedy<T: CoverageTarget + ?Sized>(target: &T, k: usize, eps: f64, seed: u64) -> Solution {
    let graph = target.graph();
    let n = graph.n();
    let k = k.min(n);
    if k == 0 {
        return Solution::empty(target.evaluated_on());
    }
    let sample = stochastic_sample_size(n, k, eps);
    if sample >= n {
        return greedy_kcover(target, k);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = vec![false; graph.m()];
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut sol = Solution::empty(target.evaluated_on());
    for _ in 0..k {
        let mut best: Option<(u64, Reverse<u32>, usize)> = None;
        for _ in 0..sample {
            let idx = rng.random_range(0..pool.len());
            let s = pool[idx];
            let gain = graph.set_elements(s).iter().filter(|&&e| !covered[e as usize]).count() as u64;
            let key = (gain, Reverse(s), idx);
            if best.is_none_or(|b| (key.0, key.1) > (b.0, b.1)) {
                best = Some(key);
            }
        }
        let (gain, Reverse(s), idx) = best.expect("sample is nonempty");
        pool.swap_remove(idx);
        for &e in graph.set_elements(s) {
            covered[e as usize] = true;
        }
        sol.chosen.push(s);
        sol.gains.push(gain);
        sol.value += gain;
    }
    sol
}
