//! Synthetic instance generators.

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CoverageInstance;
use crate::error::{invalid, Result};

/// Planted set-cover instance and its hidden optimum.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub instance: CoverageInstance,
    /// Ids of the `k` planted sets, which partition the ground set.
    pub planted: Vec<u32>,
}

/// Instance on which uniform element sampling fails, with its bonus sets.
#[derive(Debug, Clone)]
pub struct AdversarialInstance {
    pub instance: CoverageInstance,
    /// The `k` bonus sets; together they cover every element.
    pub bonus_sets: Vec<u32>,
}

/// Planted instance with `k` disjoint sets of size `m / k` covering `[0, m)`
/// and `k_prime` decoys of `ceil((1 + eps) * m / k)` elements each, drawn
/// uniformly without replacement. Set ids are a seeded permutation, so the
/// planted sets are not distinguishable by id (degree truncation keeps the
/// smallest ids and would otherwise favor them).
pub fn generate_planted(k: usize, m: usize, k_prime: usize, eps: f64, seed: u64) -> Result<PlantedInstance> {
    if k == 0 || m == 0 {
        return Err(invalid("planted instance needs k >= 1 and m >= 1"));
    }
    if !m.is_multiple_of(k) {
        return Err(invalid(format!("k = {k} must divide m = {m}")));
    }
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(invalid(format!("eps must be a finite value >= 0, got {eps}")));
    }
    let block = m / k;
    let decoy_size = (((1.0 + eps) * m as f64 / k as f64) - 1e-9).ceil() as usize;
    let decoy_size = decoy_size.min(m);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..m as u32).collect();
    order.shuffle(&mut rng);

    let mut ids: Vec<u32> = (0..(k + k_prime) as u32).collect();
    ids.shuffle(&mut rng);

    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (set, chunk) in order.chunks(block).enumerate() {
        for &e in chunk {
            lists[e as usize].push(ids[set]);
        }
    }
    for d in 0..k_prime {
        let set = ids[k + d];
        for e in index::sample(&mut rng, m, decoy_size) {
            lists[e].push(set);
        }
    }
    let instance = CoverageInstance::from_element_lists(k + k_prime, lists)?;
    let mut planted = ids[..k].to_vec();
    planted.sort_unstable();
    Ok(PlantedInstance { instance, planted })
}

/// Bonus-set construction: `n` normal elements (ids `0..n`) contained in
/// every set, and `beta * n` bonus elements (ids `n..`) split into `k`
/// groups of `beta * n / k`, group `i` belonging only to the `i`-th bonus
/// set. Which set ids are bonus sets is drawn from `seed`.
pub fn generate_adversarial(n: usize, k: usize, beta: f64, seed: u64) -> Result<AdversarialInstance> {
    if k == 0 || n < 2 || 2 * k > n {
        return Err(invalid(format!("need 1 <= k <= n/2, got n = {n}, k = {k}")));
    }
    if !(beta.is_finite() && beta >= 1.0) {
        return Err(invalid(format!("beta must be >= 1, got {beta}")));
    }
    let bonus_total = beta * n as f64;
    let per_set = bonus_total / k as f64;
    let is_int = |x: f64| (x - x.round()).abs() < 1e-9;
    if !is_int(bonus_total) || !is_int(per_set) {
        return Err(invalid(format!("beta * n / k = {per_set} must be an integer")));
    }
    let per_set = per_set.round() as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bonus_sets: Vec<u32> = index::sample(&mut rng, n, k).into_iter().map(|s| s as u32).collect();
    bonus_sets.sort_unstable();

    let all_sets: Vec<u32> = (0..n as u32).collect();
    let mut lists: Vec<Vec<u32>> = vec![all_sets; n];
    for &set in &bonus_sets {
        lists.extend(std::iter::repeat_n(vec![set], per_set));
    }
    let instance = CoverageInstance::from_element_lists(n, lists)?;
    Ok(AdversarialInstance { instance, bonus_sets })
}
