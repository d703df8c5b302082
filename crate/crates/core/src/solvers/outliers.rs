//! Set cover with outliers: cover all but a `lambda` fraction of the
//! elements with as few sets as possible.
//!
//! For each guess `g` of the optimum size on a geometric ladder, run greedy
//! until it covers `ceil((1 - lambda) m)` elements, allowing at most
//! `ceil(g (1 + eps) ln(1 / lambda))` picks. The first guess that succeeds
//! wins.

use super::greedy::GreedyState;
use super::{CoverageTarget, Solution};
use crate::error::{invalid, Error, Result};
use crate::instance::CoverageInstance;
use crate::sketch::{build_sketch, theory_params, HashSource, SketchParams};

/// Where greedy runs for each guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// On the full instance.
    Direct,
    /// On a theory-mode sketch built with `k` equal to the guess.
    Sketch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutlierSolution {
    /// Chosen sets; `value` is coverage on whatever the engine ran on.
    pub solution: Solution,
    /// Ladder guess that succeeded.
    pub guess: usize,
    /// Pick budget allowed for that guess.
    pub budget: usize,
}

/// Elements that must be covered: `ceil((1 - lambda) m)`.
pub fn required_coverage(m: usize, lambda: f64) -> usize {
    (((1.0 - lambda) * m as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Distinct values `ceil((1 + eps/3)^i)` for `i = 0, 1, ...` not exceeding
/// `n`, followed by `n` itself if the ladder skipped it.
pub fn guess_ladder(n: usize, eps: f64) -> Vec<usize> {
    let base = 1.0 + eps / 3.0;
    let mut ladder: Vec<usize> = Vec::new();
    let mut power = 1.0f64;
    loop {
        let g = (power - 1e-9).ceil().max(1.0);
        if g > n as f64 {
            break;
        }
        let g = g as usize;
        if ladder.last() != Some(&g) {
            ladder.push(g);
        }
        power *= base;
    }
    if n > 0 && ladder.last() != Some(&n) {
        ladder.push(n);
    }
    ladder
}

/// Pick budget for a guess: `ceil(g (1 + eps) ln(1 / lambda))`, at least 1.
pub fn outlier_budget(guess: usize, eps: f64, lambda: f64) -> usize {
    let b = guess as f64 * (1.0 + eps) * (1.0 / lambda).ln();
    ((b - 1e-9).ceil() as usize).max(1)
}

/// Greedy until `required` elements are covered, with at most `budget`
/// picks. `None` if the budget runs out or gains hit zero first.
pub fn greedy_partial_cover<T: CoverageTarget + ?Sized>(
    target: &T,
    budget: usize,
    required: usize,
) -> Option<Solution> {
    let path = greedy_path(target.graph(), budget, required);
    (path.covered >= required as u64).then(|| path.into_solution(target))
}

struct GreedyPath {
    chosen: Vec<u32>,
    gains: Vec<u64>,
    covered: u64,
}

impl GreedyPath {
    fn into_solution<T: CoverageTarget + ?Sized>(self, target: &T) -> Solution {
        Solution {
            chosen: self.chosen,
            value: self.covered,
            gains: self.gains,
            evaluated_on: target.evaluated_on(),
        }
    }
}

fn greedy_path(graph: &CoverageInstance, max_picks: usize, required: usize) -> GreedyPath {
    let mut state = GreedyState::new(graph);
    let mut path = GreedyPath {
        chosen: Vec::new(),
        gains: Vec::new(),
        covered: 0,
    };
    while state.covered_count < required as u64 && path.chosen.len() < max_picks {
        match state.argmax() {
            Some((s, g)) if g > 0 => {
                state.take(s);
                path.chosen.push(s);
                path.gains.push(g);
            }
            _ => break,
        }
    }
    path.covered = state.covered_count;
    path
}

fn check_args(lambda: f64, eps: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

/// Solves set cover with outliers on `instance`.
///
/// With [`Engine::Direct`] the coverage requirement is on the instance's
/// `m`; with [`Engine::Sketch`] it is on the sketch's element count, and
/// `solution.value` is sketch coverage. Fails with [`Error::Infeasible`]
/// when no guess succeeds, which for the direct engine means even all
/// sets together cover fewer than `ceil((1 - lambda) m)` elements.
pub fn set_cover_outliers(
    instance: &CoverageInstance,
    lambda: f64,
    eps: f64,
    delta_dprime: f64,
    seed: u64,
    engine: Engine,
) -> Result<OutlierSolution> {
    check_args(lambda, eps)?;
    if instance.n() == 0 || instance.m() == 0 {
        return Err(Error::EmptyInstance);
    }
    let ladder = guess_ladder(instance.n(), eps);
    match engine {
        Engine::Direct => {
            // The greedy sequence does not depend on the guess, so one run
            // decides every guess at once.
            let required = required_coverage(instance.m(), lambda);
            let path = greedy_path(instance, instance.n(), required);
            if path.covered < required as u64 {
                return Err(Error::Infeasible);
            }
            let picks = path.chosen.len();
            let (guess, budget) = ladder
                .iter()
                .map(|&g| (g, outlier_budget(g, eps, lambda)))
                .find(|&(_, b)| b >= picks)
                .ok_or(Error::Infeasible)?;
            Ok(OutlierSolution {
                solution: path.into_solution(instance),
                guess,
                budget,
            })
        }
        Engine::Sketch => {
            let hash = HashSource::new(seed);
            for &g in &ladder {
                let params = theory_params(instance.n(), instance.m(), instance.edge_count(), g, eps, delta_dprime)?;
                let sketch = build_sketch(instance, &SketchParams::Theory(params), &hash);
                let required = required_coverage(sketch.graph().m(), lambda);
                let budget = outlier_budget(g, eps, lambda);
                if let Some(solution) = greedy_partial_cover(&sketch, budget, required) {
                    return Ok(OutlierSolution {
                        solution,
                        guess: g,
                        budget,
                    });
                }
            }
            Err(Error::Infeasible)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_planted;
    use crate::solvers::tests::three_sets;
    use crate::solvers::{brute_force_set_cover, coverage};

    #[test]
    fn required_rounding() {
        assert_eq!(required_coverage(5, 0.2), 4);
        assert_eq!(required_coverage(10, 0.25), 8);
        assert_eq!(required_coverage(100, 0.1), 90);
        assert_eq!(required_coverage(7, 0.0), 7);
    }

    #[test]
    fn ladder_shape() {
        let l = guess_ladder(10, 0.3);
        assert_eq!(l[0], 1);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*l.last().unwrap(), 10);
        assert_eq!(guess_ladder(1, 0.5), vec![1]);
        assert!(guess_ladder(0, 0.5).is_empty());
    }

    #[test]
    fn budget_formula() {
        // 2 * 1.5 * ln 4 = 4.16
        assert_eq!(outlier_budget(2, 0.5, 0.25), 5);
        assert_eq!(outlier_budget(1, 0.1, 0.99), 1);
    }

    #[test]
    fn three_sets_reaches_four_with_two_sets() {
        let inst = three_sets();
        let r = set_cover_outliers(&inst, 0.2, 0.5, 0.5, 0, Engine::Direct).unwrap();
        assert_eq!(r.solution.chosen, vec![0, 2]);
        assert!(r.solution.value >= 4);
        assert_eq!(brute_force_set_cover(&inst, 0.2).unwrap().len(), 2);
    }

    #[test]
    fn partial_cover_respects_budget() {
        let inst = three_sets();
        assert!(greedy_partial_cover(&inst, 1, 4).is_none());
        assert_eq!(greedy_partial_cover(&inst, 2, 4).unwrap().value, 5);
        assert!(greedy_partial_cover(&inst, 3, 0).unwrap().is_empty());
    }

    #[test]
    fn infeasible_when_sets_miss_elements() {
        let inst = CoverageInstance::from_edges(1, 10, [(0, 0)]).unwrap();
        let err = set_cover_outliers(&inst, 0.5, 0.5, 0.5, 0, Engine::Direct).unwrap_err();
        assert_eq!(err.to_string(), "infeasible outlier fraction");
    }

    #[test]
    fn rejects_bad_lambda() {
        let inst = three_sets();
        assert!(set_cover_outliers(&inst, 0.0, 0.5, 0.5, 0, Engine::Direct).is_err());
        assert!(set_cover_outliers(&inst, 1.0, 0.5, 0.5, 0, Engine::Direct).is_err());
    }

    #[test]
    fn direct_matches_per_guess_search() {
        let inst = generate_planted(6, 300, 60, 0.2, 4).unwrap().instance;
        let (lambda, eps) = (0.1, 0.3);
        let r = set_cover_outliers(&inst, lambda, eps, 0.5, 0, Engine::Direct).unwrap();
        let required = required_coverage(inst.m(), lambda);
        let expected = guess_ladder(inst.n(), eps)
            .into_iter()
            .find_map(|g| greedy_partial_cover(&inst, outlier_budget(g, eps, lambda), required).map(|s| (g, s)))
            .unwrap();
        assert_eq!((r.guess, r.solution), expected);
    }

    #[test]
    fn sketch_engine_meets_coverage_on_planted() {
        let inst = generate_planted(8, 800, 80, 0.2, 12).unwrap().instance;
        let r = set_cover_outliers(&inst, 0.1, 0.5, 0.5, 3, Engine::Sketch).unwrap();
        assert!(r.solution.len() <= r.budget);
        let full = coverage(&inst, &r.solution.chosen).unwrap() as f64;
        assert!(full >= 0.8 * inst.m() as f64, "{full}");
    }
}
