//! Greedy-family solvers, set cover with outliers, and exact oracles.
//!
//! Every solver breaks ties toward the smallest set id, so runs on equal
//! inputs agree exactly (eager vs lazy greedy, sketch vs simulated
//! pipeline).

mod exact;
mod greedy;
mod outliers;

use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::instance::{CoverageInstance, FractionalInstance, ProbabilisticInstance, WeightedInstance};
use crate::sketch::Sketch;

pub use exact::{
    binomial, brute_force_kcover, brute_force_kcover_with_budget, brute_force_set_cover,
    brute_force_set_cover_with_budget, DEFAULT_ENUMERATION_BUDGET,
};
pub use greedy::{
    greedy_kcover, greedy_kcover_counted, lazy_greedy, lazy_greedy_counted, stochastic_greedy, stochastic_sample_size,
};
pub use outliers::{
    greedy_partial_cover, guess_ladder, outlier_budget, required_coverage, set_cover_outliers, Engine, OutlierSolution,
};

/// What a solution's value was measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluatedOn {
    Instance,
    Sketch,
}

/// Anything a solver can run on.
pub trait CoverageTarget {
    fn graph(&self) -> &CoverageInstance;
    fn evaluated_on(&self) -> EvaluatedOn;
}

impl CoverageTarget for CoverageInstance {
    fn graph(&self) -> &CoverageInstance {
        self
    }

    fn evaluated_on(&self) -> EvaluatedOn {
        EvaluatedOn::Instance
    }
}

impl CoverageTarget for Sketch {
    fn graph(&self) -> &CoverageInstance {
        Sketch::graph(self)
    }

    fn evaluated_on(&self) -> EvaluatedOn {
        EvaluatedOn::Sketch
    }
}

/// Chosen sets in pick order and the coverage they achieve on the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub chosen: Vec<u32>,
    pub value: u64,
    /// Marginal gain of each pick, when the solver tracks it.
    pub gains: Vec<u64>,
    pub evaluated_on: EvaluatedOn,
}

impl Solution {
    pub fn empty(evaluated_on: EvaluatedOn) -> Self {
        Self {
            chosen: Vec::new(),
            value: 0,
            gains: Vec::new(),
            evaluated_on,
        }
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// Text form: `value=<v> k=<k>` followed by one set id per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("value={} k={}\n", self.value, self.chosen.len());
        for id in &self.chosen {
            s.push_str(&id.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Reads the text form written by [`Solution::to_text`]. Gains are not
/// stored, and the target is recorded as [`EvaluatedOn::Instance`].
pub fn parse_solution<R: BufRead>(source: R) -> Result<Solution> {
    let mut lines = source.lines();
    let header = lines.next().transpose()?.ok_or(Error::Parse {
        line: 1,
        message: "missing `value=<v> k=<k>` header".into(),
    })?;
    let mut value = None;
    let mut k = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("value", v)) => value = v.parse::<u64>().ok(),
            Some(("k", v)) => k = v.parse::<usize>().ok(),
            _ => {}
        }
    }
    let (value, k) = value.zip(k).ok_or(Error::Parse {
        line: 1,
        message: format!("malformed solution header {header:?}"),
    })?;
    let mut chosen = Vec::with_capacity(k);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        chosen.push(t.parse::<u32>().map_err(|_| Error::Parse {
            line: i + 2,
            message: format!("malformed set id {t:?}"),
        })?);
    }
    if chosen.len() != k {
        return Err(Error::Parse {
            line: 1,
            message: format!("header says k={k} but {} ids follow", chosen.len()),
        });
    }
    Ok(Solution {
        chosen,
        value,
        gains: Vec::new(),
        evaluated_on: EvaluatedOn::Instance,
    })
}

fn chosen_mask(n: usize, chosen: &[u32]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &s in chosen {
        if s as usize >= n {
            return Err(Error::InvalidSetId { id: s, n });
        }
        mask[s as usize] = true;
    }
    Ok(mask)
}

/// Size of the union of the chosen sets.
pub fn coverage<T: CoverageTarget + ?Sized>(target: &T, chosen: &[u32]) -> Result<u64> {
    let g = target.graph();
    let mut covered = vec![false; g.m()];
    for &s in chosen {
        g.check_set(s)?;
    }
    let mut total = 0u64;
    for &s in chosen {
        for &e in g.set_elements(s) {
            if !std::mem::replace(&mut covered[e as usize], true) {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// Total weight of the elements covered by the chosen sets.
pub fn coverage_weighted(target: &WeightedInstance, chosen: &[u32]) -> Result<u64> {
    let g = target.base();
    let mask = chosen_mask(g.n(), chosen)?;
    Ok((0..g.m() as u32)
        .filter(|&e| g.element_sets(e).iter().any(|&s| mask[s as usize]))
        .map(|e| target.weight(e))
        .sum())
}

/// `sum_v max_{S in chosen} alpha[S][v]`, in units of `1 / U`.
pub fn coverage_fractional_units(target: &FractionalInstance, chosen: &[u32]) -> Result<u64> {
    let g = target.base();
    let mask = chosen_mask(g.n(), chosen)?;
    Ok((0..g.m() as u32)
        .map(|e| {
            g.element_sets(e)
                .iter()
                .zip(target.numerators(e))
                .filter(|(&s, _)| mask[s as usize])
                .map(|(_, &a)| a as u64)
                .max()
                .unwrap_or(0)
        })
        .sum())
}

/// `sum_v max_{S in chosen} alpha[S][v]`.
pub fn coverage_fractional(target: &FractionalInstance, chosen: &[u32]) -> Result<f64> {
    Ok(coverage_fractional_units(target, chosen)? as f64 / target.resolution() as f64)
}

/// `sum_v (1 - prod_{S in chosen} (1 - alpha[S][v]))`.
pub fn coverage_probabilistic(target: &ProbabilisticInstance, chosen: &[u32]) -> Result<f64> {
    let g = target.base();
    let mask = chosen_mask(g.n(), chosen)?;
    let u = target.resolution() as f64;
    Ok((0..g.m() as u32)
        .map(|e| {
            let miss: f64 = g
                .element_sets(e)
                .iter()
                .zip(target.numerators(e))
                .filter(|(&s, _)| mask[s as usize])
                .map(|(_, &a)| 1.0 - a as f64 / u)
                .product();
            1.0 - miss
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// S0 = {a, b, c}, S1 = {c, d}, S2 = {d, e}
    pub(crate) fn three_sets() -> CoverageInstance {
        CoverageInstance::from_edges(3, 5, [(0, 0), (0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4)]).unwrap()
    }

    #[test]
    fn coverage_basics() {
        let inst = three_sets();
        assert_eq!(coverage(&inst, &[]).unwrap(), 0);
        assert_eq!(coverage(&inst, &[0, 1]).unwrap(), 4);
        assert_eq!(coverage(&inst, &[0, 1, 2]).unwrap(), 5);
        assert!(matches!(coverage(&inst, &[3]), Err(Error::InvalidSetId { id: 3, .. })));
    }

    #[test]
    fn weighted_sum() {
        let base = CoverageInstance::from_edges(1, 2, [(0, 0), (0, 1)]).unwrap();
        let w = WeightedInstance::new(base, vec![2, 3], 3).unwrap();
        assert_eq!(coverage_weighted(&w, &[0]).unwrap(), 5);
        assert_eq!(coverage_weighted(&w, &[]).unwrap(), 0);
        assert!(coverage_weighted(&w, &[1]).is_err());
    }

    #[test]
    fn fractional_takes_max() {
        let f = FractionalInstance::new(2, 1, 4, &[(0, 0, 1), (1, 0, 3)]).unwrap();
        assert_eq!(coverage_fractional(&f, &[0, 1]).unwrap(), 0.75);
        assert_eq!(coverage_fractional_units(&f, &[0]).unwrap(), 1);
    }

    #[test]
    fn probabilistic_closed_form() {
        let p = ProbabilisticInstance::new(2, 1, 2, &[(0, 0, 1), (1, 0, 1)]).unwrap();
        assert!((coverage_probabilistic(&p, &[0, 1]).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(coverage_probabilistic(&p, &[]).unwrap(), 0.0);
    }

    #[test]
    fn solution_text_roundtrip() {
        let sol = Solution {
            chosen: vec![4, 0, 9],
            value: 17,
            gains: vec![9, 5, 3],
            evaluated_on: EvaluatedOn::Sketch,
        };
        let text = sol.to_text();
        assert!(text.starts_with("value=17 k=3\n4\n0\n9\n"));
        let back = parse_solution(text.as_bytes()).unwrap();
        assert_eq!(back.chosen, sol.chosen);
        assert_eq!(back.value, 17);
        assert!(parse_solution("value=1 k=2\n3\n".as_bytes()).is_err());
    }
}
