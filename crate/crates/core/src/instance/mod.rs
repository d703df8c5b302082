//! Coverage instances: a family of `n` sets over `m` elements, stored as
//! a bipartite graph with both element-major and set-major adjacency.

mod generators;
mod io;
mod reductions;
mod weighted;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub use generators::{generate_adversarial, generate_planted, AdversarialInstance, PlantedInstance};
pub use io::{load_edge_list, parse_edge_list, write_edge_list, EdgeRecord, ParsedEdgeList};
pub use reductions::{
    adjacency_from_edges, feature_pairs_instance, khop_dominating_instance, pair_element_id, FeaturePairs,
};
pub use weighted::{
    load_fractional, load_probabilistic, load_weighted, FractionalInstance, ProbabilisticInstance, WeightedInstance,
};

/// Bipartite coverage instance with dense 0-based ids.
///
/// Edge lists are sorted ascending and free of duplicates, so "the first
/// `c` entries" of an element's list are its `c` smallest set ids.
#[derive(Clone, PartialEq, Eq)]
pub struct CoverageInstance {
    n: usize,
    element_offsets: Vec<usize>,
    element_sets: Vec<u32>,
    set_offsets: Vec<usize>,
    set_elements: Vec<u32>,
}

impl CoverageInstance {
    /// Builds an instance from per-element set lists. Lists are sorted and
    /// deduplicated; every set id must be below `n`.
    pub fn from_element_lists(n: usize, mut lists: Vec<Vec<u32>>) -> Result<Self> {
        for (element, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&last) = list.last() {
                if last as usize >= n {
                    return Err(Error::InvalidParameter(format!(
                        "element {element} references set {last} but n = {n}"
                    )));
                }
            }
        }
        let mut element_offsets = Vec::with_capacity(lists.len() + 1);
        element_offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut element_sets = Vec::with_capacity(total);
        for list in &lists {
            element_sets.extend_from_slice(list);
            element_offsets.push(element_sets.len());
        }
        Ok(Self::from_csr(n, element_offsets, element_sets))
    }

    /// Builds an instance from `(set, element)` pairs with explicit dimensions.
    pub fn from_edges(n: usize, m: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut lists = vec![Vec::new(); m];
        for (set, element) in edges {
            let slot = lists
                .get_mut(element as usize)
                .ok_or_else(|| Error::InvalidParameter(format!("element {element} out of range (m = {m})")))?;
            slot.push(set);
        }
        Self::from_element_lists(n, lists)
    }

    /// Builds from element-major CSR arrays whose lists are already sorted
    /// and deduplicated.
    pub(crate) fn from_csr(n: usize, element_offsets: Vec<usize>, element_sets: Vec<u32>) -> Self {
        let mut set_sizes = vec![0usize; n];
        for &s in &element_sets {
            set_sizes[s as usize] += 1;
        }
        let mut set_offsets = Vec::with_capacity(n + 1);
        set_offsets.push(0);
        for size in &set_sizes {
            set_offsets.push(set_offsets.last().unwrap() + size);
        }
        let mut cursor = set_offsets[..n].to_vec();
        let mut set_elements = vec![0u32; element_sets.len()];
        // Elements are visited in increasing id order, so set lists come out sorted.
        for element in 0..element_offsets.len() - 1 {
            for &s in &element_sets[element_offsets[element]..element_offsets[element + 1]] {
                set_elements[cursor[s as usize]] = element as u32;
                cursor[s as usize] += 1;
            }
        }
        Self {
            n,
            element_offsets,
            element_sets,
            set_offsets,
            set_elements,
        }
    }

    /// Number of sets.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements.
    pub fn m(&self) -> usize {
        self.element_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.element_sets.len()
    }

    /// Sorted set ids containing `element`.
    pub fn element_sets(&self, element: u32) -> &[u32] {
        let e = element as usize;
        &self.element_sets[self.element_offsets[e]..self.element_offsets[e + 1]]
    }

    /// Sorted element ids contained in `set`.
    pub fn set_elements(&self, set: u32) -> &[u32] {
        let s = set as usize;
        &self.set_elements[self.set_offsets[s]..self.set_offsets[s + 1]]
    }

    pub fn element_degree(&self, element: u32) -> usize {
        let e = element as usize;
        self.element_offsets[e + 1] - self.element_offsets[e]
    }

    pub fn set_size(&self, set: u32) -> usize {
        let s = set as usize;
        self.set_offsets[s + 1] - self.set_offsets[s]
    }

    /// All `(set, element)` pairs in set-major order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |s| self.set_elements(s).iter().map(move |&e| (s, e)))
    }

    /// Count of elements that no set contains. Only positional id gaps in
    /// loaded files produce these.
    pub fn isolated_elements(&self) -> usize {
        (0..self.m() as u32).filter(|&e| self.element_degree(e) == 0).count()
    }

    /// Checks that `id` names a set of this instance.
    pub fn check_set(&self, id: u32) -> Result<()> {
        if (id as usize) < self.n {
            Ok(())
        } else {
            Err(Error::InvalidSetId { id, n: self.n })
        }
    }

    /// Copy of this instance with every set duplicated: set `s` and set
    /// `s + n` have the same elements.
    pub fn with_duplicated_sets(&self) -> Self {
        let n = self.n;
        let lists = (0..self.m() as u32)
            .map(|e| {
                let sets = self.element_sets(e);
                sets.iter().copied().chain(sets.iter().map(|&s| s + n as u32)).collect()
            })
            .collect();
        Self::from_element_lists(2 * n, lists).expect("duplicated ids stay in range")
    }

    pub fn stats(&self) -> InstanceStats {
        stats(self)
    }
}

impl fmt::Debug for CoverageInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoverageInstance")
            .field("n", &self.n)
            .field("m", &self.m())
            .field("edge_count", &self.edge_count())
            .finish()
    }
}

/// Summary statistics of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceStats {
    pub n: usize,
    pub m: usize,
    pub edge_count: usize,
    pub max_element_degree: usize,
    pub max_set_size: usize,
    /// degree -> number of elements with that degree
    pub element_degree_histogram: BTreeMap<usize, usize>,
    /// size -> number of sets with that size
    pub set_size_histogram: BTreeMap<usize, usize>,
}

pub fn stats(instance: &CoverageInstance) -> InstanceStats {
    let mut element_degree_histogram = BTreeMap::new();
    for e in 0..instance.m() as u32 {
        *element_degree_histogram.entry(instance.element_degree(e)).or_insert(0) += 1;
    }
    let mut set_size_histogram = BTreeMap::new();
    for s in 0..instance.n() as u32 {
        *set_size_histogram.entry(instance.set_size(s)).or_insert(0) += 1;
    }
    InstanceStats {
        n: instance.n(),
        m: instance.m(),
        edge_count: instance.edge_count(),
        max_element_degree: element_degree_histogram.keys().next_back().copied().unwrap_or(0),
        max_set_size: set_size_histogram.keys().next_back().copied().unwrap_or(0),
        element_degree_histogram,
        set_size_histogram,
    }
}

fn histogram_text(hist: &BTreeMap<usize, usize>) -> String {
    hist.iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for InstanceStats {
    /// Single-line `key=value` rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m={} edge_count={} max_element_degree={} max_set_size={} element_degree_hist={} set_size_hist={}",
            self.n,
            self.m,
            self.edge_count,
            self.max_element_degree,
            self.max_set_size,
            histogram_text(&self.element_degree_histogram),
            histogram_text(&self.set_size_histogram),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CoverageInstance {
        CoverageInstance::from_edges(2, 2, [(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn adjacency_views_agree() {
        let inst = small();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.m(), 2);
        assert_eq!(inst.edge_count(), 3);
        assert_eq!(inst.set_elements(0), &[0, 1]);
        assert_eq!(inst.set_elements(1), &[1]);
        assert_eq!(inst.element_sets(1), &[0, 1]);
        let from_sets: usize = (0..2).map(|s| inst.set_size(s)).sum();
        let from_elements: usize = (0..2).map(|e| inst.element_degree(e)).sum();
        assert_eq!(from_sets, 3);
        assert_eq!(from_elements, 3);
    }

    #[test]
    fn stats_small() {
        let st = small().stats();
        assert_eq!(st.max_set_size, 2);
        assert_eq!(st.max_element_degree, 2);
        assert_eq!(
            st.to_string(),
            "n=2 m=2 edge_count=3 max_element_degree=2 max_set_size=2 element_degree_hist=1:1,2:1 set_size_hist=1:1,2:1"
        );
    }

    #[test]
    fn stats_single_edge() {
        let st = CoverageInstance::from_edges(1, 1, [(0, 0)]).unwrap().stats();
        assert_eq!((st.n, st.m, st.edge_count), (1, 1, 1));
        assert_eq!(st.max_set_size, 1);
        assert_eq!(st.max_element_degree, 1);
    }

    #[test]
    fn duplicate_pairs_collapse() {
        let inst = CoverageInstance::from_edges(1, 1, [(0, 0), (0, 0)]).unwrap();
        assert_eq!(inst.edge_count(), 1);
    }

    #[test]
    fn out_of_range_set_rejected() {
        assert!(CoverageInstance::from_edges(1, 1, [(3, 0)]).is_err());
        assert!(CoverageInstance::from_edges(1, 1, [(0, 4)]).is_err());
    }

    #[test]
    fn duplicating_sets_doubles_family() {
        let dup = small().with_duplicated_sets();
        assert_eq!(dup.n(), 4);
        assert_eq!(dup.set_elements(2), small().set_elements(0));
        assert_eq!(dup.edge_count(), 6);
    }
}
