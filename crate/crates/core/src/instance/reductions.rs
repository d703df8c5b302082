//! Reductions from dominating set and feature selection into coverage form.

use std::collections::VecDeque;

use super::CoverageInstance;
use crate::error::{invalid, Error, Result};

/// Coverage instance whose set `a` holds every vertex within `hops` edges of
/// `a` (including `a`). A k-cover on it is a k-dominating set over
/// `hops`-hop neighborhoods, with the same value.
///
/// `adjacency[v]` lists the neighbors of `v`; edges are read as undirected
/// and self-loops are ignored.
pub fn khop_dominating_instance(adjacency: &[Vec<u32>], hops: usize) -> Result<CoverageInstance> {
    if !(1..=3).contains(&hops) {
        return Err(invalid(format!("hops must be 1, 2 or 3, got {hops}")));
    }
    let v_count = adjacency.len();
    if v_count == 0 {
        return Err(Error::EmptyInstance);
    }
    let mut undirected: Vec<Vec<u32>> = vec![Vec::new(); v_count];
    for (u, nbrs) in adjacency.iter().enumerate() {
        for &w in nbrs {
            if w as usize >= v_count {
                return Err(invalid(format!("vertex {u} has neighbor {w} outside 0..{v_count}")));
            }
            if w as usize != u {
                undirected[u].push(w);
                undirected[w as usize].push(u as u32);
            }
        }
    }
    for nbrs in &mut undirected {
        nbrs.sort_unstable();
        nbrs.dedup();
    }

    // Reachability is symmetric, so the vertices within `hops` of `b` are
    // exactly the sets that contain element `b`.
    let mut lists = Vec::with_capacity(v_count);
    let mut dist = vec![usize::MAX; v_count];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for b in 0..v_count {
        dist[b] = 0;
        touched.push(b);
        queue.push_back(b);
        while let Some(u) = queue.pop_front() {
            if dist[u] == hops {
                continue;
            }
            for &w in &undirected[u] {
                let w = w as usize;
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut reach: Vec<u32> = touched.iter().map(|&u| u as u32).collect();
        reach.sort_unstable();
        lists.push(reach);
        for &u in &touched {
            dist[u] = usize::MAX;
        }
        touched.clear();
    }
    CoverageInstance::from_element_lists(v_count, lists)
}

/// Adjacency lists from an undirected edge list over `vertex_count` vertices.
pub fn adjacency_from_edges(vertex_count: usize, edges: &[(u32, u32)]) -> Result<Vec<Vec<u32>>> {
    let mut adj = vec![Vec::new(); vertex_count];
    for &(u, v) in edges {
        if u as usize >= vertex_count || v as usize >= vertex_count {
            return Err(invalid(format!("edge ({u}, {v}) outside 0..{vertex_count}")));
        }
        adj[u as usize].push(v);
    }
    Ok(adj)
}

/// Integer code `r1 * rows + r2` of the unordered row pair `{r1, r2}`, `r1 < r2`.
pub fn pair_element_id(r1: usize, r2: usize, rows: usize) -> u64 {
    let (a, b) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    (a * rows + b) as u64
}

/// Feature-selection coverage instance: columns are sets, row pairs are
/// elements, and column `c` covers `{r1, r2}` iff both rows are active in
/// `c`. Only covered pairs are materialized; element ids are dense, in
/// increasing order of their pair code, and `pair_codes[e]` recovers the
/// code of element `e`.
#[derive(Debug, Clone)]
pub struct FeaturePairs {
    pub instance: CoverageInstance,
    pub pair_codes: Vec<u64>,
}

pub fn feature_pairs_instance(matrix: &[Vec<u8>]) -> Result<FeaturePairs> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    for (r, row) in matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(format!("row {r} has {} columns, expected {cols}", row.len())));
        }
        if let Some(c) = row.iter().position(|&x| x > 1) {
            return Err(invalid(format!("entry ({r}, {c}) = {} is not binary", row[c])));
        }
    }
    let mut incidences: Vec<(u64, u32)> = Vec::new();
    for c in 0..cols {
        let active: Vec<usize> = matrix
            .iter()
            .enumerate()
            .filter(|(_, row)| row[c] == 1)
            .map(|(r, _)| r)
            .collect();
        for (i, &r1) in active.iter().enumerate() {
            for &r2 in &active[i + 1..] {
                incidences.push((pair_element_id(r1, r2, rows), c as u32));
            }
        }
    }
    if incidences.is_empty() {
        return Err(Error::EmptyInstance);
    }
    incidences.sort_unstable();
    let mut pair_codes: Vec<u64> = Vec::new();
    let mut lists: Vec<Vec<u32>> = Vec::new();
    for (code, col) in incidences {
        if pair_codes.last() != Some(&code) {
            pair_codes.push(code);
            lists.push(Vec::new());
        }
        lists.last_mut().unwrap().push(col);
    }
    Ok(FeaturePairs {
        instance: CoverageInstance::from_element_lists(cols, lists)?,
        pair_codes,
    })
}
