//! Sketch parameterizations.

use std::fmt;

use crate::error::{invalid, Result};

/// Default `delta''` when none is given.
pub const DEFAULT_DELTA_DPRIME: f64 = 0.5;

/// Derived `(target edges, degree cap, delta)` for a given `(k, eps, delta'')`.
///
/// All logarithms are natural.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams {
    pub k: usize,
    pub eps: f64,
    pub delta_dprime: f64,
    /// `delta'' * ln(max(2, ceil(ln m / ln(1 / (1 - eps)))))`
    pub delta: f64,
    /// Edge mass `ñ` the sketch must reach.
    pub target_edges: usize,
    /// Per-element degree cap `Δ`.
    pub degree_cap: usize,
}

impl TheoryParams {
    /// Replaces the target edge mass (for equal-budget comparisons).
    pub fn with_target_edges(mut self, target_edges: usize) -> Self {
        self.target_edges = target_edges.max(1);
        self
    }

    /// Replaces the degree cap.
    pub fn with_degree_cap(mut self, degree_cap: usize) -> Self {
        self.degree_cap = degree_cap.max(1);
        self
    }

    /// Same `eps`/`delta''` and target, degree cap recomputed for another `k`.
    pub fn for_k(&self, n: usize, k: usize) -> Result<Self> {
        check_k(n, k)?;
        Ok(Self {
            k,
            degree_cap: degree_cap(n, k, self.eps),
            ..*self
        })
    }
}

/// Practical knobs: element sampling probability and degree cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PracticalParams {
    pub rho: f64,
    pub sigma: usize,
}

impl PracticalParams {
    pub fn new(rho: f64, sigma: usize) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(invalid(format!("rho must lie in (0, 1], got {rho}")));
        }
        if sigma == 0 {
            return Err(invalid("sigma must be >= 1"));
        }
        Ok(Self { rho, sigma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SketchParams {
    Theory(TheoryParams),
    Practical(PracticalParams),
}

impl SketchParams {
    pub fn degree_cap(&self) -> usize {
        match self {
            SketchParams::Theory(t) => t.degree_cap,
            SketchParams::Practical(p) => p.sigma,
        }
    }
}

impl fmt::Display for SketchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SketchParams::Theory(t) => write!(
                f,
                "mode=theory k={} eps={} delta_dprime={} delta={:.6} target_edges={} degree_cap={}",
                t.k, t.eps, t.delta_dprime, t.delta, t.target_edges, t.degree_cap
            ),
            SketchParams::Practical(p) => write!(f, "mode=practical rho={} sigma={}", p.rho, p.sigma),
        }
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!("k must lie in [1, n = {n}], got {k}")));
    }
    Ok(())
}

fn degree_cap(n: usize, k: usize, eps: f64) -> usize {
    let cap = n as f64 * (1.0 / eps).ln() / (eps * k as f64);
    (cap.ceil() as usize).max(1)
}

/// Theory-mode parameters for an instance with `n` sets, `m` elements and
/// `edge_count` edges. `eps` must lie strictly inside `(0, 1)`.
pub fn theory_params(
    n: usize,
    m: usize,
    edge_count: usize,
    k: usize,
    eps: f64,
    delta_dprime: f64,
) -> Result<TheoryParams> {
    check_k(n, k)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1) in theory mode, got {eps}")));
    }
    if !(delta_dprime > 0.0 && delta_dprime <= 1.0) {
        return Err(invalid(format!("delta'' must lie in (0, 1], got {delta_dprime}")));
    }
    if m < 2 {
        return Err(invalid(format!("theory mode needs m >= 2, got {m}")));
    }
    let ln_inv_eps = (1.0 / eps).ln();
    let guesses = ((m as f64).ln() / (1.0 / (1.0 - eps)).ln()).ceil().max(2.0);
    let delta = delta_dprime * guesses.ln();
    let raw = 24.0 * n as f64 * delta * ln_inv_eps * (n as f64).ln() / ((1.0 - eps) * eps.powi(3));
    let target_edges = if raw.is_finite() { raw.ceil() } else { f64::MAX };
    let target_edges = (target_edges.min(edge_count as f64) as usize).max(1);
    Ok(TheoryParams {
        k,
        eps,
        delta_dprime,
        delta,
        target_edges,
        degree_cap: degree_cap(n, k, eps),
    })
}
