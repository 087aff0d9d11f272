//! Greedy initialization and one-swap local search for determinant
//! maximization.
//!
//! The search keeps a selection `S` of total size `r` and repeatedly swaps one
//! copy of some `i ∈ S` for a candidate `j` whenever that multiplies
//! `det(Σ_{S} v vᵀ)` by more than `1 + δ`. On return no such swap exists, which
//! bounds the leverage of every candidate by `(d + rδ) / (r − d + 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{factor_spd, gram_sum, PointSet};
use crate::selection::{
    swap_gain_from_leverages, termination_bound, LeverageProfile, SelectionState,
};

/// Slack over the `(1/δ)(d ln d + d ln(e·r/d))` iteration bound.
pub const ITERATION_CAP_SLACK: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// `S` is a set; candidates are the unselected points.
    NoRepeat,
    /// `S` is a multiset; every point is a candidate.
    Repeat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pivot {
    /// Lowest `(i, j)` in scan order whose gain clears the threshold.
    FirstImproving,
    /// Largest gain over the full scan, ties to the lowest `(i, j)`.
    BestImproving,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub r: usize,
    pub delta: f64,
    pub mode: SearchMode,
    pub pivot: Pivot,
    /// Overrides the derived iteration cap.
    pub max_iterations: Option<usize>,
}

impl EngineConfig {
    pub fn new(r: usize, delta: f64, mode: SearchMode) -> Self {
        EngineConfig {
            r,
            delta,
            mode,
            pivot: Pivot::FirstImproving,
            max_iterations: None,
        }
    }

    pub fn with_pivot(mut self, pivot: Pivot) -> Self {
        self.pivot = pivot;
        self
    }

    fn validate(&self, d: usize) -> Result<()> {
        if self.r < d {
            return Err(Error::InvalidConfig(format!(
                "r = {} is below the working dimension {d}",
                self.r
            )));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EngineReport {
    pub selection: SelectionState,
    /// Target size actually used (clamped to `n` in no-repeat mode).
    pub r: usize,
    pub delta: f64,
    pub mode: SearchMode,
    pub iterations: usize,
    pub iteration_cap: usize,
    /// Largest candidate leverage from the post-run rescan.
    pub final_max_tau: f64,
    pub tau_bound: f64,
    /// `ln det M` after initialization and after every accepted swap.
    pub logdet_trace: Vec<f64>,
}

/// `⌈4 · (1/δ) · (d ln d + d ln(e·r/d))⌉`.
pub fn iteration_cap(d: usize, r: usize, delta: f64) -> usize {
    let (d, r) = (d as f64, r as f64);
    let bound = (d * d.ln() + d * (std::f64::consts::E * r / d).ln()) / delta;
    (ITERATION_CAP_SLACK * bound).ceil() as usize
}

/// Indices of the `d` greedy volume-maximizing picks, in pick order.
///
/// Each step takes the point with the largest component orthogonal to the
/// span of the earlier picks (lowest index on ties).
pub fn greedy_prefix(points: &PointSet) -> Result<Vec<usize>> {
    let d = points.dim();
    let n = points.len();
    let mut residual = points.columns().clone();
    let max_norm = residual.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tol = 16.0 * n.max(d) as f64 * f64::EPSILON * max_norm;

    let mut picks = Vec::with_capacity(d);
    for step in 0..d {
        let mut best: Option<(usize, f64)> = None;
        for (j, col) in residual.column_iter().enumerate() {
            let norm = col.norm();
            if best.is_none_or(|(_, b)| norm > b) {
                best = Some((j, norm));
            }
        }
        let (pick, norm) = best.expect("point set is nonempty");
        if !(norm > tol) {
            return Err(Error::RankDeficient {
                found: step,
                needed: d,
            });
        }
        let q = residual.column(pick) / norm;
        // project twice to keep the residuals orthogonal
        for _ in 0..2 {
            let coeffs = q.transpose() * &residual;
            residual.ger(-1.0, &q, &coeffs.transpose(), 1.0);
        }
        picks.push(pick);
    }
    Ok(picks)
}

/// Initial selection of total size `r`: the `d` greedy picks, then the lowest
/// unused indices. In repeat mode with `r > n` the fill cycles through
/// `0, 1, …` again.
pub fn greedy_init(points: &PointSet, r: usize, mode: SearchMode) -> Result<SelectionState> {
    let n = points.len();
    let d = points.dim();
    if r < d {
        return Err(Error::InvalidConfig(format!(
            "r = {r} is below the working dimension {d}"
        )));
    }
    if mode == SearchMode::NoRepeat && r > n {
        return Err(Error::InvalidConfig(format!(
            "r = {r} exceeds n = {n} without repetition"
        )));
    }
    let mut counts = vec![0usize; n];
    for i in greedy_prefix(points)? {
        counts[i] = 1;
    }
    let mut remaining = r - d;
    for c in counts.iter_mut() {
        if remaining == 0 {
            break;
        }
        if *c == 0 {
            *c = 1;
            remaining -= 1;
        }
    }
    let mut next = 0;
    while remaining > 0 {
        counts[next % n] += 1;
        next += 1;
        remaining -= 1;
    }
    SelectionState::new(points, counts)
}

fn find_improving(
    points: &PointSet,
    state: &SelectionState,
    mode: SearchMode,
    pivot: Pivot,
    log_threshold: f64,
) -> Option<(usize, usize)> {
    let w = state.gram_inv() * points.columns();
    let tau: Vec<f64> = w
        .column_iter()
        .zip(points.columns().column_iter())
        .map(|(a, b)| a.dot(&b))
        .collect();

    let mut best: Option<(f64, usize, usize)> = None;
    for i in state.support() {
        let wi = w.column(i);
        for j in 0..points.len() {
            if j == i || (mode == SearchMode::NoRepeat && state.count(j) > 0) {
                continue;
            }
            let gain = swap_gain_from_leverages(tau[i], tau[j], wi.dot(&points.point(j)));
            if !(gain > 0.0) {
                continue;
            }
            let log_gain = gain.ln();
            if log_gain > log_threshold {
                match pivot {
                    Pivot::FirstImproving => return Some((i, j)),
                    Pivot::BestImproving => {
                        if best.is_none_or(|(b, _, _)| log_gain > b) {
                            best = Some((log_gain, i, j));
                        }
                    }
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Run one-swap local search from the greedy initialization.
pub fn local_search(points: &PointSet, cfg: &EngineConfig) -> Result<EngineReport> {
    let d = points.dim();
    cfg.validate(d)?;
    let r = match cfg.mode {
        SearchMode::NoRepeat => cfg.r.min(points.len()),
        SearchMode::Repeat => cfg.r,
    };
    let mut state = greedy_init(points, r, cfg.mode)?;
    let cap = cfg
        .max_iterations
        .unwrap_or_else(|| iteration_cap(d, r, cfg.delta));
    let log_threshold = cfg.delta.ln_1p();

    let mut trace = vec![state.logdet()];
    let mut iterations = 0;
    while let Some((i, j)) = find_improving(points, &state, cfg.mode, cfg.pivot, log_threshold) {
        if iterations >= cap {
            return Err(Error::IterationCapExceeded { cap });
        }
        state.apply_swap(points, i, j)?;
        iterations += 1;
        trace.push(state.logdet());
    }

    let profile = certify_termination(points, &state, cfg.mode, cfg.delta)?;
    Ok(EngineReport {
        selection: state,
        r,
        delta: cfg.delta,
        mode: cfg.mode,
        iterations,
        iteration_cap: cap,
        final_max_tau: profile.max_tau_candidate,
        tau_bound: profile.bound,
        logdet_trace: trace,
    })
}

/// Recompute every leverage from a fresh factorization of the selection's
/// Gram sum, independent of the maintained inverse.
pub fn certify_termination(
    points: &PointSet,
    selection: &SelectionState,
    mode: SearchMode,
    delta: f64,
) -> Result<LeverageProfile> {
    let counts = selection.counts();
    let gram = gram_sum(points, counts)?;
    let chol = factor_spd(gram).ok_or(Error::SingularState)?;
    let mut half = points.columns().clone();
    chol.l_dirty().solve_lower_triangular_mut(&mut half);
    let tau: Vec<f64> = half.column_iter().map(|c| c.norm_squared()).collect();
    let max_tau_candidate = tau
        .iter()
        .zip(counts)
        .filter(|&(_, &c)| mode == SearchMode::Repeat || c == 0)
        .map(|(&t, _)| t)
        .fold(0.0, f64::max);
    Ok(LeverageProfile {
        tau,
        bound: termination_bound(points.dim(), selection.size(), delta),
        max_tau_candidate,
        delta,
    })
}
