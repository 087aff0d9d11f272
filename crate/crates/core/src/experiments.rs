//! Lower-bound experiments on almost-orthogonal ensembles and brute-force
//! oracles for determinant maximization.
//!
//! # Ensemble generator
//!
//! [`sign_ensemble`] draws entry `(i, c)` of an `n × d` sign matrix from
//! output `k = i·d + c` (0-based) of the SplitMix64 stream seeded with
//! `seed`: the state after `k + 1` increments of `0x9E3779B97F4A7C15`, passed
//! through the standard SplitMix64 finalizer. The sign is `−` when the top bit
//! of that output is set and `+` otherwise; entries are then scaled by
//! `1/√d`. Any SplitMix64 implementation reproduces the same signs.

use itertools::Itertools;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{gram_sum, preprocess, PointSet};

/// Largest number of subsets [`brute_force_max_det`] will enumerate.
pub const MAX_ENUMERATION: u128 = 1_000_000;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Output `k` of SplitMix64 seeded with `seed`.
pub fn splitmix64(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `n` random `±1/√d` vectors (see the module docs for the exact stream).
pub fn sign_ensemble(n: usize, d: usize, seed: u64) -> Result<PointSet> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidConfig(format!(
            "ensemble needs n >= 2 and d >= 1, got n={n}, d={d}"
        )));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let raw = DMatrix::from_fn(n, d, |i, c| {
        if splitmix64(seed, (i * d + c) as u64) >> 63 == 1 {
            -scale
        } else {
            scale
        }
    });
    preprocess(&raw, None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    /// `μ = max_{i≠j} |⟨v_i, v_j⟩|`.
    pub coherence: f64,
    /// `μ / sqrt(ln n / d)`.
    pub coherence_ratio: f64,
    /// Per point `i`, the ℓ1 certificate with `S = [n] ∖ {i}`.
    pub l1_certificates: Vec<f64>,
    pub min_l1_certificate: f64,
    /// `sqrt(d / ln n)`.
    pub reference_scale: f64,
    pub max_norm_error: f64,
}

/// Coherence and held-out ℓ1 certificates of a unit-vector ensemble.
pub fn ensemble_report(points: &PointSet, seed: u64) -> EnsembleReport {
    let n = points.len();
    let d = points.ambient_dim();
    let v = points.columns();
    let gram = v.tr_mul(v);
    let per_point: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row_max = (0..n)
                .filter(|&j| j != i)
                .map(|j| gram[(i, j)].abs())
                .fold(0.0, f64::max);
            (row_max, gram[(i, i)])
        })
        .collect();
    let coherence = per_point.iter().map(|p| p.0).fold(0.0, f64::max);
    let l1_certificates: Vec<f64> = per_point
        .iter()
        .map(|&(m, self_ip)| if m > 0.0 { self_ip / m } else { f64::INFINITY })
        .collect();
    let ln_n = (n as f64).ln();
    EnsembleReport {
        n,
        d,
        seed,
        coherence,
        coherence_ratio: coherence / (ln_n / d as f64).sqrt(),
        min_l1_certificate: l1_certificates
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min),
        l1_certificates,
        reference_scale: (d as f64 / ln_n).sqrt(),
        max_norm_error: per_point
            .iter()
            .map(|p| (p.1.sqrt() - 1.0).abs())
            .fold(0.0, f64::max),
    }
}

/// `⟨v_i, v_i⟩ / max_{j∈S} |⟨v_i, v_j⟩|`, a lower bound on `‖α‖₁` for every
/// `α` with `Σ_{j∈S} α_j v_j = v_i`. Infinite when `v_i` is orthogonal to
/// every point of `S`, in which case no representation exists.
pub fn l1_certificate(points: &PointSet, subset: &[usize], i: usize) -> Result<f64> {
    points.check_index(i)?;
    if subset.contains(&i) {
        return Err(Error::InvalidConfig(format!(
            "held-out index {i} is in the subset"
        )));
    }
    let vi = points.point(i);
    // inner products below rounding level count as orthogonal
    let zero_tol = 4.0 * points.dim() as f64 * f64::EPSILON * vi.norm();
    let mut max_ip = 0.0f64;
    for &j in subset {
        points.check_index(j)?;
        let vj = points.point(j);
        let ip = vi.dot(&vj).abs();
        if ip > zero_tol * vj.norm() {
            max_ip = max_ip.max(ip);
        }
    }
    Ok(if max_ip > 0.0 {
        vi.norm_squared() / max_ip
    } else {
        f64::INFINITY
    })
}

/// `|S|^{1/p − 1} · l1_certificate`, a lower bound on `‖α‖_p`.
pub fn lp_certificate(points: &PointSet, subset: &[usize], i: usize, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "p must be at least 1, got {p}"
        )));
    }
    let l1 = l1_certificate(points, subset, i)?;
    Ok((subset.len() as f64).powf(1.0 / p - 1.0) * l1)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, m| acc * (n - m) as u128 / (m + 1) as u128)
}

/// Exact maximizer of `det(Σ_{i∈T} v_i v_iᵀ)` over `|T| = k`, by enumeration
/// in lexicographic order (the first maximizer wins ties).
pub fn brute_force_max_det(points: &PointSet, k: usize) -> Result<(Vec<usize>, f64)> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidConfig(format!("k = {k} must lie in 1..={n}")));
    }
    let count = binomial(n, k);
    if count > MAX_ENUMERATION {
        return Err(Error::TooLarge { count });
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for subset in (0..n).combinations(k) {
        let mut counts = vec![0; n];
        for &i in &subset {
            counts[i] = 1;
        }
        let det = gram_sum(points, &counts)?.determinant();
        if best.as_ref().is_none_or(|(_, b)| det > *b) {
            best = Some((subset, det));
        }
    }
    Ok(best.expect("at least one subset"))
}

/// `Σ_{|T| = d} det(V_T)²`, where `V_T` is the square matrix of the points
/// in `T`. Equals `det(Σ v vᵀ)` by Cauchy–Binet.
pub fn cauchy_binet_sum(points: &PointSet) -> Result<f64> {
    let d = points.dim();
    let count = binomial(points.len(), d);
    if count > MAX_ENUMERATION {
        return Err(Error::TooLarge { count });
    }
    Ok((0..points.len())
        .combinations(d)
        .map(|t| {
            points
                .columns()
                .select_columns(t.iter())
                .determinant()
                .powi(2)
        })
        .sum())
}
