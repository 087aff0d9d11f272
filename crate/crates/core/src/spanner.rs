//! ℓp volumetric spanners with explicit coefficient certificates.
//!
//! Every point `v_j` is written as `Σ_{i∈S} α_{j,i} v_i` using the
//! minimum-ℓ2-norm solution `α_j = Uᵀ (U Uᵀ)⁻¹ v_j`, where `U` holds the
//! selected points as columns. For `j ∉ S`, `‖α_j‖₂² = τ_j`, so the
//! local-search leverage bound translates directly into a norm bound, and
//! Hölder's inequality moves it to other `p`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rayon::prelude::*;

use crate::engine::{local_search, EngineConfig, Pivot, SearchMode};
use crate::error::{Error, Result};
use crate::points::{factor_spd, PointSet};
use crate::selection::termination_bound;

/// Relative slack when testing the ℓp size inequality, which can hold with
/// exact equality (e.g. `p = 1.5, d = 4, r = 27`).
pub const LP_SIZE_TOL: f64 = 1e-12;

/// Reconstruction residual allowed per point, relative to `1 + ‖v_j‖₂`.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Slack allowed between the achieved and guaranteed factors.
pub const FACTOR_TOL: f64 = 1e-8;

const LP_SEARCH_LIMIT: usize = 1 << 52;

/// `‖x‖_p` for `p ≥ 1`; `p = ∞` gives the max norm.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return x.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return x.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    let scale = x.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale
        * x.iter()
            .map(|v| (v.abs() / scale).powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
}

/// Left side of the ℓp sizing inequality `r^{2/p−1} · (d + rδ)/(r − d + 1)`
/// at `δ = d/r`, i.e. with `d + rδ = 2d`.
pub fn lp_size_criterion(d: usize, r: usize, p: f64) -> f64 {
    let (d, r) = (d as f64, r as f64);
    r.powf(2.0 / p - 1.0) * (2.0 * d) / (r - d + 1.0)
}

/// Smallest `r ≥ d + 1` with `lp_size_criterion(d, r, p) ≤ 1`, for
/// `p ∈ (1, 2)`. The criterion is decreasing in `r`, so an exponential
/// bracket followed by bisection finds it. `None` if `r` would exceed 2⁵².
pub fn lp_spanner_size(d: usize, p: f64) -> Option<usize> {
    let ok = |r: usize| lp_size_criterion(d, r, p) <= 1.0 + LP_SIZE_TOL;
    let lo = d + 1;
    if ok(lo) {
        return Some(lo);
    }
    let (mut bad, mut good) = (lo, 2 * lo);
    while !ok(good) {
        if good > LP_SEARCH_LIMIT {
            return None;
        }
        bad = good;
        good *= 2;
    }
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if ok(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Some(good)
}

/// Default `δ` for a given `p` and size `r`.
pub fn default_delta(p: f64, d: usize, r: usize) -> f64 {
    if p > 1.0 && p < 2.0 {
        d as f64 / r as f64
    } else {
        1.0 / 3.0
    }
}

/// Default size `r` (before clamping to `n`). `None` when the ℓp sizing
/// search overflows; such inputs get the trivial all-points spanner.
pub fn default_size(p: f64, d: usize) -> Option<usize> {
    if p > 1.0 && p < 2.0 {
        lp_spanner_size(d, p)
    } else {
        Some(3 * d)
    }
}

/// Analytic bound on `max_j ‖α_j‖_p` after local search with `(r, δ)`.
pub fn guaranteed_factor(p: f64, d: usize, r: usize, delta: f64) -> f64 {
    let l2 = termination_bound(d, r, delta).sqrt();
    if p >= 2.0 {
        l2.max(1.0)
    } else if p == 1.0 {
        (r as f64).sqrt() * l2.max(1.0)
    } else {
        ((r as f64).powf(1.0 / p - 0.5) * l2).max(1.0)
    }
}

/// Minimum-norm representations over a fixed full-rank subset.
pub struct SubsetSolver<'a> {
    points: &'a PointSet,
    subset: Vec<usize>,
    position: Vec<Option<usize>>,
    u: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl<'a> SubsetSolver<'a> {
    pub fn new(points: &'a PointSet, subset: &[usize]) -> Result<Self> {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        for &i in &subset {
            points.check_index(i)?;
        }
        let u = points.columns().select_columns(subset.iter());
        let chol = factor_spd(&u * u.transpose()).ok_or(Error::SubsetRankDeficient)?;
        let mut position = vec![None; points.len()];
        for (k, &i) in subset.iter().enumerate() {
            position[i] = Some(k);
        }
        Ok(SubsetSolver {
            points,
            subset,
            position,
            u,
            chol,
        })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// Coefficients of point `j`: the indicator when `j` is selected,
    /// otherwise `Uᵀ (U Uᵀ)⁻¹ v_j`.
    pub fn coefficients(&self, j: usize) -> Result<DVector<f64>> {
        self.points.check_index(j)?;
        if let Some(k) = self.position[j] {
            let mut e = DVector::zeros(self.subset.len());
            e[k] = 1.0;
            return Ok(e);
        }
        let y = self.chol.solve(&self.points.point(j).into_owned());
        Ok(self.u.transpose() * y)
    }

    /// `‖v_j − U α‖₂`.
    pub fn residual(&self, j: usize, alpha: &DVector<f64>) -> f64 {
        (self.points.point(j) - &self.u * alpha).norm()
    }
}

/// Representation of point `j` over `subset` (see [`SubsetSolver`]).
pub fn coefficients(points: &PointSet, subset: &[usize], j: usize) -> Result<DVector<f64>> {
    SubsetSolver::new(points, subset)?.coefficients(j)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannerParams {
    pub p: f64,
    pub r: Option<usize>,
    pub delta: Option<f64>,
    pub pivot: Pivot,
}

impl SpannerParams {
    pub fn new(p: f64) -> Self {
        SpannerParams {
            p,
            r: None,
            delta: None,
            pivot: Pivot::FirstImproving,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpannerCertificate {
    /// Sorted working indices of the selected points.
    pub subset: Vec<usize>,
    pub p: f64,
    pub r: usize,
    pub delta: f64,
    /// Whether `r` reached `n`, making every point its own representation.
    pub trivial: bool,
    /// `α_j` for every working point `j`, indexed like `subset`.
    pub coefficients: Vec<DVector<f64>>,
    pub norms: Vec<f64>,
    /// Largest coefficient norm over all points; at least 1 because selected
    /// points have indicator coefficients.
    pub c_achieved: f64,
    /// Largest coefficient norm over points outside the subset, 0 if none.
    pub c_unselected: f64,
    pub c_guaranteed: f64,
    /// `max_j ‖v_j − U α_j‖₂ / (1 + ‖v_j‖₂)`.
    pub max_residual: f64,
    pub iterations: usize,
    pub iteration_cap: usize,
    pub final_max_tau: f64,
    pub tau_bound: f64,
    pub logdet_trace: Vec<f64>,
}

impl SpannerCertificate {
    /// Recheck the certificate from its coefficients alone.
    pub fn verify(&self, points: &PointSet) -> Result<()> {
        if self.coefficients.len() != points.len() {
            return Err(Error::VerificationFailed(format!(
                "{} coefficient vectors for {} points",
                self.coefficients.len(),
                points.len()
            )));
        }
        let mut worst = 0.0f64;
        let mut worst_outside = 0.0f64;
        for (j, alpha) in self.coefficients.iter().enumerate() {
            let mut recon = DVector::zeros(points.dim());
            for (k, &i) in self.subset.iter().enumerate() {
                recon.axpy(alpha[k], &points.point(i), 1.0);
            }
            let v = points.point(j);
            let res = (v - recon).norm() / (1.0 + v.norm());
            if !(res <= RECONSTRUCTION_TOL) {
                return Err(Error::VerificationFailed(format!(
                    "point {j} reconstructs with relative residual {res:e}"
                )));
            }
            let norm = lp_norm(alpha.as_slice(), self.p);
            worst = worst.max(norm);
            if !self.subset.contains(&j) {
                worst_outside = worst_outside.max(norm);
            }
            if let Some(k) = self.subset.iter().position(|&i| i == j) {
                let indicator = alpha
                    .iter()
                    .enumerate()
                    .all(|(m, &a)| a == if m == k { 1.0 } else { 0.0 });
                if !indicator {
                    return Err(Error::VerificationFailed(format!(
                        "selected point {j} lacks an indicator representation"
                    )));
                }
            }
        }
        if !((worst - self.c_achieved).abs() <= FACTOR_TOL
            && (worst_outside - self.c_unselected).abs() <= FACTOR_TOL)
        {
            return Err(Error::VerificationFailed(format!(
                "reported factors ({}, {}) disagree with coefficients ({worst}, {worst_outside})",
                self.c_achieved, self.c_unselected
            )));
        }
        if !(worst <= self.c_guaranteed + FACTOR_TOL) {
            return Err(Error::VerificationFailed(format!(
                "achieved factor {worst} exceeds guarantee {}",
                self.c_guaranteed
            )));
        }
        if !self.trivial && !(self.final_max_tau < self.tau_bound + 1e-10) {
            return Err(Error::VerificationFailed(format!(
                "candidate leverage {} exceeds bound {}",
                self.final_max_tau, self.tau_bound
            )));
        }
        Ok(())
    }
}

/// Build an ℓp spanner with the default size for `p`, or `r_override`.
pub fn build_spanner(
    points: &PointSet,
    p: f64,
    r_override: Option<usize>,
) -> Result<SpannerCertificate> {
    let mut params = SpannerParams::new(p);
    params.r = r_override;
    build_spanner_with(points, &params)
}

pub fn build_spanner_with(points: &PointSet, params: &SpannerParams) -> Result<SpannerCertificate> {
    let p = params.p;
    if !(p >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "p must be at least 1, got {p}"
        )));
    }
    let d = points.dim();
    let n = points.len();
    let wanted = match params.r {
        Some(r) => Some(r),
        None => default_size(p, d),
    };
    let r = wanted.unwrap_or(n).min(n);
    if r < d {
        return Err(Error::InvalidConfig(format!(
            "r = {r} is below the working dimension {d}"
        )));
    }
    let delta = params.delta.unwrap_or_else(|| default_delta(p, d, r));
    let mut cfg = EngineConfig::new(r, delta, SearchMode::NoRepeat);
    cfg.pivot = params.pivot;
    let report = local_search(points, &cfg)?;

    let subset = report.selection.support();
    let trivial = subset.len() == n;
    let solver = SubsetSolver::new(points, &subset)?;
    let coefficients: Vec<DVector<f64>> = (0..n)
        .into_par_iter()
        .map(|j| solver.coefficients(j))
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = coefficients
        .iter()
        .map(|a| lp_norm(a.as_slice(), p))
        .collect();
    let max_residual = coefficients
        .iter()
        .enumerate()
        .map(|(j, a)| solver.residual(j, a) / (1.0 + points.point(j).norm()))
        .fold(0.0, f64::max);
    let c_achieved = norms.iter().cloned().fold(0.0, f64::max);
    let c_unselected = norms
        .iter()
        .enumerate()
        .filter(|(j, _)| subset.binary_search(j).is_err())
        .map(|(_, &c)| c)
        .fold(0.0, f64::max);
    let c_guaranteed = if trivial {
        1.0
    } else {
        guaranteed_factor(p, d, r, delta)
    };

    Ok(SpannerCertificate {
        subset,
        p,
        r,
        delta,
        trivial,
        coefficients,
        norms,
        c_achieved,
        c_unselected,
        c_guaranteed,
        max_residual,
        iterations: report.iterations,
        iteration_cap: report.iteration_cap,
        final_max_tau: report.final_max_tau,
        tau_bound: report.tau_bound,
        logdet_trace: report.logdet_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn basis(d: usize) -> PointSet {
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
            .collect();
        PointSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn orthonormal_subset_coefficients() {
        let ps = PointSet::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![3.0, 4.0]]).unwrap();
        let alpha = coefficients(&ps, &[0, 1], 2).unwrap();
        assert!((alpha - dvector![3.0, 4.0]).norm() < 1e-14);
        assert_eq!(coefficients(&ps, &[0, 1], 1).unwrap(), dvector![0.0, 1.0]);
        assert!(matches!(
            coefficients(&ps, &[0], 2),
            Err(Error::SubsetRankDeficient)
        ));
    }

    #[test]
    fn lp_norm_cases() {
        let x = [3.0, -4.0];
        assert_eq!(lp_norm(&x, 1.0), 7.0);
        assert_eq!(lp_norm(&x, 2.0), 5.0);
        assert_eq!(lp_norm(&x, f64::INFINITY), 4.0);
        assert!((lp_norm(&x, 3.0) - 91f64.cbrt()).abs() < 1e-12);
        assert_eq!(lp_norm(&[0.0, 0.0], 1.5), 0.0);
    }

    #[test]
    fn lp_size_for_p_three_halves_d_four() {
        // r^{1/3} · 8 / (r − 3) ≤ 1 first holds at r = 27 (with equality)
        assert_eq!(lp_spanner_size(4, 1.5), Some(27));
        assert!(lp_size_criterion(4, 26, 1.5) > 1.0);
        assert!(guaranteed_factor(1.5, 4, 27, 4.0 / 27.0) <= 1.0 + 1e-12);
    }

    #[test]
    fn lp_size_overflow_is_none() {
        assert_eq!(lp_spanner_size(64, 1.0001), None);
    }

    #[test]
    fn guaranteed_factor_cases() {
        let d = 10;
        assert_eq!(guaranteed_factor(2.0, d, 30, 1.0 / 3.0), 1.0);
        assert_eq!(guaranteed_factor(3.0, d, 30, 1.0 / 3.0), 1.0);
        assert!((guaranteed_factor(1.0, d, 30, 1.0 / 3.0) - 30f64.sqrt()).abs() < 1e-12);
        // r = d gives bound d/1
        assert!((guaranteed_factor(2.0, 4, 4, 0.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn basis_spanner_is_exact() {
        let ps = basis(4);
        for p in [1.0, 1.5, 2.0, 4.0] {
            let cert = build_spanner(&ps, p, None).unwrap();
            assert_eq!(cert.subset, vec![0, 1, 2, 3]);
            assert_eq!(cert.c_achieved, 1.0);
            cert.verify(&ps).unwrap();
        }
    }

    #[test]
    fn rejects_small_p() {
        assert!(build_spanner(&basis(2), 0.5, None).is_err());
        assert!(build_spanner(&basis(2), f64::NAN, None).is_err());
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let ps = PointSet::from_rows(&[
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, -0.2],
            vec![-0.3, 0.9],
            vec![0.2, 0.2],
            vec![0.7, 0.1],
        ])
        .unwrap();
        let mut cert = build_spanner(&ps, 2.0, None).unwrap();
        cert.verify(&ps).unwrap();
        let outside = (0..ps.len()).find(|j| !cert.subset.contains(j)).unwrap();
        cert.coefficients[outside][0] += 1e-3;
        assert!(matches!(
            cert.verify(&ps),
            Err(Error::VerificationFailed(_))
        ));
    }
}
