//! Minimum volume enclosing ellipsoids of `X ∪ −X` and local-search
//! coresets for them.
//!
//! An origin-centred ellipsoid is `{x : xᵀ H x ≤ d}` with `H ⪰ 0`; its volume
//! is `det(H)^{-1/2}` up to a constant that depends only on `d`, so every
//! comparison here is done on `−ln det H`. All formulas are even in each
//! point, which makes `X` and `X ∪ −X` interchangeable without materializing
//! `−X`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::engine::{local_search, EngineConfig, Pivot, SearchMode};
use crate::error::{Error, Result};
use crate::points::{factor_spd, gram_sum, weighted_gram, PointSet};
use crate::selection::{all_leverages, symmetrize};

pub const DEFAULT_SOLVER_TOL: f64 = 1e-7;

/// Iterations between full refreshes of the solver's inverse and leverages.
const SOLVER_REFRESH: usize = 50;

/// `⌈100 · d · (ln n + ln(1/tol))⌉`, at least 100. Away steps converge
/// linearly, so the budget grows with the digits requested.
pub fn default_max_iter(d: usize, n: usize, tol: f64) -> usize {
    let digits = (1.0 / tol).ln().max(0.0);
    ((100.0 * d as f64 * ((n as f64).ln() + digits)).ceil() as usize).max(100)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidResult {
    /// Shape matrix of `{x : xᵀ H x ≤ d}`.
    pub h: DMatrix<f64>,
    pub neg_logdet: f64,
    /// Weights on the simplex.
    pub lambda: Vec<f64>,
    /// `max_j v_jᵀ H v_j − d`.
    pub max_violation: f64,
    /// Lower bound on the optimum from `lambda`.
    pub dual_bound: f64,
    pub iterations: usize,
    pub certified: bool,
}

/// `−ln det H`, or `None` when `H` is not positive definite.
pub fn neg_logdet(h: &DMatrix<f64>) -> Option<f64> {
    let chol = factor_spd(h.clone())?;
    let v = -2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|x| x.ln())
            .sum::<f64>();
    v.is_finite().then_some(v)
}

/// Lagrangian lower bound `ln det(Σ λ_i v_i v_iᵀ) + d − d Σ λ_i` on the
/// optimal `−ln det H`.
///
/// Returns `f64::NEG_INFINITY` when the weighted Gram sum is singular, which
/// is the value of the inner minimization in that case.
pub fn dual_bound(points: &PointSet, lambda: &[f64]) -> Result<f64> {
    if let Some(bad) = lambda.iter().find(|l| !(**l >= 0.0)) {
        return Err(Error::InvalidConfig(format!(
            "weights must be nonnegative, got {bad}"
        )));
    }
    let gram = weighted_gram(points, lambda)?;
    let d = points.dim() as f64;
    let total: f64 = lambda.iter().sum();
    Ok(match neg_logdet(&gram) {
        Some(neg) => -neg + d - d * total,
        None => f64::NEG_INFINITY,
    })
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
            if v > best.1 {
                (i, v)
            } else {
                best
            }
        })
}

struct SolverState {
    lambda: Vec<f64>,
    inv: DMatrix<f64>,
    tau: Vec<f64>,
}

impl SolverState {
    fn refresh(&mut self, points: &PointSet) -> Result<()> {
        let gram = weighted_gram(points, &self.lambda)?;
        let chol = factor_spd(gram).ok_or(Error::SubsetRankDeficient)?;
        let mut inv = chol.inverse();
        symmetrize(&mut inv);
        self.tau = all_leverages(&inv, points);
        self.inv = inv;
        Ok(())
    }

    /// `λ ← (1 − s) λ + s e_k`, with `Σ⁻¹` and `τ` updated by one
    /// Sherman–Morrison step. Returns false if the step would be singular.
    fn step(&mut self, points: &PointSet, k: usize, s: f64) -> bool {
        let c = s / (1.0 - s);
        let denom = 1.0 + c * self.tau[k];
        if !(denom > 1e-12) {
            return false;
        }
        let v = points.point(k);
        let u = &self.inv * v;
        let proj = points.columns().tr_mul(&u);
        let scale = 1.0 / (1.0 - s);
        let coef = c / denom;
        self.inv.ger(-coef, &u, &u, 1.0);
        self.inv *= scale;
        self.tau
            .par_iter_mut()
            .zip(proj.as_slice().par_iter())
            .for_each(|(t, &p)| *t = (*t - coef * p * p) * scale);
        for l in self.lambda.iter_mut() {
            *l *= 1.0 - s;
        }
        self.lambda[k] += s;
        if self.lambda[k] < 1e-15 {
            self.lambda[k] = 0.0;
        }
        true
    }
}

/// Minimum volume enclosing ellipsoid of `X ∪ −X` by Frank–Wolfe with away
/// steps on the weights `λ`.
///
/// Stops once every leverage `v_iᵀ (Σ λ v vᵀ)⁻¹ v_i` is at most `d(1 + tol)`.
/// `H` is then `(Σ λ v vᵀ)⁻¹` scaled so the largest constraint is tight,
/// giving a duality gap of at most `d ln(1 + tol)`.
pub fn khachiyan_mvee(points: &PointSet, tol: f64, max_iter: usize) -> Result<EllipsoidResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "solver tolerance must be positive, got {tol}"
        )));
    }
    let n = points.len();
    let d = points.dim() as f64;
    let limit = d * (1.0 + tol);
    let mut state = SolverState {
        lambda: vec![1.0 / n as f64; n],
        inv: DMatrix::zeros(0, 0),
        tau: Vec::new(),
    };
    state.refresh(points)?;

    let mut iterations = 0;
    let certified = loop {
        if iterations % SOLVER_REFRESH == 0 {
            state.refresh(points)?;
        }
        let (j, tau_max) = argmax(&state.tau);
        if tau_max <= limit {
            state.refresh(points)?;
            if argmax(&state.tau).1 <= limit {
                break true;
            }
            continue;
        }
        if iterations >= max_iter {
            break false;
        }
        iterations += 1;

        let (k, tau_min) = state
            .tau
            .iter()
            .zip(&state.lambda)
            .enumerate()
            .filter(|(_, (_, &l))| l > 0.0)
            .fold(
                (0, f64::INFINITY),
                |best, (i, (&t, _))| if t < best.1 { (i, t) } else { best },
            );

        let toward = (tau_max - d) / (d * (tau_max - 1.0));
        if tau_max - d >= d - tau_min || state.lambda[k] >= 1.0 {
            state.step(points, j, toward);
            continue;
        }
        let lk = state.lambda[k];
        let drop = -lk / (1.0 - lk);
        let away = if tau_min > 1.0 {
            ((tau_min - d) / (d * (tau_min - 1.0))).max(drop)
        } else {
            drop
        };
        if !state.step(points, k, away) {
            state.step(points, j, toward);
        }
    };

    state.refresh(points)?;
    let (_, tau_max) = argmax(&state.tau);
    let mut h = &state.inv * (d / tau_max);
    symmetrize(&mut h);
    let neg = neg_logdet(&h).ok_or(Error::SingularState)?;
    let max_violation = all_leverages(&h, points)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
        - d;
    let result = EllipsoidResult {
        dual_bound: dual_bound(points, &state.lambda)?,
        h,
        neg_logdet: neg,
        lambda: state.lambda,
        max_violation,
        iterations,
        certified,
    };
    if certified {
        Ok(result)
    } else {
        Err(Error::MaxIterExceeded {
            iterations,
            best: Box::new(result),
        })
    }
}

/// `r = ⌈(1 + 4/ε) d⌉` and `δ = ε d / (4r)`.
pub fn coreset_params(d: usize, epsilon: f64) -> Result<(usize, f64)> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::BadEpsilon(epsilon));
    }
    let exact = (1.0 + 4.0 / epsilon) * d as f64;
    // absorb rounding in 4/ε so exact integers are not bumped up
    let r = (exact * (1.0 - 1e-12)).ceil() as usize;
    let delta = epsilon * d as f64 / (4.0 * r as f64);
    Ok((r, delta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoresetVerification {
    pub neg_logdet_x: f64,
    pub neg_logdet_t: f64,
    /// `neg_logdet_x − neg_logdet_t`.
    pub gap: f64,
    /// `d ln(1 + ε)`.
    pub allowed_gap: f64,
    /// Budget for the two solver calls, `3 · solver_tol · d`.
    pub tolerance: f64,
    /// `max_j v_jᵀ H v_j / d` for `H = (Σ λ v vᵀ)⁻¹ / (1 + ε)` with the
    /// coreset's own weights; at most one when that `H` is feasible for `X`.
    pub scaled_feasibility: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoresetResult {
    /// Distinct working indices, ascending.
    pub support: Vec<usize>,
    /// Multiset counts from the local search, one per working point.
    pub counts: Vec<usize>,
    pub r: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub iterations: usize,
    pub logdet_trace: Vec<f64>,
    pub final_max_tau: f64,
    pub tau_bound: f64,
    /// `max_j v_jᵀ H v_j` with `H = r · M⁻¹`.
    pub leverage_route_max: f64,
    /// `d (1 + ε/4)²`.
    pub leverage_route_limit: f64,
    pub verification: Option<CoresetVerification>,
}

impl CoresetResult {
    /// `λ_i = n_i / r`.
    pub fn weights(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.r as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoresetParams {
    pub epsilon: f64,
    pub r: Option<usize>,
    pub delta: Option<f64>,
    pub pivot: Pivot,
}

impl CoresetParams {
    pub fn new(epsilon: f64) -> Self {
        CoresetParams {
            epsilon,
            r: None,
            delta: None,
            pivot: Pivot::FirstImproving,
        }
    }
}

pub fn mvee_coreset(points: &PointSet, epsilon: f64) -> Result<CoresetResult> {
    mvee_coreset_with(points, &CoresetParams::new(epsilon))
}

/// Local search with repetitions; the coreset is the support of the final
/// multiset.
pub fn mvee_coreset_with(points: &PointSet, params: &CoresetParams) -> Result<CoresetResult> {
    let (r0, delta0) = coreset_params(points.dim(), params.epsilon)?;
    let r = params.r.unwrap_or(r0);
    let delta = params.delta.unwrap_or(if params.r.is_some() {
        params.epsilon * points.dim() as f64 / (4.0 * r as f64)
    } else {
        delta0
    });
    let cfg = EngineConfig::new(r, delta, SearchMode::Repeat).with_pivot(params.pivot);
    let report = local_search(points, &cfg)?;

    let counts = report.selection.counts().to_vec();
    let h = leverage_route_matrix(points, &counts)?;
    let leverage_route_max = all_leverages(&h, points).into_iter().fold(0.0, f64::max);
    let d = points.dim() as f64;
    Ok(CoresetResult {
        support: report.selection.support(),
        counts,
        r: report.r,
        delta,
        epsilon: params.epsilon,
        iterations: report.iterations,
        logdet_trace: report.logdet_trace,
        final_max_tau: report.final_max_tau,
        tau_bound: report.tau_bound,
        leverage_route_max,
        leverage_route_limit: d * (1.0 + params.epsilon / 4.0).powi(2),
        verification: None,
    })
}

/// `(Σ (n_i/r) v_i v_iᵀ)⁻¹ = r · M⁻¹`.
fn leverage_route_matrix(points: &PointSet, counts: &[usize]) -> Result<DMatrix<f64>> {
    let r: usize = counts.iter().sum();
    let gram = gram_sum(points, counts)?;
    let chol = factor_spd(gram).ok_or(Error::SingularState)?;
    let mut h = chol.inverse() * r as f64;
    symmetrize(&mut h);
    Ok(h)
}

fn solve_certified(points: &PointSet, tol: f64) -> Result<EllipsoidResult> {
    khachiyan_mvee(
        points,
        tol,
        default_max_iter(points.dim(), points.len(), tol),
    )
}

/// Solve the MVEE on `X` and on the coreset support `T` and check
/// `neg_logdet_T ≤ neg_logdet_X ≤ d ln(1+ε) + neg_logdet_T` within the
/// solver budget, plus feasibility of the coreset's own scaled ellipsoid.
pub fn verify_coreset(
    points: &PointSet,
    coreset: &CoresetResult,
    epsilon: f64,
    solver_tol: f64,
) -> Result<CoresetVerification> {
    if !(epsilon > 0.0) {
        return Err(Error::BadEpsilon(epsilon));
    }
    let d = points.dim() as f64;
    let full = solve_certified(points, solver_tol)?;
    let sub = solve_certified(&points.select(&coreset.support)?, solver_tol)?;

    let h = leverage_route_matrix(points, &coreset.counts)? / (1.0 + epsilon);
    let scaled_feasibility = all_leverages(&h, points).into_iter().fold(0.0, f64::max) / d;

    let tolerance = 3.0 * solver_tol * d;
    let allowed_gap = d * epsilon.ln_1p();
    let gap = full.neg_logdet - sub.neg_logdet;
    let report = CoresetVerification {
        neg_logdet_x: full.neg_logdet,
        neg_logdet_t: sub.neg_logdet,
        gap,
        allowed_gap,
        tolerance,
        scaled_feasibility,
        passed: gap >= -tolerance
            && gap <= allowed_gap + tolerance
            && scaled_feasibility <= 1.0 + 1e-9,
    };
    if report.passed {
        Ok(report)
    } else if gap < -tolerance {
        Err(Error::VerificationFailed(format!(
            "coreset optimum {} exceeds full optimum {}",
            sub.neg_logdet, full.neg_logdet
        )))
    } else if gap > allowed_gap + tolerance {
        Err(Error::VerificationFailed(format!(
            "volume gap {gap} exceeds d ln(1+eps) = {allowed_gap}"
        )))
    } else {
        Err(Error::VerificationFailed(format!(
            "scaled coreset ellipsoid violates a constraint by factor {scaled_feasibility}"
        )))
    }
}
