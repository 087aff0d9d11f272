//! The working (multi)set of the local search together with its Gram sum,
//! maintained inverse and log-determinant.

use nalgebra::{storage::Storage, DMatrix, Dyn, Matrix, U1};

use crate::error::{Error, Result};
use crate::points::{factor_spd, gram_sum, PointSet};

/// Rank-one updates allowed before the inverse and log-determinant are
/// recomputed from the counts.
pub const REFACTOR_INTERVAL: usize = 64;

/// Swap gains at or below this value are treated as singular.
pub const DEGENERATE_GAIN: f64 = 1e-12;

/// `(d + rδ) / (r − d + 1)`: the leverage every candidate must stay below
/// once no swap improves the determinant by more than `1 + δ`.
pub fn termination_bound(d: usize, r: usize, delta: f64) -> f64 {
    (d as f64 + r as f64 * delta) / (r as f64 - d as f64 + 1.0)
}

#[derive(Debug, Clone)]
pub struct SelectionState {
    counts: Vec<usize>,
    total: usize,
    gram: DMatrix<f64>,
    gram_inv: DMatrix<f64>,
    logdet: f64,
    swaps_applied: usize,
    updates_since_refactor: usize,
}

impl SelectionState {
    /// Build the state for the multiset given by `counts`. The resulting
    /// Gram sum must be positive definite.
    pub fn new(points: &PointSet, counts: Vec<usize>) -> Result<Self> {
        let total = counts.iter().sum();
        let mut state = SelectionState {
            gram: DMatrix::zeros(points.dim(), points.dim()),
            gram_inv: DMatrix::zeros(points.dim(), points.dim()),
            counts,
            total,
            logdet: 0.0,
            swaps_applied: 0,
            updates_since_refactor: 0,
        };
        state.refactor(points)?;
        Ok(state)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, i: usize) -> usize {
        self.counts[i]
    }

    /// Total multiplicity `r = Σ n_i`.
    pub fn size(&self) -> usize {
        self.total
    }

    /// Distinct selected indices in ascending order.
    pub fn support(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn gram_inv(&self) -> &DMatrix<f64> {
        &self.gram_inv
    }

    /// Natural log of `det M`.
    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    pub fn swaps_applied(&self) -> usize {
        self.swaps_applied
    }

    pub fn updates_since_refactor(&self) -> usize {
        self.updates_since_refactor
    }

    fn ensure_valid(&self) -> Result<()> {
        if self.gram_inv.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::SingularState)
        }
    }

    /// `vᵀ M⁻¹ v`.
    pub fn leverage<S: Storage<f64, Dyn, U1>>(&self, v: &Matrix<f64, Dyn, U1, S>) -> Result<f64> {
        self.cross_leverage(v, v)
    }

    /// `uᵀ M⁻¹ v`.
    pub fn cross_leverage<S1, S2>(
        &self,
        u: &Matrix<f64, Dyn, U1, S1>,
        v: &Matrix<f64, Dyn, U1, S2>,
    ) -> Result<f64>
    where
        S1: Storage<f64, Dyn, U1>,
        S2: Storage<f64, Dyn, U1>,
    {
        self.ensure_valid()?;
        if u.len() != self.gram.nrows() || v.len() != self.gram.nrows() {
            return Err(Error::ShapeMismatch {
                expected: self.gram.nrows(),
                found: u.len().min(v.len()),
            });
        }
        Ok(u.dot(&(&self.gram_inv * v)))
    }

    /// Ratio `det(M − v_i v_iᵀ + v_j v_jᵀ) / det(M)`, evaluated as
    /// `(1 − τ_i)(1 + τ_j) + τ_ij²`.
    pub fn swap_gain(&self, points: &PointSet, i: usize, j: usize) -> Result<f64> {
        points.check_index(i)?;
        points.check_index(j)?;
        if self.counts[i] == 0 {
            return Err(Error::NotInSet { index: i });
        }
        let vi = points.point(i);
        let vj = points.point(j);
        let tau_i = self.leverage(&vi)?;
        let tau_j = self.leverage(&vj)?;
        let tau_ij = self.cross_leverage(&vi, &vj)?;
        Ok(swap_gain_from_leverages(tau_i, tau_j, tau_ij))
    }

    /// Replace one copy of `i` by one copy of `j`.
    ///
    /// Two Sherman–Morrison updates are applied: `v_j` is added first so the
    /// intermediate matrix stays full rank, then `v_i` is removed. Returns the
    /// change in log-determinant.
    pub fn apply_swap(&mut self, points: &PointSet, i: usize, j: usize) -> Result<f64> {
        let gain = self.swap_gain(points, i, j)?;
        if !(gain > DEGENERATE_GAIN) {
            return Err(Error::DegenerateSwap { gain });
        }
        let before = self.logdet;

        let vj = points.point(j);
        let u = &self.gram_inv * vj;
        let tau_j = u.dot(&vj);
        self.gram_inv.ger(-1.0 / (1.0 + tau_j), &u, &u, 1.0);
        self.gram.ger(1.0, &vj, &vj, 1.0);
        self.logdet += tau_j.ln_1p();

        let vi = points.point(i);
        let w = &self.gram_inv * vi;
        let keep = 1.0 - w.dot(&vi);
        if !(keep > DEGENERATE_GAIN) {
            // the inverse has drifted past what `gain` reported; restore
            self.refactor(points)?;
            return Err(Error::DegenerateSwap {
                gain: keep * (1.0 + tau_j),
            });
        }
        self.gram_inv.ger(1.0 / keep, &w, &w, 1.0);
        self.gram.ger(-1.0, &vi, &vi, 1.0);
        self.logdet += keep.ln();

        self.counts[i] -= 1;
        self.counts[j] += 1;
        self.swaps_applied += 1;
        self.updates_since_refactor += 2;
        if self.updates_since_refactor >= REFACTOR_INTERVAL {
            self.refactor(points)?;
        }
        Ok(self.logdet - before)
    }

    /// Recompute `M`, `M⁻¹` and `ln det M` from the counts.
    pub fn refactor(&mut self, points: &PointSet) -> Result<()> {
        if self.counts.len() != points.len() {
            return Err(Error::ShapeMismatch {
                expected: points.len(),
                found: self.counts.len(),
            });
        }
        let gram = gram_sum(points, &self.counts)?;
        let chol = factor_spd(gram.clone()).ok_or(Error::SingularState)?;
        let logdet = 2.0
            * chol
                .l_dirty()
                .diagonal()
                .iter()
                .map(|x| x.ln())
                .sum::<f64>();
        if !logdet.is_finite() {
            return Err(Error::SingularState);
        }
        let mut inv = chol.inverse();
        symmetrize(&mut inv);
        self.gram = gram;
        self.gram_inv = inv;
        self.logdet = logdet;
        self.updates_since_refactor = 0;
        Ok(())
    }

    /// `‖M · M⁻¹ − I‖_max`.
    pub fn inverse_residual(&self) -> f64 {
        let d = self.gram.nrows();
        (&self.gram * &self.gram_inv - DMatrix::<f64>::identity(d, d))
            .abs()
            .max()
    }

    /// Leverage of every point plus the termination bound for `delta`.
    /// Candidates are the unselected points, or every point when
    /// `include_selected` is set.
    pub fn leverage_profile(
        &self,
        points: &PointSet,
        delta: f64,
        include_selected: bool,
    ) -> Result<LeverageProfile> {
        self.ensure_valid()?;
        let tau = all_leverages(&self.gram_inv, points);
        let max_tau_candidate = tau
            .iter()
            .enumerate()
            .filter(|&(j, _)| include_selected || self.counts[j] == 0)
            .map(|(_, &t)| t)
            .fold(0.0, f64::max);
        Ok(LeverageProfile {
            bound: termination_bound(points.dim(), self.total, delta),
            tau,
            max_tau_candidate,
            delta,
        })
    }
}

/// Leverage values `τ_j` of all points against a selection.
#[derive(Debug, Clone, PartialEq)]
pub struct LeverageProfile {
    pub tau: Vec<f64>,
    pub bound: f64,
    pub max_tau_candidate: f64,
    pub delta: f64,
}

impl LeverageProfile {
    pub fn certifies(&self, slack: f64) -> bool {
        self.max_tau_candidate < self.bound + slack
    }
}

pub fn swap_gain_from_leverages(tau_i: f64, tau_j: f64, tau_ij: f64) -> f64 {
    (1.0 - tau_i) * (1.0 + tau_j) + tau_ij * tau_ij
}

/// `τ_j = v_jᵀ A v_j` for every column of `points`.
pub(crate) fn all_leverages(inv: &DMatrix<f64>, points: &PointSet) -> Vec<f64> {
    let w = inv * points.columns();
    w.column_iter()
        .zip(points.columns().column_iter())
        .map(|(a, b)| a.dot(&b))
        .collect()
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let d = m.nrows();
    for a in 0..d {
        for b in 0..a {
            let s = 0.5 * (m[(a, b)] + m[(b, a)]);
            m[(a, b)] = s;
            m[(b, a)] = s;
        }
    }
}
