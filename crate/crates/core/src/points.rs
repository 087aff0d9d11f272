//! Input point sets and their reduction to a full-rank working space.
//!
//! Every downstream index refers to a row of the *working* point set. Rows
//! that are numerically zero are dropped here; [`PointSet::source_index`]
//! maps working indices back to the caller's row order.

use nalgebra::{Cholesky, DMatrix, DVector, DVectorView, Dyn, SVD};

use crate::error::{Error, Result};

/// A finite set of points, stored column-wise in working coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    /// `dim × n`; column `i` is point `i`.
    cols: DMatrix<f64>,
    ambient_dim: usize,
    /// Orthonormal `ambient_dim × dim` map, present only when the input was
    /// rank deficient.
    span_basis: Option<DMatrix<f64>>,
    source_rows: Vec<usize>,
    dropped_rows: Vec<usize>,
    raw_rows: usize,
}

impl PointSet {
    /// Preprocess a row-per-point matrix with the default rank tolerance.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(n * d);
        for (line, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::RaggedRows {
                    line: line + 1,
                    expected: d,
                    found: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        preprocess(&DMatrix::from_row_slice(n, d, &flat), None)
    }

    /// Number of (nonzero) points.
    pub fn len(&self) -> usize {
        self.cols.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.ncols() == 0
    }

    /// Working dimension, equal to the numerical rank of the input.
    pub fn dim(&self) -> usize {
        self.cols.nrows()
    }

    pub fn effective_rank(&self) -> usize {
        self.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn point(&self, i: usize) -> DVectorView<'_, f64> {
        self.cols.column(i)
    }

    /// The `dim × n` matrix whose columns are the points.
    pub fn columns(&self) -> &DMatrix<f64> {
        &self.cols
    }

    pub fn span_basis(&self) -> Option<&DMatrix<f64>> {
        self.span_basis.as_ref()
    }

    /// Row of the original input that working point `i` came from.
    pub fn source_index(&self, i: usize) -> usize {
        self.source_rows[i]
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_rows
    }

    pub fn dropped_rows(&self) -> &[usize] {
        &self.dropped_rows
    }

    /// Number of rows in the original input, zero rows included.
    pub fn raw_len(&self) -> usize {
        self.raw_rows
    }

    /// Map a working-space vector back to ambient coordinates.
    pub fn to_ambient(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.span_basis {
            Some(basis) => basis * v,
            None => v.clone(),
        }
    }

    /// Multiply every coordinate by `s`. Used by scale-invariance checks.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.cols *= s;
        out
    }

    /// The points at `indices`, in that order, keeping working coordinates.
    /// Source indices are carried over.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            self.check_index(i)?;
        }
        Ok(PointSet {
            cols: self.cols.select_columns(indices.iter()),
            ambient_dim: self.ambient_dim,
            span_basis: self.span_basis.clone(),
            source_rows: indices.iter().map(|&i| self.source_rows[i]).collect(),
            dropped_rows: Vec::new(),
            raw_rows: self.raw_rows,
        })
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.len(),
            })
        }
    }
}

/// Reduce a raw `n × d` matrix (row `i` = point `i`) to a [`PointSet`] that
/// spans its working space.
///
/// `rank_tol` is relative to the largest singular value; when `None`, the
/// threshold is `max(n, d) · ε_machine`. Numerically zero rows are dropped
/// and recorded. When the numerical rank is below `d` the points are
/// re-expressed in an orthonormal basis of their span.
pub fn preprocess(raw: &DMatrix<f64>, rank_tol: Option<f64>) -> Result<PointSet> {
    let (n, d) = raw.shape();
    if n == 0 || d == 0 {
        return Err(Error::AllZero);
    }
    for row in 0..n {
        for col in 0..d {
            if !raw[(row, col)].is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
    }

    let norms: Vec<f64> = (0..n).map(|i| raw.row(i).norm()).collect();
    let max_norm = norms.iter().cloned().fold(0.0, f64::max);
    if max_norm == 0.0 {
        return Err(Error::AllZero);
    }
    let heuristic = n.max(d) as f64 * f64::EPSILON;
    let zero_tol = max_norm * heuristic;
    let (kept, dropped): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| norms[i] > zero_tol);

    let rows = raw.select_rows(kept.iter());
    let svd = SVD::new(rows.clone(), false, true);
    let sigma_max = svd.singular_values.max();
    let rel = rank_tol.unwrap_or(heuristic);
    let keep_dirs: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s > sigma_max * rel)
        .map(|(k, _)| k)
        .collect();
    let rank = keep_dirs.len();

    let (cols, span_basis) = if rank == d {
        (rows.transpose(), None)
    } else {
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        let basis = v_t.select_rows(keep_dirs.iter()).transpose();
        ((&rows * &basis).transpose(), Some(basis))
    };

    Ok(PointSet {
        cols,
        ambient_dim: d,
        span_basis,
        source_rows: kept,
        dropped_rows: dropped,
        raw_rows: n,
    })
}

/// `Σ counts_i · v_i v_iᵀ` over the working points.
pub fn gram_sum(points: &PointSet, counts: &[usize]) -> Result<DMatrix<f64>> {
    if counts.len() != points.len() {
        return Err(Error::ShapeMismatch {
            expected: points.len(),
            found: counts.len(),
        });
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::InvalidConfig(
            "gram sum needs at least one point".into(),
        ));
    }
    let weights: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    weighted_gram(points, &weights)
}

/// `Σ w_i · v_i v_iᵀ` for arbitrary nonnegative weights.
pub fn weighted_gram(points: &PointSet, weights: &[f64]) -> Result<DMatrix<f64>> {
    if weights.len() != points.len() {
        return Err(Error::ShapeMismatch {
            expected: points.len(),
            found: weights.len(),
        });
    }
    let d = points.dim();
    let mut m = DMatrix::zeros(d, d);
    for (i, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            let v = points.point(i);
            m.ger(w, &v, &v, 1.0);
        }
    }
    // exact symmetry
    for a in 0..d {
        for b in 0..a {
            let s = 0.5 * (m[(a, b)] + m[(b, a)]);
            m[(a, b)] = s;
            m[(b, a)] = s;
        }
    }
    Ok(m)
}

/// Cholesky factor of a symmetric positive semidefinite matrix, or `None`
/// when it is numerically singular: the smallest eigenvalue must exceed
/// `16 · dim · ε` times the largest. Cholesky pivots alone do not detect
/// this, since rounding in a singular matrix can leave a sizeable pivot.
pub fn factor_spd(m: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > 16.0 * n as f64 * f64::EPSILON * hi) {
        return None;
    }
    Cholesky::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn full_rank_input_is_unchanged() {
        let raw = dmatrix![1.0, 0.0; 0.0, 1.0; 1.0, 1.0];
        let ps = preprocess(&raw, None).unwrap();
        assert_eq!(ps.effective_rank(), 2);
        assert_eq!(ps.len(), 3);
        assert!(ps.span_basis().is_none());
        assert_eq!(ps.columns(), &raw.transpose());
    }

    #[test]
    fn constant_zero_coordinate_reduces_dimension() {
        let raw = dmatrix![1.0, 0.0, 0.0; 0.0, 1.0, 0.0; 1.0, 1.0, 0.0];
        let ps = preprocess(&raw, None).unwrap();
        assert_eq!(ps.effective_rank(), 2);
        assert_eq!(ps.ambient_dim(), 3);
        let basis = ps.span_basis().unwrap();
        // points map back exactly
        for i in 0..3 {
            let back = ps.to_ambient(&ps.point(i).into_owned());
            let orig = raw.row(i).transpose();
            assert!((back - orig).norm() < 1e-12);
        }
        assert!((basis.transpose() * basis - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn collinear_with_zero_row() {
        let raw = dmatrix![1.0, 1.0; 2.0, 2.0; 3.0, 3.0; 0.0, 0.0];
        let ps = preprocess(&raw, None).unwrap();
        assert_eq!(ps.dropped_rows(), &[3]);
        assert_eq!(ps.effective_rank(), 1);
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.source_indices(), &[0, 1, 2]);
        // |coordinate| is the norm along (1,1)/√2
        for (i, k) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert!((ps.point(i)[0].abs() - k * 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_all_zero_and_non_finite() {
        assert!(matches!(
            preprocess(&dmatrix![0.0, 0.0; 0.0, 0.0], None),
            Err(Error::AllZero)
        ));
        assert!(matches!(
            preprocess(&dmatrix![1.0, f64::NAN], None),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            preprocess(&dmatrix![1.0, 0.0; f64::INFINITY, 0.0], None),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn gram_sum_examples() {
        let basis = PointSet::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(gram_sum(&basis, &[1, 1]).unwrap(), DMatrix::identity(2, 2));

        let ps = PointSet::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.1]]).unwrap();
        let m = gram_sum(&ps, &[1, 1]).unwrap();
        let expected = dmatrix![2.0, 0.1; 0.1, 0.01];
        assert!((m - expected).abs().max() < 1e-15);

        let m = gram_sum(&ps, &[2, 0]).unwrap();
        assert_eq!(m, dmatrix![2.0, 0.0; 0.0, 0.0]);
    }

    #[test]
    fn rank_deficient_gram_is_rejected() {
        let ps = PointSet::from_rows(&[
            vec![1.0, 0.3, -2.0],
            vec![0.5, 1.0, 0.25],
            vec![1.5, 1.3, -1.75],
        ])
        .unwrap();
        // rank-2 input, so one point cannot span the working plane
        assert_eq!(ps.dim(), 2);
        assert!(factor_spd(gram_sum(&ps, &[1, 0, 0]).unwrap()).is_none());
        assert!(factor_spd(gram_sum(&ps, &[1, 1, 0]).unwrap()).is_some());
        assert!(factor_spd(dmatrix![1.0, 1.0; 1.0, 1.0 + 1e-17]).is_none());
    }

    #[test]
    fn gram_sum_shape_errors() {
        let ps = PointSet::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            gram_sum(&ps, &[1]),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            gram_sum(&ps, &[0, 0]),
            Err(Error::InvalidConfig(_))
        ));
    }
}
