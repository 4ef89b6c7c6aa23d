//! Small dense least-squares helpers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Condition number beyond which a least-squares problem is refused.
pub const MAX_CONDITION: f64 = 1e12;

/// Orthogonal projection onto the column space of a tall `T x k` matrix.
///
/// Built from a thin SVD, so annihilation never forms `(F'F)^{-1}`.
#[derive(Debug, Clone)]
pub struct ColumnSpace {
    /// Orthonormal basis vectors, each of length `T`.
    basis: Vec<Vec<f64>>,
    /// Rows of `V S^{-1}` restricted to the retained singular directions:
    /// `coef_map[c][j]` maps basis coordinate `j` to column coefficient `c`.
    coef_map: Vec<Vec<f64>>,
    rank: usize,
    condition: f64,
}

impl ColumnSpace {
    /// `columns[c]` is column `c` of the matrix; all columns share length `T`.
    pub fn new(columns: &[Vec<f64>]) -> ColumnSpace {
        let k = columns.len();
        let t = columns.first().map_or(0, Vec::len);
        if k == 0 || t == 0 {
            return ColumnSpace {
                basis: Vec::new(),
                coef_map: vec![Vec::new(); k],
                rank: 0,
                condition: f64::INFINITY,
            };
        }
        let mat = DMatrix::from_fn(t, k, |r, c| columns[c][r]);
        let svd = mat.svd(true, true);
        let u = svd.u.expect("thin U requested");
        let v_t = svd.v_t.expect("V^T requested");
        let s = svd.singular_values;
        let s_max = s.iter().cloned().fold(0.0_f64, f64::max);
        let tol = s_max * (t.max(k) as f64) * f64::EPSILON;
        let keep: Vec<usize> = (0..s.len()).filter(|&j| s[j] > tol).collect();
        let s_min = s.iter().cloned().fold(f64::INFINITY, f64::min);
        let condition = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
        let basis = keep.iter().map(|&j| u.column(j).iter().copied().collect()).collect();
        // beta = V S^{-1} U' z, so coefficient c = sum_j V[c, j] / s_j * (u_j' z)
        let coef_map = (0..k)
            .map(|c| keep.iter().map(|&j| v_t[(j, c)] / s[j]).collect())
            .collect();
        ColumnSpace {
            basis,
            coef_map,
            rank: keep.len(),
            condition,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Ratio of largest to smallest singular value.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    fn coordinates(&self, z: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .map(|q| q.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Replace `z` by `M z = z - Q Q' z` in place.
    pub fn annihilate(&self, z: &mut [f64]) {
        let coords = self.coordinates(z);
        for (q, c) in self.basis.iter().zip(coords) {
            for (zi, qi) in z.iter_mut().zip(q) {
                *zi -= c * qi;
            }
        }
    }

    /// Least-squares coefficients of `z` on the original columns.
    pub fn coefficients(&self, z: &[f64]) -> Vec<f64> {
        let coords = self.coordinates(z);
        self.coef_map
            .iter()
            .map(|row| row.iter().zip(&coords).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Solve the normal equations `xtx * beta = xty` for a symmetric
/// positive-definite `xtx`, refusing ill-conditioned systems.
///
/// `reference` is the scale of the untransformed cross-product (its largest
/// diagonal element); a transformed system whose smallest eigenvalue falls
/// below `reference / MAX_CONDITION` has lost its identifying variation.
pub fn solve_normal_equations(xtx: &DMatrix<f64>, xty: &DVector<f64>, reference: f64) -> Result<DVector<f64>> {
    let m = xtx.nrows();
    if m == 0 {
        return Ok(DVector::zeros(0));
    }
    let eig = SymmetricEigen::new(xtx.clone());
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    let scale = lmax.max(reference);
    if !(lmin > 0.0) || scale / lmin > MAX_CONDITION {
        return Err(Error::SingularDesign(format!(
            "regressor cross-product has eigenvalues in [{lmin:e}, {lmax:e}]"
        )));
    }
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l));
    Ok(&eig.eigenvectors * inv_diag * eig.eigenvectors.transpose() * xty)
}
