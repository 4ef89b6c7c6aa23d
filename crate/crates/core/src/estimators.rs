//! Residuals from two-way fixed effects, pooled CCE, and first differences
//! with period dummies.

use nalgebra::{DMatrix, DVector};
use ndarray::{Array2, Array3, ArrayView2, ArrayView3, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_normal_equations, ColumnSpace};
use crate::panel::{PanelDataset, ResidualMatrix, ResidualSource};

/// Estimation pipeline selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Estimator {
    TwoWayFE,
    CCEPooled,
    FirstDiffTimeDummies,
}

impl Estimator {
    pub fn estimate(self, panel: &PanelDataset) -> Result<EstimatorOutput> {
        match self {
            Estimator::TwoWayFE => two_way_within_residuals(panel),
            Estimator::CCEPooled => cce_pooled(panel),
            Estimator::FirstDiffTimeDummies => fd_time_dummies_residuals(panel),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Estimator::TwoWayFE => "2WFE",
            Estimator::CCEPooled => "CCEP",
            Estimator::FirstDiffTimeDummies => "FD",
        }
    }
}

/// Output of one estimation pipeline.
#[derive(Debug, Clone)]
pub struct EstimatorOutput {
    pub beta_hat: Vec<f64>,
    pub residuals: ResidualMatrix,
    /// `T x (m+1)` matrix `[ybar, Xbar]` (CCE only).
    pub factor_proxies: Option<Array2<f64>>,
    /// `N x (m+1)` loadings of `y_i - X_i beta_hat` on the proxies (CCE only).
    pub loadings_hat: Option<Array2<f64>>,
    /// `sum_i T^{-1} X_i' M X_i`, an `m x m` matrix (CCE only).
    pub regressor_moments: Option<Array2<f64>>,
}

/// Period-wise cross-section averages `[ybar_t, xbar_{t,1}, ..., xbar_{t,m}]`.
///
/// Works on raw arrays, so a single unit is allowed.
pub fn cross_section_means(y: ArrayView2<'_, f64>, x: ArrayView3<'_, f64>) -> Array2<f64> {
    let (n, t) = y.dim();
    let m = x.shape()[2];
    let mut out = Array2::zeros((t, m + 1));
    let inv_n = 1.0 / n as f64;
    for s in 0..t {
        out[[s, 0]] = y.column(s).sum() * inv_n;
        for k in 0..m {
            out[[s, k + 1]] = x.slice(ndarray::s![.., s, k]).sum() * inv_n;
        }
    }
    out
}

/// The factor proxy matrix `F_hat = [ybar, Xbar]` of a panel, `T x (m+1)`.
pub fn factor_proxies(panel: &PanelDataset) -> Array2<f64> {
    cross_section_means(panel.y(), panel.x())
}

fn double_demean(z: &mut Array2<f64>) {
    let grand = z.mean().unwrap_or(0.0);
    let row_means = z.mean_axis(Axis(1)).expect("non-empty rows");
    let col_means = z.mean_axis(Axis(0)).expect("non-empty columns");
    for ((i, s), v) in z.indexed_iter_mut() {
        *v = *v - row_means[i] - col_means[s] + grand;
    }
}

fn demean_columns(z: &mut Array2<f64>) {
    let col_means = z.mean_axis(Axis(0)).expect("non-empty columns");
    for mut row in z.axis_iter_mut(Axis(0)) {
        row -= &col_means;
    }
}

/// Pull regressor `k` out of an `N x T x m` tensor as an `N x T` matrix.
fn regressor(x: ArrayView3<'_, f64>, k: usize) -> Array2<f64> {
    x.index_axis(Axis(2), k).to_owned()
}

fn stack_regressors(cols: Vec<Array2<f64>>, n: usize, t: usize) -> Array3<f64> {
    let m = cols.len();
    let mut x = Array3::zeros((n, t, m));
    for (k, c) in cols.into_iter().enumerate() {
        x.index_axis_mut(Axis(2), k).assign(&c);
    }
    x
}

/// Pooled least squares of `y` on the regressor tensor `x`; returns
/// `(beta, residuals)`. `reference` scales the singularity check.
fn pooled_ls(y: &Array2<f64>, x: &Array3<f64>, reference: f64) -> Result<(Vec<f64>, Array2<f64>)> {
    let m = x.shape()[2];
    let mut xtx = DMatrix::<f64>::zeros(m, m);
    let mut xty = DVector::<f64>::zeros(m);
    for ((i, s), &yv) in y.indexed_iter() {
        for a in 0..m {
            let xa = x[[i, s, a]];
            xty[a] += xa * yv;
            for b in 0..=a {
                xtx[(a, b)] += xa * x[[i, s, b]];
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            xtx[(b, a)] = xtx[(a, b)];
        }
    }
    let beta = solve_normal_equations(&xtx, &xty, reference)?;
    let beta: Vec<f64> = beta.iter().copied().collect();
    let mut e = y.clone();
    if m > 0 {
        for ((i, s), v) in e.indexed_iter_mut() {
            for (k, b) in beta.iter().enumerate() {
                *v -= x[[i, s, k]] * b;
            }
        }
    }
    Ok((beta, e))
}

/// Largest diagonal element of the raw regressor cross-product.
fn raw_cross_product_scale(x: ArrayView3<'_, f64>) -> f64 {
    let m = x.shape()[2];
    (0..m)
        .map(|k| x.index_axis(Axis(2), k).iter().map(|v| v * v).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Two-way fixed effects: double-demean `y` and every regressor, then run
/// pooled least squares on the transformed data.
pub fn two_way_within_residuals(panel: &PanelDataset) -> Result<EstimatorOutput> {
    let (n, t, m) = (panel.n_units(), panel.n_periods(), panel.n_regressors());
    let mut y = panel.y().to_owned();
    double_demean(&mut y);
    let cols = (0..m)
        .map(|k| {
            let mut c = regressor(panel.x(), k);
            double_demean(&mut c);
            c
        })
        .collect();
    let x = stack_regressors(cols, n, t);
    let (beta_hat, e) = pooled_ls(&y, &x, raw_cross_product_scale(panel.x()))?;
    let residuals = ResidualMatrix::from_estimator(e, ResidualSource::TwoWayFE, panel.data_scale())?;
    Ok(EstimatorOutput {
        beta_hat,
        residuals,
        factor_proxies: None,
        loadings_hat: None,
        regressor_moments: None,
    })
}

/// First differences over time followed by period-wise cross-section
/// demeaning (equivalent to year dummies) and pooled least squares.
///
/// The residual series have length `T - 1`.
pub fn fd_time_dummies_residuals(panel: &PanelDataset) -> Result<EstimatorOutput> {
    let (n, t, m) = (panel.n_units(), panel.n_periods(), panel.n_regressors());
    if t < 4 {
        return Err(Error::TooSmall {
            n_units: n,
            n_periods: t,
            min_units: crate::panel::MIN_UNITS,
            min_periods: 4,
        });
    }
    let diff = |z: ArrayView2<'_, f64>| -> Array2<f64> {
        let mut d = &z.slice(ndarray::s![.., 1..]) - &z.slice(ndarray::s![.., ..t - 1]);
        demean_columns(&mut d);
        d
    };
    let y = diff(panel.y());
    let cols = (0..m).map(|k| diff(panel.x().index_axis(Axis(2), k))).collect();
    let x = stack_regressors(cols, n, t - 1);
    let (beta_hat, e) = pooled_ls(&y, &x, raw_cross_product_scale(panel.x()))?;
    let residuals = ResidualMatrix::from_estimator(e, ResidualSource::FirstDiffTimeDummies, panel.data_scale())?;
    Ok(EstimatorOutput {
        beta_hat,
        residuals,
        factor_proxies: None,
        loadings_hat: None,
        regressor_moments: None,
    })
}

/// Pooled common correlated effects estimator.
///
/// Projects every unit's series off the span of `F_hat = [ybar, Xbar]`,
/// pools the annihilated regressions for `beta_hat`, and records the
/// per-unit loadings on `F_hat` and the summed annihilated regressor
/// moments needed by the analytic bias correction.
pub fn cce_pooled(panel: &PanelDataset) -> Result<EstimatorOutput> {
    let (n, t, m) = (panel.n_units(), panel.n_periods(), panel.n_regressors());
    if t <= m + 1 {
        return Err(Error::TooSmall {
            n_units: n,
            n_periods: t,
            min_units: crate::panel::MIN_UNITS,
            min_periods: m + 2,
        });
    }
    let proxies = factor_proxies(panel);
    let proxy_cols: Vec<Vec<f64>> = proxies.columns().into_iter().map(|c| c.to_vec()).collect();
    let space = ColumnSpace::new(&proxy_cols);
    if space.rank() < m + 1 {
        return Err(Error::RankDeficientProxies {
            rank: space.rank(),
            required: m + 1,
        });
    }

    let mut my = panel.y().to_owned();
    for mut row in my.axis_iter_mut(Axis(0)) {
        space.annihilate(row.as_slice_mut().expect("row-major storage"));
    }
    let mut mx = Array3::zeros((n, t, m));
    for i in 0..n {
        for k in 0..m {
            let mut col = panel.x().slice(ndarray::s![i, .., k]).to_vec();
            space.annihilate(&mut col);
            mx.slice_mut(ndarray::s![i, .., k]).assign(&ndarray::Array1::from(col));
        }
    }

    // X_i' M X_i = (M X_i)'(M X_i) since M is a symmetric idempotent.
    let (beta_hat, e) = pooled_ls(&my, &mx, raw_cross_product_scale(panel.x()))?;

    let mut moments = Array2::zeros((m, m));
    for i in 0..n {
        for a in 0..m {
            for b in 0..m {
                let s: f64 = (0..t).map(|s| mx[[i, s, a]] * mx[[i, s, b]]).sum();
                moments[[a, b]] += s / t as f64;
            }
        }
    }

    let mut loadings = Array2::zeros((n, m + 1));
    for i in 0..n {
        let partial: Vec<f64> = (0..t)
            .map(|s| {
                let mut v = panel.y()[[i, s]];
                for (k, b) in beta_hat.iter().enumerate() {
                    v -= panel.x()[[i, s, k]] * b;
                }
                v
            })
            .collect();
        let coef = space.coefficients(&partial);
        loadings.row_mut(i).assign(&ndarray::Array1::from(coef));
    }

    let residuals = ResidualMatrix::from_estimator(e, ResidualSource::CCEPooled, panel.data_scale())?;
    Ok(EstimatorOutput {
        beta_hat,
        residuals,
        factor_proxies: Some(proxies),
        loadings_hat: Some(loadings),
        regressor_moments: Some(moments),
    })
}
