//! Balanced panels, residual matrices and test results.
//!
//! Everything here is immutable after construction. Data are stored
//! row-major by unit: row `i` of `y` is the time series of unit `i`, and
//! `x[[i, t, k]]` is regressor `k` of unit `i` at period `t`.

use std::fmt;

use ndarray::{Array2, Array3, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible number of units and periods.
pub const MIN_UNITS: usize = 3;
pub const MIN_PERIODS: usize = 3;

/// Relative tolerance for the zero row/column sum identities of residuals.
pub const SUM_TOLERANCE: f64 = 1e-8;

/// A validated balanced panel of one regressand and `m` regressors.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    y: Array2<f64>,
    x: Array3<f64>,
}

impl PanelDataset {
    pub fn y(&self) -> ArrayView2<'_, f64> {
        self.y.view()
    }

    /// Regressor tensor with shape `(N, T, m)`.
    pub fn x(&self) -> ndarray::ArrayView3<'_, f64> {
        self.x.view()
    }

    pub fn n_units(&self) -> usize {
        self.y.nrows()
    }

    pub fn n_periods(&self) -> usize {
        self.y.ncols()
    }

    pub fn n_regressors(&self) -> usize {
        self.x.shape()[2]
    }

    /// The `T x m` regressor matrix of unit `i`.
    pub fn unit_regressors(&self, i: usize) -> ArrayView2<'_, f64> {
        self.x.index_axis(Axis(0), i)
    }

    pub fn unit_series(&self, i: usize) -> ArrayView1<'_, f64> {
        self.y.row(i)
    }

    /// Frobenius norm of all stored data, used to scale numerical tolerances.
    pub(crate) fn data_scale(&self) -> f64 {
        let ss: f64 = self.y.iter().chain(self.x.iter()).map(|v| v * v).sum();
        ss.sqrt()
    }

    pub fn into_parts(self) -> (Array2<f64>, Array3<f64>) {
        (self.y, self.x)
    }
}

/// Validate raw arrays and wrap them as a [`PanelDataset`].
///
/// `y` is `N x T`; `x` is `N x T x m` (use `m = 0` for no regressors).
pub fn validate_panel(y: Array2<f64>, x: Array3<f64>) -> Result<PanelDataset> {
    let (n, t) = y.dim();
    let (xn, xt, _) = x.dim();
    if xn != n || xt != t {
        return Err(Error::DimensionMismatch(format!(
            "y is {n}x{t} but x is {xn}x{xt}x{}",
            x.shape()[2]
        )));
    }
    if n < MIN_UNITS || t < MIN_PERIODS {
        return Err(Error::TooSmall {
            n_units: n,
            n_periods: t,
            min_units: MIN_UNITS,
            min_periods: MIN_PERIODS,
        });
    }
    if let Some(((i, s), _)) = y.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteValue(format!("y[{i}, {s}]")));
    }
    if let Some(((i, s, k), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteValue(format!("x[{i}, {s}, {k}]")));
    }
    Ok(PanelDataset { y, x })
}

/// Which procedure produced a residual matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResidualSource {
    TwoWayFE,
    CCEPooled,
    FirstDiffTimeDummies,
    Raw,
}

impl fmt::Display for ResidualSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ResidualSource::TwoWayFE => "2WFE",
            ResidualSource::CCEPooled => "CCEP",
            ResidualSource::FirstDiffTimeDummies => "FD",
            ResidualSource::Raw => "raw",
        };
        f.write_str(s)
    }
}

/// `N x T` matrix of estimation residuals tagged with its source.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMatrix {
    e: Array2<f64>,
    source: ResidualSource,
    effective_t: usize,
}

impl ResidualMatrix {
    /// Build a residual matrix, checking every structural invariant.
    ///
    /// Rows must not be constant, and the zero-sum identities implied by
    /// `source` must hold to `1e-8 * ||e||`.
    pub fn new(e: Array2<f64>, source: ResidualSource) -> Result<Self> {
        let res = Self::checked(e, source, 0.0)?;
        if let Some(unit) = res.first_constant_row() {
            return Err(Error::DegenerateSeries { unit });
        }
        Ok(res)
    }

    /// Constructor used by the estimators. Perfect fits legitimately yield
    /// all-zero rows, so only the sum identities are enforced here; the
    /// tests reject degenerate rows themselves.
    pub(crate) fn from_estimator(e: Array2<f64>, source: ResidualSource, data_scale: f64) -> Result<Self> {
        Self::checked(e, source, 1e-12 * data_scale)
    }

    fn checked(e: Array2<f64>, source: ResidualSource, abs_tol: f64) -> Result<Self> {
        let (n, t) = e.dim();
        if n < 2 || t < 2 {
            return Err(Error::InvalidResiduals(format!("shape {n}x{t} is too small")));
        }
        if let Some(((i, s), _)) = e.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue(format!("e[{i}, {s}]")));
        }
        let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        let tol = SUM_TOLERANCE * norm + abs_tol;
        let check_cols = matches!(
            source,
            ResidualSource::TwoWayFE | ResidualSource::CCEPooled | ResidualSource::FirstDiffTimeDummies
        );
        if check_cols {
            for (s, col) in e.axis_iter(Axis(1)).enumerate() {
                let sum = col.sum();
                if sum.abs() > tol {
                    return Err(Error::InvalidResiduals(format!(
                        "column {s} sums to {sum:e} (tolerance {tol:e})"
                    )));
                }
            }
        }
        if source == ResidualSource::TwoWayFE {
            for (i, row) in e.axis_iter(Axis(0)).enumerate() {
                let sum = row.sum();
                if sum.abs() > tol {
                    return Err(Error::InvalidResiduals(format!(
                        "row {i} sums to {sum:e} (tolerance {tol:e})"
                    )));
                }
            }
        }
        Ok(ResidualMatrix {
            e,
            source,
            effective_t: t,
        })
    }

    fn first_constant_row(&self) -> Option<usize> {
        self.e
            .axis_iter(Axis(0))
            .position(|row| row.iter().all(|&v| v == row[0]))
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.e.view()
    }

    pub fn source(&self) -> ResidualSource {
        self.source
    }

    pub fn n_units(&self) -> usize {
        self.e.nrows()
    }

    /// Length of each residual series (T, or T - 1 after differencing).
    pub fn effective_t(&self) -> usize {
        self.effective_t
    }

    /// Residuals multiplied row-wise by `scale[i]`; keeps the source tag.
    ///
    /// Zero-sum identities are not rechecked, so the result is tagged `Raw`
    /// whenever the scaling breaks them.
    pub fn scale_rows(&self, scale: &[f64]) -> Result<ResidualMatrix> {
        if scale.len() != self.n_units() {
            return Err(Error::LengthMismatch {
                expected: self.n_units(),
                got: scale.len(),
            });
        }
        let mut e = self.e.clone();
        for (mut row, &c) in e.axis_iter_mut(Axis(0)).zip(scale) {
            row *= c;
        }
        let uniform = scale.iter().all(|&c| c == scale[0]);
        let source = if uniform { self.source } else { ResidualSource::Raw };
        Ok(ResidualMatrix {
            e,
            source,
            effective_t: self.effective_t,
        })
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.e
    }
}

/// Label of a CD-type statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "CD")]
    Cd,
    #[serde(rename = "CD_W")]
    CdW,
    #[serde(rename = "CD_W+")]
    CdWPlus,
    #[serde(rename = "CD_W_avg")]
    CdWAvg,
    #[serde(rename = "CD_W+_avg")]
    CdWPlusAvg,
    #[serde(rename = "CD_BC")]
    CdBc,
    #[serde(rename = "CD_W_SC")]
    CdWSc,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Cd,
        Variant::CdW,
        Variant::CdWPlus,
        Variant::CdWAvg,
        Variant::CdWPlusAvg,
        Variant::CdBc,
        Variant::CdWSc,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Variant::Cd => "CD",
            Variant::CdW => "CD_W",
            Variant::CdWPlus => "CD_W+",
            Variant::CdWAvg => "CD_W_avg",
            Variant::CdWPlusAvg => "CD_W+_avg",
            Variant::CdBc => "CD_BC",
            Variant::CdWSc => "CD_W_SC",
        }
    }

    /// Parse a label, accepting a few lower-case aliases used on the command line.
    pub fn parse(s: &str) -> Option<Variant> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        let v = match norm.as_str() {
            "cd" => Variant::Cd,
            "cdw" => Variant::CdW,
            "cdw+" | "cdwplus" => Variant::CdWPlus,
            "cdwavg" => Variant::CdWAvg,
            "cdw+avg" | "cdwplusavg" => Variant::CdWPlusAvg,
            "cdbc" => Variant::CdBc,
            "cdwsc" => Variant::CdWSc,
            _ => return None,
        };
        Some(v)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Optional diagnostics attached to a [`CdResult`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Screening threshold `2 sqrt(ln N / T)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Number of pairs with `|rho_ij|` above the threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceedances: Option<usize>,
    /// Value of the screening (power enhancement) term.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub screening: Option<f64>,
    /// Estimated bias subtracted by the analytic correction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias: Option<f64>,
    /// Variance estimate used for rescaling (Omega hat).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Per-draw statistics of an averaged variant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<Vec<f64>>,
    /// 0.1, 0.5 and 0.9 sample quantiles of `draws`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantiles: Option<[f64; 3]>,
}

/// A test statistic together with its two-sided normal p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdResult {
    pub statistic: f64,
    pub variant: Variant,
    pub p_value: f64,
    pub n_units: usize,
    pub n_periods: usize,
    #[serde(default)]
    pub aux: Diagnostics,
}
