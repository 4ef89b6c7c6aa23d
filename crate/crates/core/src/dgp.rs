//! Monte Carlo data generating process.
//!
//! ```text
//! y_it = beta x_it + lambda_i' f_t + sigma_i eps_it
//! x_it = Lambda_i' f_t + e_it
//! ```
//!
//! with `r` factors and a single regressor.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, Array3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::{validate_panel, PanelDataset, MIN_PERIODS, MIN_UNITS};
use crate::random::{draw_chi2_2, draw_normal, draw_std_chi2_2, draw_uniform, RngStream};

/// Distribution of the loading deviations `lambda_i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadingCase {
    /// Uniform on `(-h, h)`.
    Symmetric,
    /// Centred chi-squared(2), rescaled.
    Skewed,
}

/// Distribution of the idiosyncratic errors `eps_it` and `e_it`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCase {
    Normal,
    Chi2,
}

/// How unit error variances are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceCase {
    /// `c (s - 2) / D + 1` with `s ~ chi2(2)`, independent of the loadings.
    Independent,
    /// `0.5 + d T^{-1} sum_t (lambda_i' f_t)^2`, with `lambda_i - 1` in place
    /// of `lambda_i` by default.
    LoadingFunction,
}

/// Divisor `D` of the independent variance case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceDivisor {
    /// `sqrt(24)`: variance of `sigma^2` equals `c^2 / 6`.
    Sqrt24,
    /// `4`: variance of `sigma^2` equals `c^2 / 4`.
    Four,
}

impl VarianceDivisor {
    pub fn value(self) -> f64 {
        match self {
            VarianceDivisor::Sqrt24 => 24f64.sqrt(),
            VarianceDivisor::Four => 4.0,
        }
    }
}

/// Which element of `Lambda_i` is drawn from `U(0.5, 1.5)`; all others
/// come from `U(-0.5, 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressorLoadingShift {
    First,
    AllButFirst,
}

/// One Monte Carlo design cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DgpConfig {
    pub n_units: usize,
    pub n_periods: usize,
    pub n_regressors: usize,
    pub n_factors: usize,
    pub loading_case: LoadingCase,
    pub error_case: ErrorCase,
    pub variance_case: VarianceCase,
    pub c_sigma: f64,
    pub beta: f64,
    /// Two-way effects design: `f_t = [f_t1, 1]`, `lambda_i = [1, l_i]`,
    /// `Lambda_i = [1, L_i]`.
    pub two_way_restricted: bool,
    pub variance_divisor: VarianceDivisor,
    pub regressor_loading_shift: RegressorLoadingShift,
    /// Add the `0.5` intercept in the loading-function variance case.
    pub variance_intercept: bool,
    /// Use the loading deviations `lambda_i - 1` instead of `lambda_i` in
    /// the loading-function variance case.
    pub centered_variance_loadings: bool,
    /// Half-width of the symmetric loading deviations.
    pub symmetric_half_width: f64,
    /// Variance of the skewed loading deviations.
    pub skewed_variance: f64,
}

impl Default for DgpConfig {
    fn default() -> Self {
        DgpConfig {
            n_units: 25,
            n_periods: 25,
            n_regressors: 1,
            n_factors: 2,
            loading_case: LoadingCase::Symmetric,
            error_case: ErrorCase::Normal,
            variance_case: VarianceCase::Independent,
            c_sigma: 1.0,
            beta: 1.0,
            two_way_restricted: false,
            variance_divisor: VarianceDivisor::Sqrt24,
            regressor_loading_shift: RegressorLoadingShift::First,
            variance_intercept: true,
            centered_variance_loadings: true,
            symmetric_half_width: 0.75,
            skewed_variance: 1.0 / 6.0,
        }
    }
}

impl DgpConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_units < MIN_UNITS || self.n_periods < MIN_PERIODS {
            return bad(format!(
                "need N >= {MIN_UNITS} and T >= {MIN_PERIODS}, got N = {}, T = {}",
                self.n_units, self.n_periods
            ));
        }
        if self.n_regressors != 1 {
            return bad(format!(
                "the design has exactly one regressor, got m = {}",
                self.n_regressors
            ));
        }
        if !(2..=3).contains(&self.n_factors) {
            return bad(format!("number of factors must be 2 or 3, got {}", self.n_factors));
        }
        if self.two_way_restricted && self.n_factors != 2 {
            return bad("the two-way restricted design has exactly 2 factors".into());
        }
        if !(self.c_sigma >= 0.0 && self.c_sigma.is_finite()) {
            return bad(format!("c_sigma must be nonnegative, got {}", self.c_sigma));
        }
        if !self.beta.is_finite() {
            return bad("beta must be finite".into());
        }
        if !(self.symmetric_half_width > 0.0 && self.symmetric_half_width.is_finite()) {
            return bad("symmetric_half_width must be positive".into());
        }
        if !(self.skewed_variance > 0.0 && self.skewed_variance.is_finite()) {
            return bad("skewed_variance must be positive".into());
        }
        Ok(())
    }

    /// Scaling of the loading-function variance case: `sqrt(2)` under normal
    /// errors and `sqrt(3)` under chi-squared errors.
    pub fn d_sigma(&self) -> f64 {
        match self.error_case {
            ErrorCase::Normal => 2f64.sqrt(),
            ErrorCase::Chi2 => 3f64.sqrt(),
        }
    }

    /// Parse a `key = value` file. Blank lines and `#` comments are ignored;
    /// unknown keys are errors. Keys absent from the file keep their
    /// defaults.
    pub fn from_key_values(text: &str) -> Result<DgpConfig> {
        let mut cfg = DgpConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got `{line}`")))?;
            cfg.set(key.trim(), value.trim()).map_err(err)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Set one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("invalid value `{v}` for {key}"))
        }
        fn flag(key: &str, v: &str) -> std::result::Result<bool, String> {
            match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(format!("invalid value `{v}` for {key}")),
            }
        }
        let lower = value.to_ascii_lowercase();
        let choice = |opts: &[&str]| -> std::result::Result<usize, String> {
            opts.iter()
                .position(|o| *o == lower)
                .ok_or_else(|| format!("invalid value `{value}` for {key}; expected one of {}", opts.join(", ")))
        };
        match key {
            "n_units" | "N" | "n" => self.n_units = num(key, value)?,
            "n_periods" | "T" | "t" => self.n_periods = num(key, value)?,
            "n_regressors" => self.n_regressors = num(key, value)?,
            "n_factors" | "r" => self.n_factors = num(key, value)?,
            "loading_case" => {
                self.loading_case = [LoadingCase::Symmetric, LoadingCase::Skewed][choice(&["symmetric", "skewed"])?]
            }
            "error_case" => self.error_case = [ErrorCase::Normal, ErrorCase::Chi2][choice(&["normal", "chi2"])?],
            "variance_case" => {
                self.variance_case = [VarianceCase::Independent, VarianceCase::LoadingFunction]
                    [choice(&["independent", "loading_function"])?]
            }
            "c_sigma" => self.c_sigma = num(key, value)?,
            "beta" => self.beta = num(key, value)?,
            "two_way_restricted" => self.two_way_restricted = flag(key, value)?,
            "variance_divisor" => {
                self.variance_divisor = [VarianceDivisor::Sqrt24, VarianceDivisor::Four][choice(&["sqrt24", "4"])?]
            }
            "regressor_loading_shift" => {
                self.regressor_loading_shift = [RegressorLoadingShift::First, RegressorLoadingShift::AllButFirst]
                    [choice(&["first", "all_but_first"])?]
            }
            "variance_intercept" => self.variance_intercept = flag(key, value)?,
            "centered_variance_loadings" => self.centered_variance_loadings = flag(key, value)?,
            "symmetric_half_width" => self.symmetric_half_width = num(key, value)?,
            "skewed_variance" => self.skewed_variance = num(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Render as a `key = value` file that [`DgpConfig::from_key_values`] reads back.
    pub fn to_key_values(&self) -> String {
        let v = serde_json::to_value(self).expect("config serializes");
        let mut out = String::new();
        for (k, val) in v.as_object().expect("struct serializes to an object") {
            let text = match val {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let text = match (k.as_str(), text.as_str()) {
                ("variance_divisor", "four") => "4".to_string(),
                _ => text,
            };
            out.push_str(&format!("{k} = {text}\n"));
        }
        out
    }

    /// Short label of the design column, e.g. `sym/indep`.
    pub fn case_label(&self) -> String {
        let l = match self.loading_case {
            LoadingCase::Symmetric => "sym",
            LoadingCase::Skewed => "skew",
        };
        let v = match self.variance_case {
            VarianceCase::Independent => "indep",
            VarianceCase::LoadingFunction => "f(lambda)",
        };
        let e = match self.error_case {
            ErrorCase::Normal => "",
            ErrorCase::Chi2 => "/chi2",
        };
        format!("{l}/{v}{e}/c={}", self.c_sigma)
    }
}

impl fmt::Display for DgpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} T={} r={} {}{}",
            self.n_units,
            self.n_periods,
            self.n_factors,
            self.case_label(),
            if self.two_way_restricted { " restricted" } else { "" }
        )
    }
}

/// Everything the generator drew, for checks and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Truth {
    /// `N x r` loadings of the regressand.
    pub lambda: Array2<f64>,
    /// `N x r x m` loadings of the regressors.
    pub big_lambda: Array3<f64>,
    /// `T x r` factors.
    pub f: Array2<f64>,
    pub sigma2: Vec<f64>,
    /// `N x T` standardized errors of the regressand.
    pub eps: Array2<f64>,
    /// `N x T` errors of the regressor.
    pub e: Array2<f64>,
    /// Independent-case variances that came out nonpositive and were redrawn.
    pub variance_redraws: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPanel {
    pub panel: PanelDataset,
    pub truth: Truth,
}

// Substream tags within one replication stream.
const TAG_LOADINGS: u64 = 1;
const TAG_FACTORS: u64 = 2;
const TAG_VARIANCES: u64 = 3;
const TAG_EPS: u64 = 4;
const TAG_E: u64 = 5;

fn loading_deviation<R: Rng>(config: &DgpConfig, rng: &mut R) -> f64 {
    match config.loading_case {
        LoadingCase::Symmetric => {
            let h = config.symmetric_half_width;
            draw_uniform(rng, -h, h)
        }
        LoadingCase::Skewed => draw_std_chi2_2(rng, config.skewed_variance),
    }
}

fn regressor_loading<R: Rng>(config: &DgpConfig, rng: &mut R, element: usize) -> f64 {
    let shifted = match config.regressor_loading_shift {
        RegressorLoadingShift::First => element == 0,
        RegressorLoadingShift::AllButFirst => element != 0,
    };
    if shifted {
        draw_uniform(rng, 0.5, 1.5)
    } else {
        draw_uniform(rng, -0.5, 0.5)
    }
}

/// Draw `(lambda, Lambda)`, each `N x r` (a single regressor).
///
/// In the restricted two-way design the first column of both is fixed at 1
/// and the second column is drawn as element 2 of the unrestricted design.
pub fn draw_loadings(config: &DgpConfig, stream: &RngStream) -> Result<(Array2<f64>, Array2<f64>)> {
    config.validate()?;
    let (n, r) = (config.n_units, config.n_factors);
    let mut rng = stream.generator();
    let mut lambda = Array2::zeros((n, r));
    let mut big = Array2::zeros((n, r));
    for i in 0..n {
        for k in 0..r {
            lambda[[i, k]] = 1.0 + loading_deviation(config, &mut rng);
        }
        for k in 0..r {
            big[[i, k]] = regressor_loading(config, &mut rng, k);
        }
        if config.two_way_restricted {
            lambda[[i, 0]] = 1.0;
            big[[i, 0]] = 1.0;
        }
    }
    Ok((lambda, big))
}

/// Draw the `T x r` factors; in the restricted design column 2 is 1.
pub fn draw_factors(config: &DgpConfig, stream: &RngStream) -> Array2<f64> {
    let (t, r) = (config.n_periods, config.n_factors);
    let mut rng = stream.generator();
    let mut f = Array2::from_shape_simple_fn((t, r), || draw_normal(&mut rng));
    if config.two_way_restricted {
        f.column_mut(1).fill(1.0);
    }
    f
}

/// Draw unit error variances; returns `(sigma2, redraws)`.
pub fn draw_variances(
    config: &DgpConfig,
    lambda: &Array2<f64>,
    f: &Array2<f64>,
    stream: &RngStream,
) -> Result<(Vec<f64>, usize)> {
    let n = config.n_units;
    if lambda.nrows() != n || lambda.ncols() != f.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "lambda is {}x{}, factors are {}x{}",
            lambda.nrows(),
            lambda.ncols(),
            f.nrows(),
            f.ncols()
        )));
    }
    match config.variance_case {
        VarianceCase::Independent => {
            let mut rng = stream.generator();
            let div = config.variance_divisor.value();
            let mut redraws = 0;
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                loop {
                    let s = config.c_sigma * (draw_chi2_2(&mut rng) - 2.0) / div + 1.0;
                    if s > 0.0 {
                        out.push(s);
                        break;
                    }
                    redraws += 1;
                    if redraws > 1000 * n {
                        return Err(Error::InvalidConfig(format!(
                            "c_sigma = {} almost never yields a positive variance",
                            config.c_sigma
                        )));
                    }
                }
            }
            Ok((out, redraws))
        }
        VarianceCase::LoadingFunction => {
            let t = f.nrows() as f64;
            let d = config.d_sigma();
            let intercept = if config.variance_intercept { 0.5 } else { 0.0 };
            let common = if config.centered_variance_loadings {
                (lambda - 1.0).dot(&f.t())
            } else {
                lambda.dot(&f.t())
            };
            let out: Vec<f64> = common
                .rows()
                .into_iter()
                .map(|row| intercept + d * row.iter().map(|v| v * v).sum::<f64>() / t)
                .collect();
            if let Some(i) = out.iter().position(|&s| !(s > 0.0)) {
                return Err(Error::InvalidConfig(format!("unit {i} has zero error variance")));
            }
            Ok((out, 0))
        }
    }
}

fn draw_errors(config: &DgpConfig, stream: &RngStream) -> Array2<f64> {
    let mut rng = stream.generator();
    let shape = (config.n_units, config.n_periods);
    match config.error_case {
        ErrorCase::Normal => Array2::from_shape_simple_fn(shape, || draw_normal(&mut rng)),
        ErrorCase::Chi2 => Array2::from_shape_simple_fn(shape, || draw_std_chi2_2(&mut rng, 1.0)),
    }
}

/// Simulate one panel. Every component comes from its own substream of
/// `stream`, so the result depends only on `(config, stream)`.
pub fn simulate(config: &DgpConfig, stream: &RngStream) -> Result<SimulatedPanel> {
    config.validate()?;
    let (n, t, r) = (config.n_units, config.n_periods, config.n_factors);
    let (lambda, big) = draw_loadings(config, &stream.derive(TAG_LOADINGS))?;
    let f = draw_factors(config, &stream.derive(TAG_FACTORS));
    let (sigma2, variance_redraws) = draw_variances(config, &lambda, &f, &stream.derive(TAG_VARIANCES))?;
    let eps = draw_errors(config, &stream.derive(TAG_EPS));
    let e = draw_errors(config, &stream.derive(TAG_E));

    let common_y = lambda.dot(&f.t());
    let common_x = big.dot(&f.t());
    let x2 = &common_x + &e;
    let mut y = Array2::zeros((n, t));
    for i in 0..n {
        let s = sigma2[i].sqrt();
        for s_t in 0..t {
            y[[i, s_t]] = config.beta * x2[[i, s_t]] + common_y[[i, s_t]] + s * eps[[i, s_t]];
        }
    }
    let x = x2.clone().into_shape_with_order((n, t, 1)).expect("contiguous N x T");
    let big_lambda = big.into_shape_with_order((n, r, 1)).expect("contiguous N x r");
    let panel = validate_panel(y, x)?;
    Ok(SimulatedPanel {
        panel,
        truth: Truth {
            lambda,
            big_lambda,
            f,
            sigma2,
            eps,
            e,
            variance_redraws,
        },
    })
}
