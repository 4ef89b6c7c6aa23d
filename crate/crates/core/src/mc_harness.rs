//! Monte Carlo design cells and table replication.
//!
//! Replication `r` of a cell draws everything from `RngStream::new(seed, r)`,
//! runs in parallel, and is aggregated in replication order, so a summary
//! is bitwise identical for any number of workers.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cd_tests::{
    cd_bias_corrected_2wfe_given, cd_bias_corrected_cce_given, cd_given, cd_power_enhanced_given, cd_weighted,
    cd_weighted_averaged_given, pairwise_correlations, serial_robust_cd_weighted,
};
use crate::dgp::{simulate, DgpConfig, LoadingCase, VarianceCase, VarianceDivisor};
use crate::error::{Error, Result};
use crate::estimators::Estimator;
use crate::panel::{CdResult, Variant};
use crate::random::{rademacher, RngStream};
use crate::references::{self, Reference, C_SIGMAS, RATE_COLUMNS};

/// Default number of replications per cell.
pub const DEFAULT_REPLICATIONS: usize = 2000;
/// Default number of weight draws for averaged statistics.
pub const DEFAULT_DRAWS: usize = 30;
/// Largest failed share of replications a cell tolerates.
pub const MAX_FAILURE_SHARE: f64 = 0.01;

// Substream tags; the generator itself uses tags 1 to 5.
const TAG_WEIGHTS: u64 = 6;
const TAG_AVERAGED: u64 = 7;

/// One cell of a Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentDesign {
    pub dgp: DgpConfig,
    pub estimator: Estimator,
    pub statistics: Vec<Variant>,
    pub replications: usize,
    pub significance_level: f64,
    pub master_seed: u64,
    pub draws: usize,
}

impl ExperimentDesign {
    pub fn new(dgp: DgpConfig, estimator: Estimator, statistics: Vec<Variant>) -> Self {
        ExperimentDesign {
            dgp,
            estimator,
            statistics,
            replications: DEFAULT_REPLICATIONS,
            significance_level: 0.05,
            master_seed: 42,
            draws: DEFAULT_DRAWS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dgp.validate()?;
        if self.replications == 0 {
            return Err(Error::InvalidConfig("at least one replication is required".into()));
        }
        if !(self.significance_level > 0.0 && self.significance_level < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "significance level must lie in (0, 1), got {}",
                self.significance_level
            )));
        }
        if self.statistics.is_empty() {
            return Err(Error::InvalidConfig("no statistics requested".into()));
        }
        if self.draws == 0 {
            return Err(Error::InvalidConfig("number of weight draws must be at least 1".into()));
        }
        if self.statistics.contains(&Variant::CdBc) && self.estimator == Estimator::FirstDiffTimeDummies {
            return Err(Error::InvalidConfig(
                "no analytic bias correction exists for first-difference residuals".into(),
            ));
        }
        Ok(())
    }
}

/// Aggregate of one statistic over the successful replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub variant: Variant,
    pub mean: f64,
    /// Sample variance with divisor `R - 1` (0 when `R = 1`).
    pub variance: f64,
    pub rejection_rate: f64,
    /// Standard error of `mean`.
    pub mc_se: f64,
    /// Binomial standard error of `rejection_rate`.
    pub rejection_se: f64,
}

/// Result of [`run_cell`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellSummary {
    pub stats: Vec<StatSummary>,
    pub replications: usize,
    pub successes: usize,
    pub failures: usize,
    pub master_seed: u64,
    /// Nonpositive variance draws that were redrawn, summed over replications.
    pub variance_redraws: usize,
    pub wall_seconds: f64,
}

/// Equality ignores `wall_seconds`.
impl PartialEq for CellSummary {
    fn eq(&self, other: &Self) -> bool {
        self.stats == other.stats
            && self.replications == other.replications
            && self.successes == other.successes
            && self.failures == other.failures
            && self.master_seed == other.master_seed
            && self.variance_redraws == other.variance_redraws
    }
}

impl CellSummary {
    pub fn stat(&self, variant: Variant) -> Option<&StatSummary> {
        self.stats.iter().find(|s| s.variant == variant)
    }
}

/// Fraction of results with p-value strictly below `level`.
pub fn rejection_rate(stats: &[CdResult], level: f64) -> Result<f64> {
    if stats.is_empty() {
        return Err(Error::EmptyInput);
    }
    let hits = stats.iter().filter(|r| r.p_value < level).count();
    Ok(hits as f64 / stats.len() as f64)
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// All requested statistics for one replication, in request order.
fn replicate_once(design: &ExperimentDesign, r: usize) -> Result<(Vec<CdResult>, usize)> {
    let stream = RngStream::new(design.master_seed, r as u64);
    let sim = simulate(&design.dgp, &stream)?;
    let out = design.estimator.estimate(&sim.panel)?;
    let res = &out.residuals;
    let needs_rho = design
        .statistics
        .iter()
        .any(|v| matches!(v, Variant::Cd | Variant::CdWPlus | Variant::CdWPlusAvg | Variant::CdBc));
    let rho = if needs_rho {
        Some(pairwise_correlations(res)?)
    } else {
        None
    };
    let w = rademacher(&stream.derive(TAG_WEIGHTS), res.n_units());
    let avg_seed = stream.derive(TAG_AVERAGED).master_seed;
    let results = design
        .statistics
        .iter()
        .map(|&v| {
            let rho = rho.as_ref();
            match v {
                Variant::Cd => cd_given(res, rho.expect("computed above")),
                Variant::CdW => cd_weighted(res, &w),
                Variant::CdWPlus => cd_power_enhanced_given(res, &w, rho.expect("computed above")),
                Variant::CdWAvg => cd_weighted_averaged_given(res, design.draws, avg_seed, None, false),
                Variant::CdWPlusAvg => cd_weighted_averaged_given(res, design.draws, avg_seed, rho, false),
                Variant::CdBc => match design.estimator {
                    Estimator::TwoWayFE => cd_bias_corrected_2wfe_given(res, rho.expect("computed above")),
                    Estimator::CCEPooled => cd_bias_corrected_cce_given(&out, rho.expect("computed above")),
                    Estimator::FirstDiffTimeDummies => Err(Error::InvalidConfig(
                        "no analytic bias correction for first-difference residuals".into(),
                    )),
                },
                Variant::CdWSc => serial_robust_cd_weighted(res, &w),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((results, sim.truth.variance_redraws))
}

fn aggregate(
    design: &ExperimentDesign,
    outcomes: Vec<Result<(Vec<CdResult>, usize)>>,
    started: Instant,
) -> Result<CellSummary> {
    let total = outcomes.len();
    let ok: Vec<(Vec<CdResult>, usize)> = outcomes.into_iter().filter_map(|o| o.ok()).collect();
    let failures = total - ok.len();
    if failures as f64 > MAX_FAILURE_SHARE * total as f64 || ok.is_empty() {
        return Err(Error::CellFailed {
            failed: failures,
            total,
        });
    }
    let n = ok.len() as f64;
    let stats = design
        .statistics
        .iter()
        .enumerate()
        .map(|(k, &variant)| {
            let mean = compensated_sum(ok.iter().map(|(r, _)| r[k].statistic)) / n;
            let variance = if ok.len() > 1 {
                compensated_sum(ok.iter().map(|(r, _)| (r[k].statistic - mean).powi(2))) / (n - 1.0)
            } else {
                0.0
            };
            let hits = ok
                .iter()
                .filter(|(r, _)| r[k].p_value < design.significance_level)
                .count();
            let rate = hits as f64 / n;
            StatSummary {
                variant,
                mean,
                variance,
                rejection_rate: rate,
                mc_se: (variance / n).sqrt(),
                rejection_se: (rate * (1.0 - rate) / n).sqrt(),
            }
        })
        .collect();
    Ok(CellSummary {
        stats,
        replications: total,
        successes: ok.len(),
        failures,
        master_seed: design.master_seed,
        variance_redraws: ok.iter().map(|(_, d)| d).sum(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Run a cell on the global rayon pool.
pub fn run_cell(design: &ExperimentDesign) -> Result<CellSummary> {
    design.validate()?;
    let started = Instant::now();
    let outcomes = (0..design.replications)
        .into_par_iter()
        .map(|r| replicate_once(design, r))
        .collect();
    aggregate(design, outcomes, started)
}

/// Run a cell on a dedicated pool of `workers` threads.
pub fn run_cell_with_workers(design: &ExperimentDesign, workers: usize) -> Result<CellSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_cell(design))
}

/// Tables that can be replicated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    T1A,
    T1B,
    T2,
    T3,
    T4A,
    T4B,
    T5A,
    T5B,
}

impl TableId {
    pub const ALL: [TableId; 8] = [
        TableId::T1A,
        TableId::T1B,
        TableId::T2,
        TableId::T3,
        TableId::T4A,
        TableId::T4B,
        TableId::T5A,
        TableId::T5B,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TableId::T1A => "T1A",
            TableId::T1B => "T1B",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4A => "T4A",
            TableId::T4B => "T4B",
            TableId::T5A => "T5A",
            TableId::T5B => "T5B",
        }
    }

    /// Estimator whose residuals the table studies.
    pub fn estimator(self) -> Estimator {
        match self {
            TableId::T1A | TableId::T2 | TableId::T4A | TableId::T4B => Estimator::TwoWayFE,
            _ => Estimator::CCEPooled,
        }
    }

    pub fn statistics(self) -> Vec<Variant> {
        match self {
            TableId::T1A | TableId::T1B | TableId::T2 | TableId::T3 => vec![Variant::Cd],
            _ => vec![Variant::CdW, Variant::CdWPlus, Variant::CdBc],
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .iter()
            .copied()
            .find(|t| t.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown table id `{s}`")))
    }
}

/// One cell of a table grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub table: TableId,
    pub case_label: String,
    pub design: ExperimentDesign,
}

/// Base configuration of the moment and rate tables at `(N, T)`.
pub fn table_dgp(table: TableId, n: usize, t: usize) -> DgpConfig {
    let null_design = matches!(table, TableId::T1A | TableId::T1B | TableId::T4A | TableId::T5A);
    DgpConfig {
        n_units: n,
        n_periods: t,
        n_factors: if null_design { 2 } else { 3 },
        two_way_restricted: null_design && table.estimator() == Estimator::TwoWayFE,
        c_sigma: 1.0,
        ..DgpConfig::default()
    }
}

/// Apply one of the four rate-table design columns.
pub fn with_column(mut dgp: DgpConfig, column: &str) -> Result<DgpConfig> {
    let (l, v) = column
        .split_once('/')
        .ok_or_else(|| Error::InvalidConfig(format!("unknown design column `{column}`")))?;
    dgp.loading_case = match l {
        "sym" => LoadingCase::Symmetric,
        "skew" => LoadingCase::Skewed,
        _ => return Err(Error::InvalidConfig(format!("unknown loading case `{l}`"))),
    };
    dgp.variance_case = match v {
        "indep" => VarianceCase::Independent,
        "f(lambda)" => VarianceCase::LoadingFunction,
        _ => return Err(Error::InvalidConfig(format!("unknown variance case `{v}`"))),
    };
    Ok(dgp)
}

/// Options shared by every cell of a replicated table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub replications: usize,
    pub seed: u64,
    pub variance_divisor: VarianceDivisor,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            replications: DEFAULT_REPLICATIONS,
            seed: 42,
            variance_divisor: VarianceDivisor::Sqrt24,
        }
    }
}

/// The exact `(N, T, case)` grid of a table.
pub fn table_cells(table: TableId, opts: &TableOptions) -> Vec<TableCell> {
    let sizes = [25usize, 50, 100, 200];
    let mut cells = Vec::new();
    let mut push = |case_label: String, mut dgp: DgpConfig| {
        dgp.variance_divisor = opts.variance_divisor;
        let mut design = ExperimentDesign::new(dgp, table.estimator(), table.statistics());
        design.replications = opts.replications;
        design.master_seed = opts.seed;
        cells.push(TableCell {
            table,
            case_label,
            design,
        });
    };
    match table {
        TableId::T1A | TableId::T1B => {
            for n in [25usize, 200] {
                for t in sizes {
                    for c in C_SIGMAS {
                        let dgp = DgpConfig {
                            c_sigma: c,
                            ..table_dgp(table, n, t)
                        };
                        push(format!("c={c}"), dgp);
                    }
                }
            }
        }
        _ => {
            for n in sizes {
                for t in sizes {
                    for col in RATE_COLUMNS {
                        let dgp = with_column(table_dgp(table, n, t), col).expect("known column");
                        push(col.to_string(), dgp);
                    }
                }
            }
        }
    }
    cells
}

/// One CSV row: a statistic in a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub table_id: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub case_labels: String,
    pub stat: String,
    pub mean: f64,
    pub variance_x100: f64,
    pub rejection_rate: f64,
    pub mc_se: f64,
    pub failures: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub seed: u64,
}

/// Rows for one cell; a failed cell yields NaN rows carrying the failure count.
pub fn cell_rows(cell: &TableCell, result: &Result<CellSummary>) -> Vec<TableRow> {
    let d = &cell.design;
    cell.design
        .statistics
        .iter()
        .map(|&v| {
            let base = TableRow {
                table_id: cell.table.label().to_string(),
                n: d.dgp.n_units,
                t: d.dgp.n_periods,
                case_labels: cell.case_label.clone(),
                stat: v.label().to_string(),
                mean: f64::NAN,
                variance_x100: f64::NAN,
                rejection_rate: f64::NAN,
                mc_se: f64::NAN,
                failures: d.replications,
                r: d.replications,
                seed: d.master_seed,
            };
            match result {
                Ok(sum) => {
                    let s = sum.stat(v).expect("every requested statistic is summarized");
                    TableRow {
                        mean: s.mean,
                        variance_x100: 100.0 * s.variance,
                        rejection_rate: s.rejection_rate,
                        mc_se: s.mc_se,
                        failures: sum.failures,
                        ..base
                    }
                }
                Err(Error::CellFailed { failed, .. }) => TableRow {
                    failures: *failed,
                    ..base
                },
                Err(_) => base,
            }
        })
        .collect()
}

/// Run every cell of a table. Cells run one after another, each using the
/// current rayon pool for its replications.
pub fn replicate_table(table: TableId, opts: &TableOptions) -> Vec<TableRow> {
    table_cells(table, opts)
        .iter()
        .flat_map(|cell| cell_rows(cell, &run_cell(&cell.design)))
        .collect()
}

pub fn write_csv(path: &Path, rows: &[TableRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<TableRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    r.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Grading of one replicated value against a published one.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub row: TableRow,
    pub quantity: &'static str,
    pub observed: f64,
    pub reference: Reference,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.reference.contains(self.observed)
    }
}

/// Compare rows with the embedded references; rows without one are skipped.
pub fn compare_with_references(rows: &[TableRow]) -> Vec<Comparison> {
    let mut out = Vec::new();
    for row in rows {
        match row.table_id.as_str() {
            "T1A" | "T1B" => {
                let c: Option<f64> = row.case_labels.strip_prefix("c=").and_then(|c| c.parse().ok());
                if let Some((mean, var)) = c.and_then(|c| references::moment(&row.table_id, row.n, row.t, c)) {
                    out.push(Comparison {
                        row: row.clone(),
                        quantity: "mean",
                        observed: row.mean,
                        reference: Reference {
                            value: mean,
                            lower: mean - references::MEAN_TOL,
                            upper: mean + references::MEAN_TOL,
                        },
                    });
                    out.push(Comparison {
                        row: row.clone(),
                        quantity: "variance_x100",
                        observed: row.variance_x100,
                        reference: references::variance_reference(var),
                    });
                }
            }
            id => {
                if let Some(p) = references::rate(id, row.n, row.t, &row.case_labels, &row.stat) {
                    out.push(Comparison {
                        row: row.clone(),
                        quantity: "rejection_rate_pct",
                        observed: 100.0 * row.rejection_rate,
                        reference: references::rate_reference(p, row.r),
                    });
                }
            }
        }
    }
    out
}
