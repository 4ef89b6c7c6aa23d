//! Command-line front end.
//!
//! `run` takes the argument list and two writers so the whole interface can
//! be exercised in-process. Exit codes: 0 success, 1 runtime or statistical
//! failure, 2 usage or parse error.

use std::collections::{BTreeSet, HashMap};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndarray::{Array2, Array3};
use serde::Serialize;

use crate::cd_tests::{
    cd, cd_bias_corrected_2wfe, cd_bias_corrected_cce, cd_power_enhanced, cd_weighted, cd_weighted_averaged,
    cd_weighted_averaged_serial_robust, screening_term, serial_robust_cd_weighted, weight_stream,
};
use crate::dgp::DgpConfig;
use crate::error::{Error, Result};
use crate::estimators::Estimator;
use crate::mc_harness::{
    cell_rows, compare_with_references, run_cell, table_cells, write_csv, ExperimentDesign, TableId, TableOptions,
    TableRow, DEFAULT_DRAWS, DEFAULT_REPLICATIONS,
};
use crate::panel::{validate_panel, CdResult, PanelDataset, Variant};
use crate::random::rademacher;

/// Environment variable that overrides the default master seed.
pub const SEED_ENV: &str = "MASTER_SEED";
const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "cdpanel",
    version,
    about = "CD tests for cross-section dependence in panel residuals"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for Monte Carlo work (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replicate a published Monte Carlo table and grade it.
    Replicate(ReplicateArgs),
    /// Apply the test battery to a long-format panel CSV.
    Test(TestArgs),
    /// Run one custom Monte Carlo design cell.
    Cell(CellArgs),
}

#[derive(Debug, Args)]
struct ReplicateArgs {
    /// Table id: T1A, T1B, T2, T3, T4A, T4B, T5A or T5B.
    table: String,
    #[arg(long, default_value_t = DEFAULT_REPLICATIONS)]
    reps: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV (default: <table>.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimatorArg {
    #[value(name = "2wfe")]
    TwoWay,
    Cce,
    Fd,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::TwoWay => Estimator::TwoWayFE,
            EstimatorArg::Cce => Estimator::CCEPooled,
            EstimatorArg::Fd => Estimator::FirstDiffTimeDummies,
        }
    }
}

/// How to treat units that miss some periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum BalancePolicy {
    /// Reject unbalanced input.
    #[default]
    Require,
    /// Drop every unit that misses a period.
    Drop,
}

#[derive(Debug, Args)]
struct TestArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "cce")]
    estimator: EstimatorArg,
    /// Comma-separated statistics, e.g. `cd,cd_w_avg,cd_w+_avg`.
    #[arg(long, default_value = "cd,cd_w_avg,cd_w+_avg")]
    stats: String,
    /// Rademacher draws for averaged statistics.
    #[arg(long = "G", default_value_t = DEFAULT_DRAWS)]
    g: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Use the serial-correlation-robust variance for weighted statistics.
    #[arg(long)]
    serial_robust: bool,
    #[arg(long, value_enum, default_value = "require")]
    balance: BalancePolicy,
}

#[derive(Debug, Args)]
struct CellArgs {
    /// `key = value` file with DGP settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides applied after the file.
    #[arg(long = "set")]
    overrides: Vec<String>,
    #[arg(long, value_enum, default_value = "cce")]
    estimator: EstimatorArg,
    #[arg(long, default_value = "cd,cd_w,cd_w+")]
    stats: String,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    draws: usize,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
}

/// Failure of a command, split by exit code.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::UnbalancedPanel(_) | Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// Run the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match with_threads(cli.threads, || dispatch(&cli)) {
        Ok(Ok(text)) => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(format!("cannot write output: {e}"))),
        Ok(Err(f)) => Err(f),
        Err(e) => Err(Failure::Usage(e)),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> std::result::Result<R, String> {
    match threads {
        None => Ok(f()),
        Some(0) => Err("--threads must be at least 1".into()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| format!("cannot build thread pool: {e}"))?;
            Ok(pool.install(f))
        }
    }
}

fn dispatch(cli: &Cli) -> std::result::Result<String, Failure> {
    match &cli.command {
        Command::Replicate(a) => cmd_replicate(a, cli.json),
        Command::Test(a) => cmd_test(a, cli.json),
        Command::Cell(a) => cmd_cell(a, cli.json),
    }
}

fn resolve_seed(flag: Option<u64>) -> std::result::Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn parse_stats(list: &str) -> std::result::Result<Vec<Variant>, Failure> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = Variant::parse(item).ok_or_else(|| Failure::Usage(format!("unknown statistic `{item}`")))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("no statistics requested".into()));
    }
    Ok(out)
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NA".into()
    } else {
        format!("{v:.3}")
    }
}

fn cmd_replicate(a: &ReplicateArgs, json: bool) -> std::result::Result<String, Failure> {
    let table: TableId = a.table.parse().map_err(|_| {
        Failure::Usage(format!(
            "unknown table id `{}`; expected one of T1A T1B T2 T3 T4A T4B T5A T5B",
            a.table
        ))
    })?;
    if a.reps == 0 {
        return Err(Failure::Usage("--reps must be at least 1".into()));
    }
    let opts = TableOptions {
        replications: a.reps,
        seed: resolve_seed(a.seed)?,
        ..TableOptions::default()
    };
    let mut rows: Vec<TableRow> = Vec::new();
    let mut failed_cells = 0;
    for cell in table_cells(table, &opts) {
        let result = run_cell(&cell.design);
        if result.is_err() {
            failed_cells += 1;
        }
        rows.extend(cell_rows(&cell, &result));
    }
    let path = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", table.label())));
    write_csv(&path, &rows)?;
    let comparisons = compare_with_references(&rows);
    let passed = comparisons.iter().filter(|c| c.passed()).count();

    let text = if json {
        #[derive(Serialize)]
        struct Graded<'a> {
            row: &'a TableRow,
            quantity: &'a str,
            observed: f64,
            reference: f64,
            lower: f64,
            upper: f64,
            pass: bool,
        }
        let graded: Vec<Graded> = comparisons
            .iter()
            .map(|c| Graded {
                row: &c.row,
                quantity: c.quantity,
                observed: c.observed,
                reference: c.reference.value,
                lower: c.reference.lower,
                upper: c.reference.upper,
                pass: c.passed(),
            })
            .collect();
        serde_json::json!({ "table": table.label(), "csv": path, "rows": rows, "comparisons": graded }).to_string()
            + "\n"
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} R = {} seed = {} -> {}",
            table,
            opts.replications,
            opts.seed,
            path.display()
        );
        for c in &comparisons {
            let _ = writeln!(
                s,
                "{:4} N={:<3} T={:<3} {:14} {:6} {:18} {:>9} ref {:>8.3} [{:.3}, {:.3}]",
                if c.passed() { "PASS" } else { "FAIL" },
                c.row.n,
                c.row.t,
                c.row.case_labels,
                c.row.stat,
                c.quantity,
                fmt_num(c.observed),
                c.reference.value,
                c.reference.lower,
                c.reference.upper,
            );
        }
        if comparisons.is_empty() {
            for r in &rows {
                let _ = writeln!(
                    s,
                    "N={:<3} T={:<3} {:14} {:6} mean {:>8} variance {:>8} rejection {:>6}",
                    r.n,
                    r.t,
                    r.case_labels,
                    r.stat,
                    fmt_num(r.mean),
                    fmt_num(r.variance_x100 / 100.0),
                    fmt_num(r.rejection_rate)
                );
            }
        }
        if opts.replications == 1 {
            let _ = writeln!(s, "note: R = 1, all variances are degenerate (0)");
        }
        let _ = writeln!(s, "{passed}/{} comparisons within tolerance", comparisons.len());
        s
    };
    if failed_cells > 0 {
        return Err(Failure::Runtime(format!(
            "{failed_cells} cells failed; see {}",
            path.display()
        )));
    }
    Ok(text)
}

/// A long-format panel after pivoting.
#[derive(Debug, Clone)]
pub struct LongPanel {
    pub panel: PanelDataset,
    pub units: Vec<String>,
    pub periods: Vec<i64>,
    /// Units removed by [`BalancePolicy::Drop`], in input order.
    pub dropped: Vec<String>,
}

/// Read a `unit,period,y,x1..xm` CSV file.
pub fn parse_long_csv(path: &Path, policy: BalancePolicy) -> Result<LongPanel> {
    let text = std::fs::read_to_string(path)?;
    parse_long_csv_str(&text, policy)
}

/// Parse long-format CSV text; see [`parse_long_csv`].
pub fn parse_long_csv_str(text: &str, policy: BalancePolicy) -> Result<LongPanel> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.len() < 3 || names[0] != "unit" || names[1] != "period" || names[2] != "y" {
        return Err(Error::Parse {
            line: 1,
            message: format!("header must start with unit,period,y; got {}", names.join(",")),
        });
    }
    if let Some(bad) = names[3..].iter().find(|n| !n.starts_with('x')) {
        return Err(Error::Parse {
            line: 1,
            message: format!("regressor columns must be named x1..xm, got `{bad}`"),
        });
    }
    let m = names.len() - 3;

    let mut unit_order: Vec<String> = Vec::new();
    let mut unit_index: HashMap<String, usize> = HashMap::new();
    let mut obs: HashMap<(usize, i64), Vec<f64>> = HashMap::new();
    let mut periods = BTreeSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let perr = |message: String| Error::Parse { line, message };
        let unit = record[0].to_string();
        if unit.is_empty() {
            return Err(perr("empty unit identifier".into()));
        }
        let period: i64 = record[1]
            .parse()
            .map_err(|_| perr(format!("period `{}` is not an integer", &record[1])))?;
        let values = (2..3 + m)
            .map(|k| {
                record[k].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    perr(format!(
                        "`{}` in column {} is not a finite number",
                        &record[k], names[k]
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let next = unit_order.len();
        let idx = *unit_index.entry(unit.clone()).or_insert_with(|| {
            unit_order.push(unit.clone());
            next
        });
        if obs.insert((idx, period), values).is_some() {
            return Err(perr(format!(
                "duplicate observation for unit `{unit}`, period {period}"
            )));
        }
        periods.insert(period);
    }
    let periods: Vec<i64> = periods.into_iter().collect();
    let complete = |i: usize| periods.iter().all(|&p| obs.contains_key(&(i, p)));
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, name) in unit_order.iter().enumerate() {
        if complete(i) {
            kept.push(i);
        } else {
            match policy {
                BalancePolicy::Require => {
                    let missing = periods.iter().filter(|&&p| !obs.contains_key(&(i, p))).count();
                    return Err(Error::UnbalancedPanel(format!(
                        "unit `{name}` misses {missing} of {} periods (use --balance drop)",
                        periods.len()
                    )));
                }
                BalancePolicy::Drop => dropped.push(name.clone()),
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyAfterBalancing);
    }
    let (n, t) = (kept.len(), periods.len());
    let mut y = Array2::zeros((n, t));
    let mut x = Array3::zeros((n, t, m));
    for (row, &i) in kept.iter().enumerate() {
        for (s, &p) in periods.iter().enumerate() {
            let v = &obs[&(i, p)];
            y[[row, s]] = v[0];
            for k in 0..m {
                x[[row, s, k]] = v[k + 1];
            }
        }
    }
    Ok(LongPanel {
        panel: validate_panel(y, x)?,
        units: kept.iter().map(|&i| unit_order[i].clone()).collect(),
        periods,
        dropped,
    })
}

/// Render a panel as long-format CSV text readable by [`parse_long_csv_str`].
pub fn write_long_csv(panel: &PanelDataset, units: &[String], periods: &[i64]) -> Result<String> {
    if units.len() != panel.n_units() || periods.len() != panel.n_periods() {
        return Err(Error::DimensionMismatch(format!(
            "{} unit names and {} periods for a {}x{} panel",
            units.len(),
            periods.len(),
            panel.n_units(),
            panel.n_periods()
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["unit".to_string(), "period".into(), "y".into()];
    header.extend((1..=panel.n_regressors()).map(|k| format!("x{k}")));
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for (i, unit) in units.iter().enumerate() {
        for (s, p) in periods.iter().enumerate() {
            let mut rec = vec![unit.clone(), p.to_string(), format!("{:?}", panel.y()[[i, s]])];
            rec.extend((0..panel.n_regressors()).map(|k| format!("{:?}", panel.x()[[i, s, k]])));
            w.write_record(&rec).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// One line of the `test` report.
#[derive(Debug, Clone, Serialize)]
pub struct TestLine {
    pub variant: Variant,
    pub serial_robust: bool,
    /// `None` when the statistic is unavailable for this input.
    pub result: Option<CdResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Full `test` report.
#[derive(Debug, Clone, Serialize)]
pub struct TestReport {
    pub estimator: String,
    pub n_units: usize,
    pub n_periods: usize,
    pub effective_t: usize,
    pub dropped_units: Vec<String>,
    pub beta_hat: Vec<f64>,
    pub threshold: f64,
    pub exceedances: usize,
    pub draws: usize,
    pub seed: u64,
    pub lines: Vec<TestLine>,
}

/// Apply the requested statistics to a parsed panel.
pub fn test_report(
    data: &LongPanel,
    estimator: Estimator,
    stats: &[Variant],
    draws: usize,
    seed: u64,
    serial_robust: bool,
) -> Result<TestReport> {
    let out = estimator.estimate(&data.panel)?;
    let res = &out.residuals;
    let (_, threshold, exceedances) = screening_term(res)?;
    let w = rademacher(&weight_stream(seed, 0), res.n_units());
    let lines = stats
        .iter()
        .map(|&v| {
            let robust = serial_robust && matches!(v, Variant::CdW | Variant::CdWAvg | Variant::CdWPlusAvg);
            let r = match v {
                Variant::Cd => cd(res),
                Variant::CdW if serial_robust => serial_robust_cd_weighted(res, &w),
                Variant::CdW => cd_weighted(res, &w),
                Variant::CdWPlus => cd_power_enhanced(res, &w),
                Variant::CdWAvg | Variant::CdWPlusAvg => {
                    let enhanced = v == Variant::CdWPlusAvg;
                    if serial_robust {
                        cd_weighted_averaged_serial_robust(res, draws, seed, enhanced)
                    } else {
                        cd_weighted_averaged(res, draws, seed, enhanced)
                    }
                }
                Variant::CdBc => match estimator {
                    Estimator::TwoWayFE => cd_bias_corrected_2wfe(res),
                    Estimator::CCEPooled => cd_bias_corrected_cce(&out),
                    Estimator::FirstDiffTimeDummies => Err(Error::InvalidResiduals(
                        "no analytic bias correction for first-difference residuals".into(),
                    )),
                },
                Variant::CdWSc => serial_robust_cd_weighted(res, &w),
            };
            match r {
                Ok(result) => TestLine {
                    variant: v,
                    serial_robust: robust || v == Variant::CdWSc,
                    result: Some(result),
                    note: None,
                },
                Err(e) => TestLine {
                    variant: v,
                    serial_robust: robust,
                    result: None,
                    note: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(TestReport {
        estimator: estimator.label().to_string(),
        n_units: res.n_units(),
        n_periods: data.panel.n_periods(),
        effective_t: res.effective_t(),
        dropped_units: data.dropped.clone(),
        beta_hat: out.beta_hat.clone(),
        threshold,
        exceedances,
        draws,
        seed,
        lines,
    })
}

/// Human-readable rendering of a [`TestReport`].
pub fn render_report(r: &TestReport) -> String {
    let mut s = String::new();
    let _ = write!(s, "panel: N = {}, T = {}", r.n_units, r.n_periods);
    if !r.dropped_units.is_empty() {
        let _ = write!(
            s,
            " (dropped {}: {})",
            r.dropped_units.len(),
            r.dropped_units.join(", ")
        );
    }
    let _ = writeln!(s);
    let beta: Vec<String> = r.beta_hat.iter().map(|b| format!("{b:.4}")).collect();
    let _ = writeln!(s, "estimator: {}, beta_hat = [{}]", r.estimator, beta.join(", "));
    let _ = writeln!(
        s,
        "threshold 2 sqrt(ln N / T) = {:.2} ({:.6}), |rho| above threshold: {}",
        r.threshold, r.threshold, r.exceedances
    );
    let _ = writeln!(s, "G = {}, seed = {}", r.draws, r.seed);
    let _ = writeln!(
        s,
        "{:10} {:>6} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "statistic", "serial", "value", "p-value", "q0.1", "q0.5", "q0.9"
    );
    for line in &r.lines {
        let serial = if line.serial_robust { "yes" } else { "no" };
        match &line.result {
            Some(res) => {
                let q = res.aux.quantiles.map_or([f64::NAN; 3], |q| q);
                let qs: Vec<String> = q
                    .iter()
                    .map(|v| if v.is_nan() { String::new() } else { format!("{v:.2}") })
                    .collect();
                let _ = writeln!(
                    s,
                    "{:10} {:>6} {:>9.2} {:>9.4} {:>9} {:>9} {:>9}",
                    line.variant.label(),
                    serial,
                    res.statistic,
                    res.p_value,
                    qs[0],
                    qs[1],
                    qs[2]
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "{:10} {:>6} {:>9} ({})",
                    line.variant.label(),
                    serial,
                    "NA",
                    line.note.as_deref().unwrap_or("unavailable")
                );
            }
        }
    }
    s
}

fn cmd_test(a: &TestArgs, json: bool) -> std::result::Result<String, Failure> {
    let stats = parse_stats(&a.stats)?;
    if a.g == 0 {
        return Err(Failure::Usage("--G must be at least 1".into()));
    }
    let seed = resolve_seed(a.seed)?;
    let data = parse_long_csv(&a.data, a.balance)?;
    let report = test_report(&data, a.estimator.into(), &stats, a.g, seed, a.serial_robust)?;
    if json {
        Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
    } else {
        Ok(render_report(&report))
    }
}

fn cmd_cell(a: &CellArgs, json: bool) -> std::result::Result<String, Failure> {
    let mut dgp = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
            DgpConfig::from_key_values(&text)?
        }
        None => DgpConfig::default(),
    };
    for kv in &a.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects key=value, got `{kv}`")))?;
        dgp.set(k.trim(), v.trim()).map_err(Failure::Usage)?;
    }
    let mut design = ExperimentDesign::new(dgp, a.estimator.into(), parse_stats(&a.stats)?);
    design.replications = a.reps;
    design.master_seed = resolve_seed(a.seed)?;
    design.draws = a.draws;
    design.significance_level = a.level;
    design.validate()?;
    let summary = run_cell(&design)?;
    if json {
        return Ok(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n");
    }
    let mut s = String::new();
    let _ = writeln!(s, "design: {} via {}", design.dgp, design.estimator.label());
    let _ = writeln!(
        s,
        "R = {} ({} failed), seed = {}, level = {}",
        summary.replications, summary.failures, summary.master_seed, design.significance_level
    );
    let _ = writeln!(
        s,
        "{:10} {:>9} {:>9} {:>9} {:>11}",
        "statistic", "mean", "variance", "mc_se", "rejection %"
    );
    for st in &summary.stats {
        let _ = writeln!(
            s,
            "{:10} {:>9.4} {:>9.4} {:>9.4} {:>11.2}",
            st.variant.label(),
            st.mean,
            st.variance,
            st.mc_se,
            100.0 * st.rejection_rate
        );
    }
    Ok(s)
}
