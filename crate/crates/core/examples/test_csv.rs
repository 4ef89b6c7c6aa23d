//! Round trip through the long CSV format and the test report used by the
//! `test` subcommand.

use cdpanel::cli::{parse_long_csv_str, render_report, test_report, write_long_csv, BalancePolicy};
use cdpanel::dgp::{simulate, DgpConfig};
use cdpanel::estimators::Estimator;
use cdpanel::panel::Variant;
use cdpanel::random::RngStream;

fn main() -> cdpanel::error::Result<()> {
    let cfg = DgpConfig {
        n_units: 82,
        n_periods: 25,
        ..DgpConfig::default()
    };
    let sim = simulate(&cfg, &RngStream::new(2024, 0))?;
    let units: Vec<String> = (1..=82).map(|i| format!("region{i:02}")).collect();
    let periods: Vec<i64> = (1995..2020).collect();
    let text = write_long_csv(&sim.panel, &units, &periods)?;
    println!("{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));
    println!("...\n");

    let data = parse_long_csv_str(&text, BalancePolicy::Require)?;
    let stats = [Variant::Cd, Variant::CdWAvg, Variant::CdWPlusAvg];
    for (est, robust) in [(Estimator::CCEPooled, false), (Estimator::FirstDiffTimeDummies, true)] {
        let report = test_report(&data, est, &stats, 30, 42, robust)?;
        println!("{}", render_report(&report));
    }
    Ok(())
}
