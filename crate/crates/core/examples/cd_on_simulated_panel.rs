//! The original CD test on two-way fixed effects residuals drifts to
//! `-sqrt((T - T/N)/2)` even though the errors are independent.

use cdpanel::cd_tests::cd;
use cdpanel::dgp::{simulate, DgpConfig};
use cdpanel::estimators::Estimator;
use cdpanel::random::RngStream;

fn main() -> cdpanel::error::Result<()> {
    for t in [25, 50, 100, 200] {
        let cfg = DgpConfig {
            n_units: 100,
            n_periods: t,
            two_way_restricted: true,
            c_sigma: 0.0,
            ..DgpConfig::default()
        };
        let sim = simulate(&cfg, &RngStream::new(1, 0))?;
        let out = Estimator::TwoWayFE.estimate(&sim.panel)?;
        let res = cd(&out.residuals)?;
        let limit = -((t as f64 - t as f64 / 100.0) / 2.0).sqrt();
        println!(
            "T = {t:3}: CD = {:7.3} (p = {:.4}), benchmark {limit:7.3}",
            res.statistic, res.p_value
        );
    }
    Ok(())
}
