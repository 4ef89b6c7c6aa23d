//! Rademacher-weighted CD and its power-enhanced version on CCE residuals,
//! first under independence, then with a leftover factor.

use cdpanel::cd_tests::{cd, cd_power_enhanced, cd_weighted};
use cdpanel::dgp::{simulate, DgpConfig};
use cdpanel::estimators::Estimator;
use cdpanel::random::{rademacher, RngStream};

fn main() -> cdpanel::error::Result<()> {
    // two factors are spanned by [ybar, xbar]; three are not
    for r in [2, 3] {
        let cfg = DgpConfig {
            n_units: 100,
            n_periods: 100,
            n_factors: r,
            ..DgpConfig::default()
        };
        let sim = simulate(&cfg, &RngStream::new(7, 0))?;
        let out = Estimator::CCEPooled.estimate(&sim.panel)?;
        let w = rademacher(&RngStream::new(7, 1), cfg.n_units);
        let plain = cd(&out.residuals)?;
        let weighted = cd_weighted(&out.residuals, &w)?;
        let enhanced = cd_power_enhanced(&out.residuals, &w)?;
        println!("r = {r}");
        println!("  CD    {:8.3}  p = {:.4}", plain.statistic, plain.p_value);
        println!("  CD_W  {:8.3}  p = {:.4}", weighted.statistic, weighted.p_value);
        println!(
            "  CD_W+ {:8.3}  p = {:.4}  ({} of {} pairs above {:.3})",
            enhanced.statistic,
            enhanced.p_value,
            enhanced.aux.exceedances.unwrap_or(0),
            cfg.n_units * (cfg.n_units - 1) / 2,
            enhanced.aux.threshold.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
