//! Averaging the weighted statistic over G weight draws removes most of
//! the dependence of the result on one particular draw.

use cdpanel::cd_tests::{cd_weighted, cd_weighted_averaged, weight_stream};
use cdpanel::dgp::{simulate, DgpConfig};
use cdpanel::estimators::Estimator;
use cdpanel::random::{rademacher, RngStream};

fn main() -> cdpanel::error::Result<()> {
    let cfg = DgpConfig {
        n_units: 60,
        n_periods: 40,
        ..DgpConfig::default()
    };
    let sim = simulate(&cfg, &RngStream::new(3, 0))?;
    let res = Estimator::CCEPooled.estimate(&sim.panel)?.residuals;

    print!("single draws:");
    for g in 0..6 {
        let w = rademacher(&weight_stream(11, g), cfg.n_units);
        print!(" {:6.2}", cd_weighted(&res, &w)?.statistic);
    }
    println!();

    for g in [1, 10, 30, 100] {
        let avg = cd_weighted_averaged(&res, g, 11, false)?;
        let q = avg.aux.quantiles.unwrap();
        println!(
            "G = {g:3}: value {:6.3}  p = {:.3}  draw quantiles {:.2} / {:.2} / {:.2}",
            avg.statistic, avg.p_value, q[0], q[1], q[2]
        );
    }
    Ok(())
}
