//! Analytic bias correction of CD for two-way fixed effects and CCE
//! residuals, next to the uncorrected statistic.

use cdpanel::cd_tests::{cd, cd_bias_corrected_2wfe, cd_bias_corrected_cce};
use cdpanel::dgp::{simulate, DgpConfig};
use cdpanel::estimators::Estimator;
use cdpanel::random::RngStream;

fn main() -> cdpanel::error::Result<()> {
    let fe_cfg = DgpConfig {
        n_units: 100,
        n_periods: 50,
        two_way_restricted: true,
        ..DgpConfig::default()
    };
    let sim = simulate(&fe_cfg, &RngStream::new(5, 0))?;
    let fe = Estimator::TwoWayFE.estimate(&sim.panel)?;
    let bc = cd_bias_corrected_2wfe(&fe.residuals)?;
    println!("2WFE: CD {:7.3}", cd(&fe.residuals)?.statistic);
    println!(
        "      CD_BC {:7.3} (bias {:.3}, variance {:.3})",
        bc.statistic,
        bc.aux.bias.unwrap(),
        bc.aux.omega.unwrap()
    );

    let cce_cfg = DgpConfig {
        n_units: 100,
        n_periods: 50,
        ..DgpConfig::default()
    };
    let sim = simulate(&cce_cfg, &RngStream::new(5, 1))?;
    let out = Estimator::CCEPooled.estimate(&sim.panel)?;
    let bc = cd_bias_corrected_cce(&out)?;
    println!("CCE:  CD {:7.3}", cd(&out.residuals)?.statistic);
    println!(
        "      CD_BC {:7.3} (bias {:.3}, variance {:.3})",
        bc.statistic,
        bc.aux.bias.unwrap(),
        bc.aux.omega.unwrap()
    );

    Ok(())
}
