//! The three residual pipelines on one simulated panel.

use cdpanel::dgp::{simulate, DgpConfig};
use cdpanel::estimators::Estimator;
use cdpanel::random::RngStream;
use ndarray::Axis;

fn main() -> cdpanel::error::Result<()> {
    let cfg = DgpConfig {
        n_units: 50,
        n_periods: 30,
        two_way_restricted: true,
        beta: 1.0,
        ..DgpConfig::default()
    };
    let sim = simulate(&cfg, &RngStream::new(9, 0))?;
    for est in [
        Estimator::TwoWayFE,
        Estimator::CCEPooled,
        Estimator::FirstDiffTimeDummies,
    ] {
        let out = est.estimate(&sim.panel)?;
        let e = out.residuals.values();
        let col = e.sum_axis(Axis(0)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let row = e.sum_axis(Axis(1)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "{:5} beta_hat {:.4}  effective T {:2}  max |column sum| {:.1e}  max |row sum| {:.1e}",
            est.label(),
            out.beta_hat[0],
            out.residuals.effective_t(),
            col,
            row
        );
    }
    Ok(())
}
