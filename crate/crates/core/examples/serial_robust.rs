//! Weighted CD with the serial-correlation-robust variance on residuals
//! that follow a unit-specific AR(1).

use cdpanel::cd_tests::{cd_weighted, serial_robust_cd_weighted};
use cdpanel::panel::{ResidualMatrix, ResidualSource};
use cdpanel::random::{normal, rademacher, RngStream};
use ndarray::Array2;

fn ar1_panel(n: usize, t: usize, phi: f64, seed: u64) -> Array2<f64> {
    let shocks = normal(&RngStream::new(seed, 0), n * t);
    let mut e = Array2::zeros((n, t));
    for i in 0..n {
        let mut prev = 0.0;
        for s in 0..t {
            prev = phi * prev + shocks[i * t + s];
            e[[i, s]] = prev;
        }
    }
    e
}

fn main() -> cdpanel::error::Result<()> {
    let (n, t, reps) = (50, 50, 400);
    for phi in [0.0, 0.5, 0.8] {
        let mut reject_plain = 0;
        let mut reject_robust = 0;
        for r in 0..reps {
            let e = ResidualMatrix::new(ar1_panel(n, t, phi, r), ResidualSource::Raw)?;
            let w = rademacher(&RngStream::new(r, 1), n);
            reject_plain += (cd_weighted(&e, &w)?.p_value < 0.05) as usize;
            reject_robust += (serial_robust_cd_weighted(&e, &w)?.p_value < 0.05) as usize;
        }
        println!(
            "phi = {phi}: 5% rejections CD_W {:5.1}%, serial-robust {:5.1}%",
            100.0 * reject_plain as f64 / reps as f64,
            100.0 * reject_robust as f64 / reps as f64
        );
    }
    Ok(())
}
