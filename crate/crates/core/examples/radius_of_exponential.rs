//! Generic radius of d/dx - 1 at p = 2 by both estimators.

use padic_diffmod::arith::{int, Prime};
use padic_diffmod::catalog::catalog_get;
use padic_diffmod::radius::{radius_estimate, EstimateOptions, Method};

fn main() -> padic_diffmod::Result<()> {
    let m = catalog_get("exp", Prime::new(2)?, &[])?.module(None)?;
    for depth in [32, 128, 512] {
        let exact = radius_estimate(&m, &int(0), depth, &EstimateOptions::default())?;
        let slope = radius_estimate(&m, &int(0), depth, &EstimateOptions { method: Method::TailSlope, ..EstimateOptions::float() })?;
        println!(
            "N = {depth:3}: tail-min {:.6}  tail-slope {:.6}  (true value -1)",
            exact.log_r_f64(),
            slope.log_r_f64()
        );
    }
    Ok(())
}
