//! Fitted convergence polygon of exp(x) on 1/8 < r < 4, with a breakpoint at log r = -1.

use padic_diffmod::arith::{format_rational, int, LogInterval, Prime};
use padic_diffmod::catalog::catalog_get;
use padic_diffmod::radius::{is_non_robba, polygon_estimate, EstimateOptions};

fn main() -> padic_diffmod::Result<()> {
    let entry = catalog_get("exp", Prime::new(2)?, &[])?;
    let m = entry.module(Some(LogInterval::new(int(-3), int(2))?))?;
    let poly = polygon_estimate(&m, 17, 256, 32, &EstimateOptions::default())?;
    for s in &poly.segments {
        println!(
            "[{}, {}]  log R = {} rho + {}  (raw slope {:.4}, intercept {:.4})",
            format_rational(&s.from),
            format_rational(&s.to),
            format_rational(&s.slope),
            format_rational(&s.intercept),
            s.raw_slope,
            s.raw_intercept
        );
    }
    println!("breakpoints: {:?}", poly.breakpoints().iter().map(format_rational).collect::<Vec<_>>());
    println!("non-Robba: {}", is_non_robba(&poly).holds);
    Ok(())
}
