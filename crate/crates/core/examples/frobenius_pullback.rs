//! Pulls exp back along x -> x^p and checks R_M(r)^{p^h} = R_N(r^{p^h}).

use padic_diffmod::arith::{int, LogInterval, Prime};
use padic_diffmod::catalog::catalog_get;
use padic_diffmod::diffmod::frobenius_pullback;
use padic_diffmod::radius::{frobenius_radius_check, EstimateOptions};

fn main() -> padic_diffmod::Result<()> {
    for p in [2, 3] {
        let p = Prime::new(p)?;
        let n = catalog_get("exp", p, &[])?.module(Some(LogInterval::new(int(2) * p.log_pi(), int(1))?))?;
        println!("p = {p}: pullback matrix {}", frobenius_pullback(&n, 1)?.matrix()[(0, 0)]);
        for h in [1, 2] {
            let report = frobenius_radius_check(&n, h, 5, 256, 0.1, &EstimateOptions::default())?;
            println!("  h = {h}: max residual {:.4}, holds {}", report.max_residual, report.holds);
        }
    }
    Ok(())
}
