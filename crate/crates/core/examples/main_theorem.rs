//! The one-slope, non-Robba, bounded pipeline on three catalog modules.

use padic_diffmod::arith::{int, LogInterval, Prime};
use padic_diffmod::catalog::catalog_get;
use padic_diffmod::diagnostics::{theorem_check, TheoremConfig};

fn main() -> padic_diffmod::Result<()> {
    let p = Prime::new(2)?;
    let cases = [
        ("exp", vec![], LogInterval::new(int(0), int(2))?),
        ("euler", vec!["1/2".to_string()], LogInterval::new(int(-2), int(2))?),
        ("zero", vec![], LogInterval::new(int(-2), int(2))?),
    ];
    for (name, params, iv) in cases {
        let m = catalog_get(name, p, &params)?.module(Some(iv))?;
        let report = theorem_check(&m, &TheoremConfig::default())?;
        println!("{name}: one slope {}, non-Robba {}, verdict {:?}", report.one_slope, report.non_robba.holds, report.verdict);
        for r in report.reports.iter().take(3) {
            println!("  rho = {}: max b_n = {:.3}, {:?}", r.rho, r.max_b, r.classification);
        }
    }
    Ok(())
}
