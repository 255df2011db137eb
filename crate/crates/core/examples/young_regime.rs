//! Young's radius from the largest root norm against the recursion estimate.

use num_bigint::BigInt;
use padic_diffmod::arith::{int, LogInterval, Prime, Rational};
use padic_diffmod::diffmod::DiffModule;
use padic_diffmod::laurent::RationalFunction;
use padic_diffmod::radius::{radius_estimate, EstimateOptions};
use padic_diffmod::spectral::{young_radius, ScalarOperator};

fn main() -> padic_diffmod::Result<()> {
    let iv = LogInterval::from_ints(-1, 1)?;
    for p in [2u64, 3] {
        let prime = Prime::new(p)?;
        for k in 1..=3u32 {
            let alpha = Rational::new(1.into(), BigInt::from(p).pow(k));
            let op = ScalarOperator::new(prime, vec![RationalFunction::constant(-alpha.clone())], iv.clone())?;
            let y = young_radius(&op, &int(0))?;
            let m = DiffModule::scalar(prime, RationalFunction::constant(alpha), iv.clone())?;
            let est = radius_estimate(&m, &int(0), 256, &EstimateOptions::default())?;
            println!(
                "p = {p}, |alpha| = p^{k}: young {:?} (applicable {}), estimate {:.4}",
                y.log_r.map(|r| r.to_string()),
                y.applicable,
                est.log_r_f64()
            );
        }
    }
    Ok(())
}
