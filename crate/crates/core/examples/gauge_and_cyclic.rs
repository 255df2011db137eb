//! A gauge transform, its exact residual, and a cyclic-vector reduction.

use padic_diffmod::arith::{LogInterval, Prime};
use padic_diffmod::diffmod::{gauge_residual, gauge_transform, DiffModule};
use padic_diffmod::laurent::parse_rational_function;
use padic_diffmod::matrix::Matrix;
use padic_diffmod::radius::{radius_estimate, EstimateOptions};
use padic_diffmod::spectral::{cyclic_vector, CyclicOptions};

fn main() -> padic_diffmod::Result<()> {
    let p = Prime::new(2)?;
    let f = |s: &str| parse_rational_function(s, "x");
    let g = Matrix::from_rows(vec![vec![f("1")?, f("0")?], vec![f("0")?, f("1/(2*x)")?]])?;
    let m = DiffModule::new(p, g, LogInterval::from_ints(-1, 1)?)?;
    let h = Matrix::from_rows(vec![vec![f("1")?, f("x^2 - 3")?], vec![f("0")?, f("1")?]])?;

    let gauged = gauge_transform(&m, &h)?.module;
    println!("H[G] = {:?}", gauged.matrix().to_strings("x"));
    println!("residual zero: {}", gauge_residual(m.matrix(), &h, gauged.matrix()).is_zero());

    let opts = EstimateOptions::default();
    let zero = padic_diffmod::arith::int(0);
    println!(
        "log R at rho = 0: {:.4} before, {:.4} after",
        radius_estimate(&m, &zero, 256, &opts)?.log_r_f64(),
        radius_estimate(&gauged, &zero, 256, &opts)?.log_r_f64()
    );

    let red = cyclic_vector(&gauged, &CyclicOptions::default())?;
    println!("cyclic vector {:?}", red.vector.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    println!("operator q = {:?}", red.operator.q.iter().map(|q| q.to_string()).collect::<Vec<_>>());
    for j in &red.valid_subintervals {
        println!("valid on {j}");
    }
    Ok(())
}
