//! Gauss norms of a rational function and of the first few G_n.

use padic_diffmod::arith::{rat, LogInterval, Prime};
use padic_diffmod::diffmod::{norm_sequence, DiffModule};
use padic_diffmod::laurent::parse_rational_function;

fn main() -> padic_diffmod::Result<()> {
    let p = Prime::new(3)?;
    let f = parse_rational_function("(x^2 + 9)/(3*x - 1)", "x")?;
    for rho in [rat(-2, 1), rat(0, 1), rat(1, 2), rat(2, 1)] {
        println!("log_3 |f|_r at rho = {rho}: {}", f.gauss_norm(&rho, p)?);
    }

    let m = DiffModule::scalar(p, parse_rational_function("1/(3*x)", "x")?, LogInterval::from_ints(-1, 1)?)?;
    let seq = norm_sequence(&m, &rat(0, 1), 12)?;
    for (n, v) in seq.entries.iter().enumerate() {
        println!("n = {n:2}  log_3 ||G_n/n!|| = {v}");
    }
    Ok(())
}
