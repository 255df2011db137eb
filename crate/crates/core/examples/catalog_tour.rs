//! Every catalog entry with its expected polygon and a fitted one.

use padic_diffmod::arith::{format_rational, Prime};
use padic_diffmod::catalog::{catalog_get, catalog_list};
use padic_diffmod::radius::{polygon_estimate, EstimateOptions};

fn main() -> padic_diffmod::Result<()> {
    let p = Prime::new(2)?;
    for info in catalog_list() {
        let params: Vec<String> = if info.name == "companion" { vec!["0".into(), "-1/16".into()] } else { vec![] };
        let entry = catalog_get(info.name, p, &params)?;
        println!("{}: {}", info.name, info.description);
        if let Some(expected) = &entry.expected {
            for l in &expected.lines {
                println!("  expected line {} rho + {}", format_rational(&l.slope), format_rational(&l.intercept));
            }
        }
        let poly = polygon_estimate(&entry.module(None)?, 9, 128, 16, &EstimateOptions::default())?;
        for s in &poly.segments {
            println!("  fitted on [{}, {}]: {} rho + {}", s.from, s.to, format_rational(&s.slope), format_rational(&s.intercept));
        }
    }
    Ok(())
}
