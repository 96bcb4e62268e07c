//! Second eigenvalues of standard graphs by the dense solver and by Lanczos
//! next to the Ramanujan bound.
//!
//! cargo run --release --example spectral_report

use expander_codes::graph::{complete, complete_bipartite, cycle, random_biregular, random_regular};
use expander_codes::spectral::{lambda2, ramanujan_bound, Method};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c12 = cycle(12, 0)?;
    println!("C12   dense: {}", lambda2(&c12, Method::Dense, 0)?.summary());
    println!("      exact: lambda2 = cos(2pi/12) = {:.9}", (2.0 * std::f64::consts::PI / 12.0).cos());
    println!("K8    dense: {}", lambda2(&complete(8, 0)?, Method::Dense, 0)?.summary());
    println!("K4,6  dense: {}", lambda2(&complete_bipartite(4, 6, 0)?, Method::Dense, 0)?.summary());
    let g = random_regular(500, 6, 7, true)?;
    println!("6-regular, 500 vertices");
    println!("      dense: {}", lambda2(&g, Method::Dense, 7)?.summary());
    println!("    lanczos: {}", lambda2(&g, Method::Lanczos, 7)?.summary());
    println!("  Ramanujan: {:.9}", ramanujan_bound(6));
    let b = random_biregular(300, 100, 3, 9, 7, true)?;
    println!("(3,9)-biregular, (300, 100) vertices");
    println!("      dense: {}", lambda2(&b, Method::Dense, 7)?.summary());
    println!("    lanczos: {}", lambda2(&b, Method::Lanczos, 7)?.summary());
    Ok(())
}
