//! Zig-zag product of a random 4-regular graph on 120 vertices with a random
//! 3-regular graph on 4 vertices (K4), with its eigenvalue bound and girth.
//!
//! cargo run --release --example zigzag -- [seed]

use expander_codes::graph::{diameter, girth, random_regular};
use expander_codes::products::{verify_regular, zigzag, zigzag_bound, ProductKind};
use expander_codes::spectral::expansion;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let g1 = random_regular(120, 4, seed, true)?;
    let g2 = random_regular(4, 3, seed + 1, true)?;
    let z = zigzag(&g1, &g2)?;
    let (l1, l2) = (expansion(&g1, seed)?, expansion(&g2, seed)?);
    println!("G1: 120 vertices, degree 4, lambda {l1:.4}");
    println!("G2: 4 vertices, degree 3, lambda {l2:.4}");
    println!("product: {} vertices, degree {}", z.num_vertices(), z.degree());
    println!("lambda {:.4}, bound lambda1 + lambda2 + lambda2^2 = {:.4}", expansion(&z, seed)?, zigzag_bound(l1, l2)?);
    println!("girth {:?}, diameter {:?}", girth(&z), diameter(&z));
    let cert = verify_regular(ProductKind::Zigzag, &z, &g1, &g2, seed)?;
    println!("bound holds: {}, girth within bound range: {}", cert.bound_ok, cert.girth_bound_ok);
    Ok(())
}
