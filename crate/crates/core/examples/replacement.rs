//! Replacement product of a random 6-regular graph with a random 3-regular
//! graph on 6 vertices: bound variants, rigorous lower bound and diameter.
//!
//! cargo run --release --example replacement -- [seed]

use expander_codes::graph::random_regular;
use expander_codes::products::{
    replacement, replacement_bound, replacement_bound_walk_split, replacement_lower_bound, verify_regular, FVariant,
    ProductKind,
};
use expander_codes::spectral::{expansion, lambda2, Method};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let g1 = random_regular(40, 6, seed, true)?;
    let g2 = random_regular(6, 3, seed + 1, true)?;
    let r = replacement(&g1, &g2)?;
    let (l1, l2) = (expansion(&g1, seed)?, expansion(&g2, seed)?);
    let measured = expansion(&r, seed)?;
    let d2 = g2.degree();
    println!("G1: 40 vertices, degree 6, lambda {l1:.4}; G2: 6 vertices, degree {d2}, lambda {l2:.4}");
    println!("product: {} vertices, degree {}, lambda {measured:.4}", r.num_vertices(), r.degree());
    println!("bound (sqrt f)       {:.4}", replacement_bound(l1, l2, d2, FVariant::Sqrt)?);
    println!("bound (sum f)        {:.4}", replacement_bound(l1, l2, d2, FVariant::Sum)?);
    println!("walk-split bound     {:.4}", replacement_bound_walk_split(l1, l2, d2, FVariant::Sqrt)?);
    let signed = lambda2(&g1, Method::Dense, seed)?.lambda2;
    println!("lower bound (d2 + lambda2(G1)) / (d2 + 1) = {:.4}", replacement_lower_bound(signed, d2));
    let cert = verify_regular(ProductKind::Replacement, &r, &g1, &g2, seed)?;
    println!(
        "diameter {:?} in [{:?}, {:?}], girth {:?}",
        cert.diameter, cert.diameter_lower, cert.diameter_upper, cert.girth
    );
    Ok(())
}
