//! Bipartite zig-zag product of a (6,10)-biregular graph on (20,12) vertices
//! with a (3,5)-biregular graph on (10,6) vertices, and the GLDPC code it
//! carries with [9,6] and [25,21] subcodes.
//!
//! cargo run --release --example bipartite_zigzag -- [seed]

use expander_codes::gldpc::{assemble, subcode_library, Assignment, TannerGraph};
use expander_codes::graph::{girth, random_biregular};
use expander_codes::products::{zigzag_bipartite, zigzag_bound};
use expander_codes::spectral::expansion;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let g1 = random_biregular(20, 12, 6, 10, seed, true)?;
    let g2 = random_biregular(10, 6, 3, 5, seed + 1, true)?;
    let z = zigzag_bipartite(&g1, &g2)?;
    let (s1, s2) = (expansion(&g1, seed)?, expansion(&g2, seed)?);
    println!(
        "product: ({}, {}) vertices, degrees ({}, {}), girth {:?}",
        z.num_left(),
        z.num_right(),
        z.left_degree(),
        z.right_degree(),
        girth(&z)
    );
    println!("sigma2 {:.4}, bound {:.4}", expansion(&z, seed)?, zigzag_bound(s1, s2)?);
    let left = subcode_library("[9,6]")?;
    let right = subcode_library("[25,21]")?;
    let code = assemble(TannerGraph::Bipartite(z), &Assignment::Sides { left, right })?;
    println!("code: {} bits, design rate {}, true rate {}", code.n_bits, code.design_rate(), code.true_rate()?);
    Ok(())
}
