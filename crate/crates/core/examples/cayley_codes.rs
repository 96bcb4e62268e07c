//! Cayley-graph codes over both semidirect product families, with zig-zag
//! and replacement generating sets.
//!
//! cargo run --release --example cayley_codes -- [seed]

use expander_codes::gldpc::TannerGraph;
use expander_codes::presets::{build_preset, Example, PresetParams};
use expander_codes::spectral::expansion;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let cases = [
        (Example::ShiftZigzag, Some(5), Some(5)),
        (Example::ShiftReplacement, Some(5), Some(13)),
        (Example::MobiusZigzag, Some(3), Some(5)),
        (Example::MobiusReplacement, Some(3), Some(13)),
    ];
    for (example, p, k) in cases {
        let preset = build_preset(example, &PresetParams { p, k, seed, ..Default::default() })?;
        let code = &preset.code;
        let rate = code.true_rate().map_or("-".to_string(), |r| r.to_string());
        println!(
            "{:<19} p={} k={:<2} seed {:<3} constraints {:<5} degree {:?} subcode {} bits {:<6} design rate {:<6} true rate {:<8} expansion {:.4}",
            example.name(),
            p.unwrap(),
            k.unwrap(),
            preset.info.seed_used,
            preset.info.num_constraints,
            preset.info.degrees,
            preset.info.subcodes.join("/"),
            code.n_bits,
            code.design_rate().to_string(),
            rate,
            match &code.graph {
                TannerGraph::Regular(g) => expansion(g, seed)?,
                TannerGraph::Bipartite(g) => expansion(g, seed)?,
            },
        );
    }
    Ok(())
}
