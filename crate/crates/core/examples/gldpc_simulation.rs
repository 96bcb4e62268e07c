//! Monte Carlo BER curve of the 1800-bit unbalanced bipartite zig-zag code
//! against uncoded BPSK.
//!
//! cargo run --release --example gldpc_simulation -- [max_frames] [max_errors] [threads] [snr,snr,...]

use std::time::Instant;

use expander_codes::presets::{build_preset, Example, PresetParams};
use expander_codes::sim::{simulate, uncoded_ber, SimConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let max_frames: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2000);
    let max_errors: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100);
    let threads: Option<usize> = args.next().map(|s| s.parse()).transpose()?.filter(|&t| t > 0);
    let snr_db: Vec<f64> = match args.next() {
        Some(list) => list.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None => vec![1.0, 2.0, 3.0, 4.0],
    };
    let preset = build_preset(Example::BipartiteZigzag, &PresetParams::default())?;
    let code = &preset.code;
    println!("{} bits, design rate {}, true rate {}", code.n_bits, code.design_rate(), code.true_rate()?);
    let config = SimConfig { snr_db, max_frames, max_errors, threads, ..Default::default() };
    let start = Instant::now();
    let points = simulate(code, &config)?;
    println!("snr_db  frames  frame_errors  ber        uncoded    avg_iter");
    for p in &points {
        println!(
            "{:6.2}  {:6}  {:12}  {:.3e}  {:.3e}  {:.2}",
            p.snr_db,
            p.frames,
            p.frame_errors,
            p.ber,
            uncoded_ber(p.snr_db),
            p.avg_iterations
        );
    }
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());
    Ok(())
}
