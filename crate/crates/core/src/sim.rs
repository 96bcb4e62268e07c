//! AWGN Monte Carlo harness for GLDPC codes with BPSK signalling.
//!
//! The all-zero codeword is sent as `+1` symbols. Noise for frame `f` at SNR
//! index `s` comes from its own ChaCha8 stream keyed on `(seed, s, f)`, and
//! frames are decoded in fixed-size parallel batches whose outcomes are
//! accumulated in frame order, so results do not depend on the thread count.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decode::{DecodeError, Decoder, DEFAULT_MAX_ITERATIONS};
use crate::gldpc::GldpcCode;

pub const DEFAULT_BATCH: usize = 64;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("writing results: {0}")]
    Io(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub snr_db: Vec<f64>,
    pub max_frames: u64,
    /// Stop a point once this many frame errors are seen.
    pub max_errors: u64,
    pub max_iterations: usize,
    pub seed: u64,
    pub early_stop: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub batch: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            snr_db: vec![1.0, 2.0, 3.0, 4.0],
            max_frames: 10_000,
            max_errors: 100,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            seed: 0,
            early_stop: true,
            threads: None,
            batch: DEFAULT_BATCH,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub avg_iterations: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    pub iterations: usize,
    pub converged: bool,
}

/// Rate used to scale Eb/N0: the GF(2) rank rate when it is computable,
/// otherwise the design rate.
pub fn effective_rate(code: &GldpcCode) -> f64 {
    let r = code.true_rate().unwrap_or_else(|_| code.design_rate());
    *r.numer() as f64 / *r.denom() as f64
}

/// Noise variance per real dimension for BPSK at the given Eb/N0 in dB.
pub fn noise_variance(rate: f64, ebn0_db: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Uncoded BPSK bit error rate at the given Eb/N0 in dB.
pub fn uncoded_ber(ebn0_db: f64) -> f64 {
    q_function((2.0 * 10f64.powf(ebn0_db / 10.0)).sqrt())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the noise stream for one frame.
pub fn frame_seed(seed: u64, snr_index: usize, frame: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ snr_index as u64) ^ frame)
}

/// Channel LLRs `2y/σ²` for the all-zero codeword.
pub fn channel_llrs(n: usize, sigma2: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let sigma = sigma2.sqrt();
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            2.0 * (1.0 + sigma * z) / sigma2
        })
        .collect()
}

pub fn run_frame(decoder: &Decoder, sigma2: f64, seed: u64, config: &SimConfig) -> Result<FrameOutcome, DecodeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let llr = channel_llrs(decoder.code().n_bits, sigma2, &mut rng);
    let r = decoder.decode(&llr, config.max_iterations, config.early_stop)?;
    let bit_errors = r.bits.iter().filter(|&&b| b != 0).count() as u64;
    Ok(FrameOutcome { bit_errors, iterations: r.iterations, converged: r.converged })
}

fn validate(config: &SimConfig) -> Result<(), SimError> {
    if config.snr_db.is_empty() {
        return Err(SimError::Config("no SNR points".into()));
    }
    if config.snr_db.iter().any(|s| !s.is_finite()) {
        return Err(SimError::Config("SNR values must be finite".into()));
    }
    if config.max_frames == 0 || config.batch == 0 || config.max_iterations == 0 {
        return Err(SimError::Config("max_frames, batch and max_iterations must be positive".into()));
    }
    if config.threads == Some(0) {
        return Err(SimError::Config("threads must be positive".into()));
    }
    Ok(())
}

/// Simulates every SNR point; each point stops at `max_frames` frames or
/// `max_errors` frame errors, whichever comes first.
pub fn simulate(code: &GldpcCode, config: &SimConfig) -> Result<Vec<BerPoint>, SimError> {
    validate(config)?;
    let decoder = Decoder::new(code)?;
    let run = || simulate_with(&decoder, config);
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| SimError::Pool(e.to_string()))?
            .install(run),
        None => run(),
    }
}

fn simulate_with(decoder: &Decoder, config: &SimConfig) -> Result<Vec<BerPoint>, SimError> {
    let rate = effective_rate(decoder.code());
    let n = decoder.code().n_bits as u64;
    let mut points = Vec::with_capacity(config.snr_db.len());
    for (si, &snr) in config.snr_db.iter().enumerate() {
        let sigma2 = noise_variance(rate, snr);
        let (mut frames, mut bit_errors, mut frame_errors, mut iterations) = (0u64, 0u64, 0u64, 0u64);
        'point: while frames < config.max_frames && frame_errors < config.max_errors {
            let start = frames;
            let count = (config.batch as u64).min(config.max_frames - frames);
            let outcomes = (start..start + count)
                .into_par_iter()
                .map(|f| run_frame(decoder, sigma2, frame_seed(config.seed, si, f), config))
                .collect::<Result<Vec<_>, _>>()?;
            for o in outcomes {
                frames += 1;
                bit_errors += o.bit_errors;
                iterations += o.iterations as u64;
                if o.bit_errors > 0 {
                    frame_errors += 1;
                }
                if frame_errors >= config.max_errors {
                    break 'point;
                }
            }
        }
        points.push(BerPoint {
            snr_db: snr,
            frames,
            bit_errors,
            frame_errors,
            ber: bit_errors as f64 / (frames * n) as f64,
            fer: frame_errors as f64 / frames as f64,
            avg_iterations: iterations as f64 / frames as f64,
        });
    }
    Ok(points)
}

pub fn write_csv<W: Write>(points: &[BerPoint], out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p).map_err(|e| SimError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| SimError::Io(e.to_string()))
}

pub fn write_csv_file(points: &[BerPoint], path: &Path) -> Result<(), SimError> {
    let f = std::fs::File::create(path).map_err(|e| SimError::Io(e.to_string()))?;
    write_csv(points, f)
}
