//! Syndrome trellises, BCJR constraint decoding, and the flooding
//! message-passing decoder for GLDPC codes.
//!
//! LLRs are `log P(0)/P(1)`: positive values favour bit 0.

use thiserror::Error;

use crate::gldpc::{GldpcCode, LinearCode};

pub const LLR_CLIP: f64 = 50.0;
pub const TRELLIS_MAX_N: usize = 32;
pub const TRELLIS_MAX_CHECKS: usize = 16;
/// Largest check count handled by the dense-state recursion.
pub const DENSE_MAX_CHECKS: usize = 8;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("trellis limited to n ≤ {TRELLIS_MAX_N} and n−k ≤ {TRELLIS_MAX_CHECKS}, code is [{n},{k}]")]
    TooLarge { n: usize, k: usize },
    #[error("expected {expected} LLRs, got {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// One trellis branch from `from` (index into section `t`) to `to` (index
/// into section `t + 1`) labelled with `bit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Branch {
    pub from: u32,
    pub to: u32,
    pub bit: u8,
}

/// Wolf trellis: the states at depth `t` are the partial syndromes
/// `Σ_{i<t} x_i h_i` that are reachable from zero and can still return to
/// zero, so start-to-end paths are exactly the codewords.
#[derive(Clone, Debug)]
pub struct WolfTrellis {
    n: usize,
    /// `states[t]` holds the syndrome masks at depth `t`, sorted.
    states: Vec<Vec<u32>>,
    branches: Vec<Vec<Branch>>,
    /// Parity-check column of each position, as a syndrome mask.
    cols: Vec<u32>,
    checks: usize,
}

impl WolfTrellis {
    pub fn new(code: &LinearCode) -> Result<Self, DecodeError> {
        let (n, k) = (code.n(), code.k());
        if n > TRELLIS_MAX_N || n - k > TRELLIS_MAX_CHECKS {
            return Err(DecodeError::TooLarge { n, k });
        }
        let h = code.parity_check();
        let cols: Vec<u32> = (0..n).map(|c| h.column_mask(c) as u32).collect();
        let mut backward = vec![vec![0u32]; n + 1];
        for t in (0..n).rev() {
            let mut s = backward[t + 1].clone();
            s.extend(backward[t + 1].iter().map(|x| x ^ cols[t]));
            s.sort_unstable();
            s.dedup();
            backward[t] = s;
        }
        let mut states = vec![vec![0u32]];
        let mut branches = Vec::with_capacity(n);
        for t in 0..n {
            let mut next: Vec<u32> = states[t]
                .iter()
                .flat_map(|&s| [s, s ^ cols[t]])
                .filter(|x| backward[t + 1].binary_search(x).is_ok())
                .collect();
            next.sort_unstable();
            next.dedup();
            let mut sec = Vec::with_capacity(2 * states[t].len());
            for (fi, &s) in states[t].iter().enumerate() {
                for bit in 0..2u8 {
                    let target = if bit == 1 { s ^ cols[t] } else { s };
                    if let Ok(ti) = next.binary_search(&target) {
                        sec.push(Branch { from: fi as u32, to: ti as u32, bit });
                    }
                }
            }
            branches.push(sec);
            states.push(next);
        }
        debug_assert_eq!(states[n], vec![0]);
        Ok(WolfTrellis { n, states, branches, cols, checks: n - k })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn states_at(&self, t: usize) -> &[u32] {
        &self.states[t]
    }

    pub fn branches_at(&self, t: usize) -> &[Branch] {
        &self.branches[t]
    }

    pub fn max_states(&self) -> usize {
        self.states.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of start-to-end paths.
    pub fn path_count(&self) -> u128 {
        let mut count = vec![1u128];
        for t in 0..self.n {
            let mut next = vec![0u128; self.states[t + 1].len()];
            for b in &self.branches[t] {
                next[b.to as usize] += count[b.from as usize];
            }
            count = next;
        }
        count[0]
    }
}

/// `log(e^a + e^b)`.
#[inline]
pub fn max_star(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    a.max(b) + (-(a - b).abs()).exp().ln_1p()
}

fn clip(x: f64) -> f64 {
    x.clamp(-LLR_CLIP, LLR_CLIP)
}

/// Reusable forward/backward buffers for [`bcjr_extrinsic_into`].
#[derive(Clone, Debug, Default)]
pub struct BcjrWorkspace {
    alpha: Vec<Vec<f64>>,
    flat: Vec<f64>,
    beta: Vec<f64>,
    beta_next: Vec<f64>,
    gamma: Vec<[f64; 2]>,
}

/// Per-bit extrinsic LLRs (a-posteriori minus input) of the trellis code
/// given input LLRs, computed exactly in the log domain. The extrinsic of bit
/// `t` sums over paths without the bit's own branch metric. Inputs are
/// clipped to `±LLR_CLIP` first and outputs are clipped to the same range.
pub fn bcjr_extrinsic(trellis: &WolfTrellis, llr_in: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; llr_in.len()];
    bcjr_extrinsic_into(trellis, llr_in, &mut out, &mut BcjrWorkspace::default());
    out
}

pub fn bcjr_extrinsic_into(trellis: &WolfTrellis, llr_in: &[f64], out: &mut [f64], ws: &mut BcjrWorkspace) {
    let n = trellis.n;
    assert_eq!(llr_in.len(), n);
    assert_eq!(out.len(), n);
    let gamma = |t: usize, bit: u8| {
        let l = clip(llr_in[t]);
        if bit == 0 {
            0.5 * l
        } else {
            -0.5 * l
        }
    };
    ws.alpha.resize_with(n + 1, Vec::new);
    ws.alpha[0].clear();
    ws.alpha[0].push(0.0);
    for t in 0..n {
        let (head, tail) = ws.alpha.split_at_mut(t + 1);
        let next = &mut tail[0];
        next.clear();
        next.resize(trellis.states[t + 1].len(), f64::NEG_INFINITY);
        for b in &trellis.branches[t] {
            let v = head[t][b.from as usize] + gamma(t, b.bit);
            next[b.to as usize] = max_star(next[b.to as usize], v);
        }
    }
    ws.beta.clear();
    ws.beta.push(0.0);
    for t in (0..n).rev() {
        let (mut zero, mut one) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        ws.beta_next.clear();
        ws.beta_next.resize(trellis.states[t].len(), f64::NEG_INFINITY);
        for b in &trellis.branches[t] {
            let g = gamma(t, b.bit);
            let beta_to = ws.beta[b.to as usize];
            let path = ws.alpha[t][b.from as usize] + beta_to;
            if b.bit == 0 {
                zero = max_star(zero, path);
            } else {
                one = max_star(one, path);
            }
            ws.beta_next[b.from as usize] = max_star(ws.beta_next[b.from as usize], g + beta_to);
        }
        out[t] = clip(zero - one);
        std::mem::swap(&mut ws.beta, &mut ws.beta_next);
    }
}

/// Same extrinsics as [`bcjr_extrinsic_into`], computed with
/// probabilities normalized per section instead of log-domain sums. The
/// decoder uses this form; it agrees with the log-domain recursion to
/// rounding error.
pub fn bcjr_extrinsic_linear_into(trellis: &WolfTrellis, llr_in: &[f64], out: &mut [f64], ws: &mut BcjrWorkspace) {
    assert_eq!(llr_in.len(), trellis.n);
    assert_eq!(out.len(), trellis.n);
    ws.gamma.clear();
    ws.gamma.extend(llr_in.iter().map(|&l| {
        let e = (0.5 * clip(l)).exp();
        [e, 1.0 / e]
    }));
    match trellis.checks {
        0 | 1 => linear_dense::<2>(trellis, out, ws),
        2 => linear_dense::<4>(trellis, out, ws),
        3 => linear_dense::<8>(trellis, out, ws),
        4 => linear_dense::<16>(trellis, out, ws),
        5 => linear_dense::<32>(trellis, out, ws),
        6 => linear_dense::<64>(trellis, out, ws),
        7 => linear_dense::<128>(trellis, out, ws),
        8 => linear_dense::<256>(trellis, out, ws),
        _ => linear_sparse(trellis, out, ws),
    }
}

/// Same recursion over all `2^r` syndromes at every depth. States outside
/// the Wolf trellis carry zero forward or backward weight, so the sums are
/// unchanged.
fn linear_dense<const S: usize>(trellis: &WolfTrellis, out: &mut [f64], ws: &mut BcjrWorkspace) {
    let n = trellis.n;
    if ws.flat.len() < (n + 1) * S {
        ws.flat.resize((n + 1) * S, 0.0);
    }
    ws.flat[..S].fill(0.0);
    ws.flat[0] = 1.0;
    for t in 0..n {
        let (head, tail) = ws.flat.split_at_mut((t + 1) * S);
        let a: &[f64; S] = head[t * S..].try_into().expect("section width");
        let next: &mut [f64; S] = (&mut tail[..S]).try_into().expect("section width");
        let h = trellis.cols[t] as usize;
        let [g0, g1] = ws.gamma[t];
        let mut m = 0.0f64;
        for s in 0..S {
            let v = a[s] * g0 + a[(s ^ h) & (S - 1)] * g1;
            next[s] = v;
            m = m.max(v);
        }
        if m > 0.0 {
            let inv = 1.0 / m;
            next.iter_mut().for_each(|x| *x *= inv);
        }
    }
    let mut beta = [0.0f64; S];
    let mut beta_next = [0.0f64; S];
    beta[0] = 1.0;
    for t in (0..n).rev() {
        let a: &[f64; S] = ws.flat[t * S..(t + 1) * S].try_into().expect("section width");
        let h = trellis.cols[t] as usize;
        let [g0, g1] = ws.gamma[t];
        let (mut zero, mut one, mut m) = (0.0f64, 0.0f64, 0.0f64);
        for s in 0..S {
            let (b0, b1) = (beta[s], beta[(s ^ h) & (S - 1)]);
            zero += a[s] * b0;
            one += a[s] * b1;
            let v = g0 * b0 + g1 * b1;
            beta_next[s] = v;
            m = m.max(v);
        }
        out[t] = clip((zero / one).ln());
        let inv = if m > 0.0 { 1.0 / m } else { 1.0 };
        for s in 0..S {
            beta[s] = beta_next[s] * inv;
        }
    }
}

fn linear_sparse(trellis: &WolfTrellis, out: &mut [f64], ws: &mut BcjrWorkspace) {
    let n = trellis.n;
    ws.alpha.resize_with(n + 1, Vec::new);
    ws.alpha[0].clear();
    ws.alpha[0].push(1.0);
    for t in 0..n {
        let (head, tail) = ws.alpha.split_at_mut(t + 1);
        let next = &mut tail[0];
        next.clear();
        next.resize(trellis.states[t + 1].len(), 0.0);
        let g = ws.gamma[t];
        for b in &trellis.branches[t] {
            next[b.to as usize] += head[t][b.from as usize] * g[b.bit as usize];
        }
        let scale = next.iter().fold(0.0f64, |m, &x| m.max(x));
        if scale > 0.0 {
            let inv = 1.0 / scale;
            next.iter_mut().for_each(|x| *x *= inv);
        }
    }
    ws.beta.clear();
    ws.beta.push(1.0);
    for t in (0..n).rev() {
        let (mut zero, mut one) = (0.0f64, 0.0f64);
        ws.beta_next.clear();
        ws.beta_next.resize(trellis.states[t].len(), 0.0);
        let g = ws.gamma[t];
        for b in &trellis.branches[t] {
            let beta_to = ws.beta[b.to as usize];
            let through = ws.alpha[t][b.from as usize] * beta_to;
            if b.bit == 0 {
                zero += through;
            } else {
                one += through;
            }
            ws.beta_next[b.from as usize] += g[b.bit as usize] * beta_to;
        }
        out[t] = clip((zero / one).ln());
        let scale = ws.beta_next.iter().fold(0.0f64, |m, &x| m.max(x));
        if scale > 0.0 {
            let inv = 1.0 / scale;
            ws.beta_next.iter_mut().for_each(|x| *x *= inv);
        }
        std::mem::swap(&mut ws.beta, &mut ws.beta_next);
    }
}

/// Exhaustive per-bit MAP over an explicit codeword list, as an oracle for
/// [`bcjr_extrinsic`].
pub fn exhaustive_extrinsic(codewords: &[u64], llr_in: &[f64]) -> Vec<f64> {
    let n = llr_in.len();
    (0..n)
        .map(|i| {
            let (mut zero, mut one) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for &w in codewords {
                let metric: f64 =
                    (0..n).filter(|&j| j != i).map(|j| if (w >> j) & 1 == 0 { 0.5 * llr_in[j] } else { -0.5 * llr_in[j] }).sum();
                if (w >> i) & 1 == 0 {
                    zero = max_star(zero, metric);
                } else {
                    one = max_star(one, metric);
                }
            }
            zero - one
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub bits: Vec<u8>,
    pub iterations: usize,
    /// Every subcode syndrome is zero and no posterior LLR is exactly zero.
    pub converged: bool,
}

/// Flooding sum-product decoder: each bit has one socket at each of its two
/// constraint vertices; every round each vertex runs BCJR on the channel LLR
/// plus the message from the bit's other socket, and its extrinsic outputs
/// become the new messages.
#[derive(Clone, Debug)]
pub struct Decoder<'a> {
    code: &'a GldpcCode,
    trellises: Vec<WolfTrellis>,
    /// Column masks of every subcode's parity-check matrix.
    columns: Vec<Vec<u64>>,
    socket_offset: Vec<usize>,
    /// For socket `s`, the bit it carries.
    socket_bit: Vec<u32>,
    /// For socket `s`, the other socket of the same bit.
    partner: Vec<u32>,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a GldpcCode) -> Result<Self, DecodeError> {
        let trellises = code.codes.iter().map(WolfTrellis::new).collect::<Result<Vec<_>, _>>()?;
        let columns = code
            .codes
            .iter()
            .map(|c| (0..c.n()).map(|i| c.parity_check().column_mask(i)).collect())
            .collect();
        let mut socket_offset = Vec::with_capacity(code.edge_order.len() + 1);
        let mut socket_bit = Vec::new();
        for order in &code.edge_order {
            socket_offset.push(socket_bit.len());
            socket_bit.extend_from_slice(order);
        }
        socket_offset.push(socket_bit.len());
        let mut first = vec![u32::MAX; code.n_bits];
        let mut partner = vec![u32::MAX; socket_bit.len()];
        for (s, &e) in socket_bit.iter().enumerate() {
            let f = &mut first[e as usize];
            if *f == u32::MAX {
                *f = s as u32;
            } else {
                partner[s] = *f;
                partner[*f as usize] = s as u32;
            }
        }
        debug_assert!(partner.iter().all(|&p| p != u32::MAX));
        Ok(Decoder { code, trellises, columns, socket_offset, socket_bit, partner })
    }

    pub fn code(&self) -> &GldpcCode {
        self.code
    }

    pub fn decode(&self, channel: &[f64], max_iterations: usize, early_stop: bool) -> Result<DecodeResult, DecodeError> {
        let code = self.code;
        if channel.len() != code.n_bits {
            return Err(DecodeError::LengthMismatch { expected: code.n_bits, found: channel.len() });
        }
        let sockets = self.socket_bit.len();
        let mut msg = vec![0.0f64; sockets];
        let mut next = vec![0.0f64; sockets];
        let mut input = Vec::new();
        let mut ws = BcjrWorkspace::default();
        let mut posterior = vec![0.0f64; code.n_bits];
        let mut bits = vec![0u8; code.n_bits];
        let mut converged = false;
        let mut iterations = 0;
        for _ in 0..max_iterations.max(1) {
            iterations += 1;
            for v in 0..code.edge_order.len() {
                let (lo, hi) = (self.socket_offset[v], self.socket_offset[v + 1]);
                input.clear();
                input.extend(
                    (lo..hi).map(|s| channel[self.socket_bit[s] as usize] + msg[self.partner[s] as usize]),
                );
                bcjr_extrinsic_linear_into(&self.trellises[code.assignment[v]], &input, &mut next[lo..hi], &mut ws);
            }
            std::mem::swap(&mut msg, &mut next);
            for (s, &e) in self.socket_bit.iter().enumerate() {
                if (s as u32) < self.partner[s] {
                    posterior[e as usize] = channel[e as usize] + msg[s] + msg[self.partner[s] as usize];
                }
            }
            for (b, &l) in bits.iter_mut().zip(&posterior) {
                *b = u8::from(l < 0.0);
            }
            converged = posterior.iter().all(|&l| l != 0.0) && self.syndromes_zero(&bits);
            if early_stop && converged {
                break;
            }
        }
        Ok(DecodeResult { bits, iterations, converged })
    }

    /// Whether every vertex sees a codeword of its subcode.
    pub fn syndromes_zero(&self, bits: &[u8]) -> bool {
        (0..self.code.edge_order.len()).all(|v| {
            let cols = &self.columns[self.code.assignment[v]];
            let lo = self.socket_offset[v];
            cols.iter()
                .enumerate()
                .filter(|&(i, _)| bits[self.socket_bit[lo + i] as usize] == 1)
                .fold(0u64, |acc, (_, &c)| acc ^ c)
                == 0
        })
    }
}

/// One-shot convenience wrapper around [`Decoder`].
pub fn decode(
    code: &GldpcCode,
    channel: &[f64],
    max_iterations: usize,
    early_stop: bool,
) -> Result<DecodeResult, DecodeError> {
    Decoder::new(code)?.decode(channel, max_iterations, early_stop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gldpc::{assemble, single_parity_check, subcode_library, Assignment, TannerGraph};
    use crate::graph::random_regular;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spc3_trellis_has_two_interior_states() {
        let t = WolfTrellis::new(&single_parity_check(3).unwrap()).unwrap();
        assert_eq!(t.states_at(1).len(), 2);
        assert_eq!(t.states_at(2).len(), 2);
        assert_eq!(t.path_count(), 4);
    }

    #[test]
    fn hamming_trellis_sizes() {
        let t = WolfTrellis::new(&subcode_library("[15,11]").unwrap()).unwrap();
        assert!(t.max_states() <= 16);
        assert_eq!(t.path_count(), 2048);
        let t = WolfTrellis::new(&subcode_library("[7,4]").unwrap()).unwrap();
        assert_eq!(t.path_count(), 16);
    }

    #[test]
    fn spc3_extrinsic_matches_tanh_rule() {
        let t = WolfTrellis::new(&single_parity_check(3).unwrap()).unwrap();
        let ext = bcjr_extrinsic(&t, &[0.7, 2.0, 2.0]);
        let expected = 2.0 * ((1.0f64).tanh() * (1.0f64).tanh()).atanh();
        assert!((ext[0] - expected).abs() < 1e-12);
        assert!((expected - 1.32500).abs() < 1e-4);
    }

    #[test]
    fn zero_input_gives_zero_extrinsic() {
        let t = WolfTrellis::new(&subcode_library("[15,11]").unwrap()).unwrap();
        assert!(bcjr_extrinsic(&t, &[0.0; 15]).iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn linear_and_log_domain_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut ws = BcjrWorkspace::default();
        for name in ["[7,4]", "[9,6]", "[15,11]", "[16,12]", "[20,15]", "[25,21]"] {
            let t = WolfTrellis::new(&subcode_library(name).unwrap()).unwrap();
            for scale in [1.0, 10.0, 80.0] {
                let llr: Vec<f64> = (0..t.len()).map(|_| rng.random_range(-scale..scale)).collect();
                let a = bcjr_extrinsic(&t, &llr);
                let mut b = vec![0.0; t.len()];
                bcjr_extrinsic_linear_into(&t, &llr, &mut b, &mut ws);
                let mut c = vec![0.0; t.len()];
                linear_sparse(&t, &mut c, &mut ws);
                for ((x, y), z) in a.iter().zip(&b).zip(&c) {
                    assert!((x - y).abs() < 1e-9, "{name} dense: {x} vs {y}");
                    assert!((x - z).abs() < 1e-9, "{name} sparse: {x} vs {z}");
                }
            }
        }
    }

    #[test]
    fn saturated_input_keeps_extrinsic() {
        let t = WolfTrellis::new(&single_parity_check(3).unwrap()).unwrap();
        let ext = bcjr_extrinsic(&t, &[LLR_CLIP, LLR_CLIP, LLR_CLIP]);
        assert!(ext.iter().all(|&x| x > 49.0));
    }

    #[test]
    fn hamming7_matches_exhaustive_map() {
        let code = subcode_library("[7,4]").unwrap();
        let t = WolfTrellis::new(&code).unwrap();
        let words = code.codewords();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let llr: Vec<f64> = (0..7).map(|_| rng.random_range(-8.0..8.0)).collect();
            let a = bcjr_extrinsic(&t, &llr);
            let b = exhaustive_extrinsic(&words, &llr);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    fn small_code() -> GldpcCode {
        let g = random_regular(16, 7, 3, true).unwrap();
        assemble(TannerGraph::Regular(g), &Assignment::Uniform(subcode_library("[7,4]").unwrap())).unwrap()
    }

    #[test]
    fn noiseless_all_zero_converges_in_one_iteration() {
        let code = small_code();
        let r = decode(&code, &vec![LLR_CLIP; code.n_bits], 50, true).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.bits.iter().all(|&b| b == 0));
    }

    #[test]
    fn zero_llrs_do_not_converge() {
        let code = small_code();
        let r = decode(&code, &vec![0.0; code.n_bits], 5, true).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 5);
        assert!(r.bits.iter().all(|&b| b == 0));
    }

    #[test]
    fn single_flip_corrected() {
        let code = small_code();
        let mut llr = vec![8.0; code.n_bits];
        llr[11] = -8.0;
        let r = decode(&code, &llr, 50, true).unwrap();
        assert!(r.converged);
        assert!(r.bits.iter().all(|&b| b == 0));
    }

    #[test]
    fn length_checked() {
        let code = small_code();
        assert_eq!(
            decode(&code, &[1.0; 3], 5, true).unwrap_err(),
            DecodeError::LengthMismatch { expected: code.n_bits, found: 3 }
        );
    }
}
