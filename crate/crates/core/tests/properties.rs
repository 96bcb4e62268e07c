use expander_codes::decode::{bcjr_extrinsic, decode, exhaustive_extrinsic, WolfTrellis};
use expander_codes::gldpc::{assemble, subcode_library, Assignment, GldpcCode, TannerGraph};
use expander_codes::graph::{girth, is_connected, random_biregular, random_regular, Length, PortGraph};
use expander_codes::products::{random_instance, replacement, zigzag, zigzag_bipartite, zigzag_modified, Instance, ProductKind};
use expander_codes::spectral::{dense_spectrum, Normalize};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL_CODES: [&str; 6] = ["spc3", "spc9", "[7,4]", "[9,6]", "[15,11]", "[16,12]"];

fn assert_involution<G: PortGraph>(g: &G) {
    for v in 0..g.node_count() {
        for i in 0..g.node_degree(v) {
            let (w, j) = g.step(v, i);
            assert_eq!(g.step(w, j), (v, i), "rotation map is not an involution at ({v}, {i})");
        }
    }
}

fn small_code(seed: u64, name: &str) -> GldpcCode {
    let sub = subcode_library(name).unwrap();
    let n = if sub.n() % 2 == 0 { 12 } else { 2 * sub.n() };
    let g = random_regular(n.max(sub.n() + 1), sub.n(), seed, true).unwrap();
    assemble(TannerGraph::Regular(g), &Assignment::Uniform(sub)).unwrap()
}

fn random_codeword(code: &GldpcCode, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let basis = code.h_global.to_dense().null_space();
    let mut word = vec![0u8; code.n_bits];
    for r in 0..basis.rows() {
        if rng.random::<bool>() {
            for (c, w) in word.iter_mut().enumerate() {
                *w ^= u8::from(basis.get(r, c));
            }
        }
    }
    word
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_are_involutions(seed in 0u64..10_000, kind in 0usize..4) {
        let kind = ProductKind::ALL[kind];
        match random_instance(kind, seed).unwrap() {
            Instance::Regular { g1, g2 } => {
                let p = if kind == ProductKind::Zigzag { zigzag(&g1, &g2).unwrap() } else { replacement(&g1, &g2).unwrap() };
                assert_involution(&p);
            }
            Instance::Bipartite { g1, g2 } => {
                let p = if kind == ProductKind::ZigzagBipartite {
                    zigzag_bipartite(&g1, &g2).unwrap()
                } else {
                    zigzag_modified(&g1, &g2).unwrap()
                };
                assert_involution(&p);
            }
        }
    }

    #[test]
    fn square_spectrum_is_squared(seed in 0u64..10_000, half_n in 4usize..20, d in 2usize..6) {
        let n = 2 * half_n;
        prop_assume!(d < n);
        let g = random_regular(n, d, seed, false).unwrap();
        let mut squared: Vec<f64> = dense_spectrum(&g.normalize().unwrap()).iter().map(|x| x * x).collect();
        let mut direct = dense_spectrum(&g.square().normalize().unwrap());
        squared.sort_by(f64::total_cmp);
        direct.sort_by(f64::total_cmp);
        for (a, b) in squared.iter().zip(&direct) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn bcjr_matches_exhaustive_map(code in 0usize..SMALL_CODES.len(), seed in any::<u64>(), scale in 0.1f64..8.0) {
        let c = subcode_library(SMALL_CODES[code]).unwrap();
        let trellis = WolfTrellis::new(&c).unwrap();
        prop_assert_eq!(trellis.path_count(), 1u128 << c.k());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let llr: Vec<f64> = (0..c.n()).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
        let fast = bcjr_extrinsic(&trellis, &llr);
        let exact = exhaustive_extrinsic(&c.codewords(), &llr);
        for (a, b) in fast.iter().zip(&exact) {
            prop_assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn codeword_iff_local_projections(seed in 0u64..1_000, name in 0usize..3, flips in 0usize..3) {
        let code = small_code(seed, ["[7,4]", "spc9", "[9,6]"][name]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut word = random_codeword(&code, &mut rng);
        for _ in 0..flips {
            let i = rng.random_range(0..code.n_bits);
            word[i] ^= 1;
        }
        let local = (0..code.graph.num_constraints()).all(|v| code.code_of(v).is_codeword(&code.local_word(v, &word)));
        prop_assert_eq!(code.is_codeword(&word).unwrap(), local);
    }

    #[test]
    fn converged_output_is_codeword(seed in 0u64..1_000, sigma in 0.3f64..1.2) {
        let code = small_code(seed, "[7,4]");
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let sigma2 = sigma * sigma;
        let llr: Vec<f64> = (0..code.n_bits)
            .map(|_| {
                let z: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng);
                2.0 * (1.0 + sigma * z) / sigma2
            })
            .collect();
        let r = decode(&code, &llr, 30, true).unwrap();
        if r.converged {
            prop_assert!(code.is_codeword(&r.bits).unwrap());
        }
    }

    #[test]
    fn all_zero_is_a_fixed_point(seed in 0u64..1_000, name in 0usize..3, lo in 0.01f64..3.0) {
        let code = small_code(seed, ["[7,4]", "spc9", "[9,6]"][name]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let llr: Vec<f64> = (0..code.n_bits).map(|_| lo + 5.0 * rng.random::<f64>()).collect();
        let r = decode(&code, &llr, 10, false).unwrap();
        prop_assert!(r.bits.iter().all(|&b| b == 0));
        prop_assert!(r.converged);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// A zig-zag product always has a 4-cycle once the small graph is
    /// connected on more than two vertices; shorter cycles need a triangle
    /// or a multi-edge in a component.
    #[test]
    fn zigzag_girth_refined(seed in 0u64..100_000) {
        let Instance::Regular { g1, g2 } = random_instance(ProductKind::Zigzag, seed).unwrap() else { unreachable!() };
        prop_assume!(is_connected(&g2) && g2.num_vertices() > 2);
        let g = girth(&zigzag(&g1, &g2).unwrap());
        prop_assert!(g <= Length::Finite(4));
        if girth(&g1) >= Length::Finite(4) {
            prop_assert_eq!(g, Length::Finite(4));
        }
    }

    #[test]
    fn bipartite_zigzag_girth_is_four(seed in 0u64..100_000, c2 in 2usize..4, d2 in 2usize..4, t in 1usize..3) {
        let (d1, c1) = (d2 * t, c2 * t);
        let g2 = random_biregular(d1, c1, c2, d2, seed, true).unwrap();
        prop_assume!(is_connected(&g2));
        let (n, m) = (2 * c1 * d1, 2 * c1 * c1);
        let g1 = random_biregular(n, m, c1, d1, seed + 1, true).unwrap();
        prop_assert_eq!(girth(&zigzag_bipartite(&g1, &g2).unwrap()), Length::Finite(4));
    }
}
