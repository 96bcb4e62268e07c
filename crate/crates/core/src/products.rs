//! Zig-zag, replacement, bipartite zig-zag and modified zig-zag products.
//!
//! Product vertices are pairs `(v, k)` stored as `v * cloud + k`, where
//! `cloud` is the number of small-graph vertices per big-graph vertex. Product
//! ports are tuples of small-graph ports in row-major order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    diameter, girth, is_connected, random_biregular, random_regular, BipartiteRotationGraph, GraphError, Length,
    RotationGraph,
};
use crate::spectral::{expansion, SpectralError};

/// Absolute slack allowed when comparing measured eigenvalues to bounds.
pub const BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProductError {
    #[error("small graph has {found} vertices, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("degree identity d1*c2 = c1*d2 fails: {d1}*{c2} != {c1}*{d2}")]
    DegreeIncompatible { c1: usize, d1: usize, c2: usize, d2: usize },
    #[error("{name} = {value} outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Zigzag,
    Replacement,
    ZigzagBipartite,
    ZigzagModified,
}

impl ProductKind {
    pub const ALL: [ProductKind; 4] =
        [ProductKind::Zigzag, ProductKind::Replacement, ProductKind::ZigzagBipartite, ProductKind::ZigzagModified];

    pub fn is_bipartite(self) -> bool {
        matches!(self, ProductKind::ZigzagBipartite | ProductKind::ZigzagModified)
    }
}

impl std::str::FromStr for ProductKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zigzag" | "zz" => Ok(ProductKind::Zigzag),
            "replacement" | "rep" => Ok(ProductKind::Replacement),
            "zb" | "zigzag_bipartite" | "zigzag-bipartite" => Ok(ProductKind::ZigzagBipartite),
            "zm" | "zigzag_modified" | "zigzag-modified" => Ok(ProductKind::ZigzagModified),
            other => Err(format!("unknown product kind `{other}`")),
        }
    }
}

fn check_small(expected: usize, found: usize) -> Result<(), ProductError> {
    if expected != found {
        return Err(ProductError::SizeMismatch { expected, found });
    }
    Ok(())
}

/// Zig-zag product of an `(N₁, d₁)` graph and a `(d₁, d₂)` graph: an
/// `(N₁·d₁, d₂²)` graph.
///
/// Port `(i, j)` at `(v, k)`: step `i` inside the cloud, cross the big edge
/// named by the resulting cloud vertex, then step `j` inside the new cloud.
/// The arrival port is `(j', i')`.
pub fn zigzag(g1: &RotationGraph, g2: &RotationGraph) -> Result<RotationGraph, ProductError> {
    let (n1, d1, d2) = (g1.num_vertices(), g1.degree(), g2.degree());
    check_small(d1, g2.num_vertices())?;
    let deg = d2 * d2;
    let mut rot = Vec::with_capacity(n1 * d1 * deg);
    for v in 0..n1 {
        for k in 0..d1 {
            for i in 0..d2 {
                let (k1, i1) = g2.rotate(k, i);
                let (w, l) = g1.rotate(v, k1);
                for j in 0..d2 {
                    let (l1, j1) = g2.rotate(l, j);
                    rot.push(((w * d1 + l1) as u32, (j1 * d2 + i1) as u32));
                }
            }
        }
    }
    Ok(RotationGraph::from_raw(n1 * d1, deg, rot, true)?)
}

/// Replacement product: an `(N₁·d₁, d₂ + 1)` graph. Ports `0..d₂` follow the
/// copy of `G₂` inside the cloud, port `d₂` is the inter-cloud edge.
pub fn replacement(g1: &RotationGraph, g2: &RotationGraph) -> Result<RotationGraph, ProductError> {
    let (n1, d1, d2) = (g1.num_vertices(), g1.degree(), g2.degree());
    check_small(d1, g2.num_vertices())?;
    let deg = d2 + 1;
    let mut rot = Vec::with_capacity(n1 * d1 * deg);
    for v in 0..n1 {
        for k in 0..d1 {
            for i in 0..d2 {
                let (l, j) = g2.rotate(k, i);
                rot.push(((v * d1 + l) as u32, j as u32));
            }
            let (w, l) = g1.rotate(v, k);
            rot.push(((w * d1 + l) as u32, d2 as u32));
        }
    }
    Ok(RotationGraph::from_raw(n1 * d1, deg, rot, true)?)
}

fn check_bipartite_pair(g1: &BipartiteRotationGraph, g2: &BipartiteRotationGraph) -> Result<(), ProductError> {
    check_small(g1.right_degree(), g2.num_left())?;
    check_small(g1.left_degree(), g2.num_right())?;
    let (c1, d1, c2, d2) = (g1.left_degree(), g1.right_degree(), g2.left_degree(), g2.right_degree());
    if d1 * c2 != c1 * d2 {
        return Err(ProductError::DegreeIncompatible { c1, d1, c2, d2 });
    }
    Ok(())
}

/// Unbalanced bipartite zig-zag product of an `(N, M, c₁, d₁)` graph and a
/// `(d₁, c₁, c₂, d₂)` graph: `(c₂², d₂²)`-biregular on `(N·d₁, M·c₁)`.
///
/// Left vertex `(v, k)` with `k ∈ V₂`, right vertex `(w, m)` with `m ∈ W₂`.
/// Left port `(i, j)`: zig along left port `i` of `k` to `a ∈ W₂`, take left
/// port `a` of `v` in `G₁` arriving at `w` through port `ℓ`, then zag along
/// left port `j` of `ℓ ∈ V₂` to `m`.
pub fn zigzag_bipartite(
    g1: &BipartiteRotationGraph,
    g2: &BipartiteRotationGraph,
) -> Result<BipartiteRotationGraph, ProductError> {
    check_bipartite_pair(g1, g2)?;
    let (n, m, c1, d1, c2, d2) =
        (g1.num_left(), g1.num_right(), g1.left_degree(), g1.right_degree(), g2.left_degree(), g2.right_degree());
    let mut rot = Vec::with_capacity(n * d1 * c2 * c2);
    for v in 0..n {
        for k in 0..d1 {
            for i in 0..c2 {
                let (a, ib) = g2.rotate_left(k, i);
                let (w, l) = g1.rotate_left(v, a);
                for j in 0..c2 {
                    let (mm, jb) = g2.rotate_left(l, j);
                    rot.push(((w * c1 + mm) as u32, (jb * d2 + ib) as u32));
                }
            }
        }
    }
    Ok(BipartiteRotationGraph::from_raw(n * d1, m * c1, c2 * c2, d2 * d2, rot)?)
}

/// Modified zig-zag product: the bipartite zig-zag followed by one more step
/// from `W₂` back to `V₂` inside the right cloud. `(c₂²d₂, c₂d₂²)`-biregular on
/// `(N·d₁, M·d₁)`.
pub fn zigzag_modified(
    g1: &BipartiteRotationGraph,
    g2: &BipartiteRotationGraph,
) -> Result<BipartiteRotationGraph, ProductError> {
    check_bipartite_pair(g1, g2)?;
    let (n, m, d1, c2, d2) = (g1.num_left(), g1.num_right(), g1.right_degree(), g2.left_degree(), g2.right_degree());
    let mut rot = Vec::with_capacity(n * d1 * c2 * c2 * d2);
    for v in 0..n {
        for k in 0..d1 {
            for i in 0..c2 {
                let (a, ib) = g2.rotate_left(k, i);
                let (w, l) = g1.rotate_left(v, a);
                for j in 0..c2 {
                    let (m1, jb) = g2.rotate_left(l, j);
                    for j2 in 0..d2 {
                        let (m2, j2b) = g2.rotate_right(m1, j2);
                        rot.push(((w * d1 + m2) as u32, ((j2b * d2 + jb) * d2 + ib) as u32));
                    }
                }
            }
        }
    }
    Ok(BipartiteRotationGraph::from_raw(n * d1, m * d1, c2 * c2 * d2, c2 * d2 * d2, rot)?)
}

fn check_unit(name: &'static str, value: f64) -> Result<(), ProductError> {
    if !(0.0..=1.0).contains(&value) {
        return Err(ProductError::OutOfRange { name, value });
    }
    Ok(())
}

/// `λ₁ + λ₂ + λ₂²`.
pub fn zigzag_bound(lambda1: f64, lambda2: f64) -> Result<f64, ProductError> {
    check_unit("lambda1", lambda1)?;
    check_unit("lambda2", lambda2)?;
    Ok(lambda1 + lambda2 + lambda2 * lambda2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FVariant {
    /// `f = λ₁ + λ₂ + λ₂²`
    Sum,
    /// `f = ½(1−λ₂²)λ₁ + ½√((1−λ₂²)²λ₁² + 4λ₂²)`
    Sqrt,
}

pub fn f_value(lambda1: f64, lambda2: f64, variant: FVariant) -> f64 {
    match variant {
        FVariant::Sum => lambda1 + lambda2 + lambda2 * lambda2,
        FVariant::Sqrt => {
            let a = 1.0 - lambda2 * lambda2;
            0.5 * a * lambda1 + 0.5 * (a * a * lambda1 * lambda1 + 4.0 * lambda2 * lambda2).sqrt()
        }
    }
}

/// Weight `d₂²/(d₂+1)³` of the zig-zag walks among the length-3 walks of a
/// replacement product.
pub fn replacement_p(d2: usize) -> f64 {
    let d = d2 as f64;
    d * d / ((d + 1.0) * (d + 1.0) * (d + 1.0))
}

/// `(p + (1−p)·f(λ₁, λ₂))^{1/3}` with `p = d₂²/(d₂+1)³`.
pub fn replacement_bound(lambda1: f64, lambda2: f64, d2: usize, variant: FVariant) -> Result<f64, ProductError> {
    check_unit("lambda1", lambda1)?;
    check_unit("lambda2", lambda2)?;
    if d2 == 0 {
        return Err(ProductError::OutOfRange { name: "d2", value: 0.0 });
    }
    let p = replacement_p(d2);
    Ok((p + (1.0 - p) * f_value(lambda1, lambda2, variant)).cbrt())
}

/// `((1−p) + p·f(λ₁, λ₂))^{1/3}`: the form obtained by splitting the cubed
/// walk matrix into its zig-zag part (weight `p`) and a remainder of norm at
/// most one. Recorded beside [`replacement_bound`] for comparison.
pub fn replacement_bound_walk_split(lambda1: f64, lambda2: f64, d2: usize, variant: FVariant) -> Result<f64, ProductError> {
    check_unit("lambda1", lambda1)?;
    check_unit("lambda2", lambda2)?;
    let p = replacement_p(d2);
    Ok(((1.0 - p) + p * f_value(lambda1.min(1.0), lambda2, variant).min(1.0)).cbrt())
}

/// `(d₂ + λ₁)/(d₂ + 1)`: the Rayleigh quotient of a cloud-constant lift of a
/// second eigenvector of `G₁`, a lower bound on the replacement product's
/// second eigenvalue.
pub fn replacement_lower_bound(lambda1_signed: f64, d2: usize) -> f64 {
    (d2 as f64 + lambda1_signed) / (d2 as f64 + 1.0)
}

/// Measured spectral and distance data of a product against the bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductCertificate {
    pub product_kind: ProductKind,
    pub num_left: usize,
    pub num_right: Option<usize>,
    pub left_degree: usize,
    pub right_degree: Option<usize>,
    pub lambda1: f64,
    pub lambda2_small: f64,
    pub measured_lambda: f64,
    /// Binding bound: `λ₁ + λ₂ + λ₂²` for zig-zag variants, the sqrt variant
    /// of [`replacement_bound`] for the replacement product.
    pub bound: f64,
    pub bound_ok: bool,
    /// Replacement only: the same bound with the sum `f`.
    pub bound_sum_variant: Option<f64>,
    /// Replacement only: [`replacement_bound_walk_split`] with the sqrt `f`.
    pub bound_walk_split: Option<f64>,
    /// `measured < 1` whenever both component values are `< 1`.
    pub below_one_ok: bool,
    pub girth: Length,
    /// Girths of the two components.
    pub component_girths: (Length, Length),
    /// Zig-zag kinds: the small graph is connected with more than two
    /// vertices. Always true for the replacement product.
    pub girth_hypothesis: bool,
    pub girth_lower: Length,
    pub girth_upper: Length,
    pub girth_bound_ok: bool,
    /// Replacement only.
    pub diameter: Option<Length>,
    pub diameter_lower: Option<Length>,
    pub diameter_upper: Option<Length>,
    pub diameter_lower_ok: Option<bool>,
    /// Reported, not asserted.
    pub diameter_upper_ok: Option<bool>,
}

fn below_one(l1: f64, l2: f64, measured: f64) -> bool {
    !(l1 < 1.0 - BOUND_SLACK && l2 < 1.0 - BOUND_SLACK) || measured < 1.0 - BOUND_SLACK
}

/// Certificate for a zig-zag or replacement product of regular graphs.
pub fn verify_regular(
    kind: ProductKind,
    product: &RotationGraph,
    g1: &RotationGraph,
    g2: &RotationGraph,
    seed: u64,
) -> Result<ProductCertificate, ProductError> {
    let lambda1 = expansion(g1, seed)?;
    let lambda2_small = expansion(g2, seed)?;
    let measured = expansion(product, seed)?;
    let g = girth(product);
    let mut cert = ProductCertificate {
        product_kind: kind,
        num_left: product.num_vertices(),
        num_right: None,
        left_degree: product.degree(),
        right_degree: None,
        lambda1,
        lambda2_small,
        measured_lambda: measured,
        bound: 0.0,
        bound_ok: false,
        bound_sum_variant: None,
        bound_walk_split: None,
        below_one_ok: below_one(lambda1, lambda2_small, measured),
        girth: g,
        component_girths: (girth(g1), girth(g2)),
        girth_hypothesis: kind == ProductKind::Replacement || (is_connected(g2) && g2.num_vertices() > 2),
        girth_lower: Length::Finite(4),
        girth_upper: Length::Finite(4),
        girth_bound_ok: g == Length::Finite(4),
        diameter: None,
        diameter_lower: None,
        diameter_upper: None,
        diameter_lower_ok: None,
        diameter_upper_ok: None,
    };
    match kind {
        ProductKind::Zigzag => cert.bound = zigzag_bound(lambda1, lambda2_small)?,
        ProductKind::Replacement => {
            let d2 = g2.degree();
            cert.bound = replacement_bound(lambda1, lambda2_small, d2, FVariant::Sqrt)?;
            cert.bound_sum_variant = Some(replacement_bound(lambda1, lambda2_small, d2, FVariant::Sum)?);
            cert.bound_walk_split = Some(replacement_bound_walk_split(lambda1, lambda2_small, d2, FVariant::Sqrt)?);
            let (g1g, g2g) = cert.component_girths;
            let (t1, t2) = (diameter(g1), diameter(g2));
            cert.girth_lower = g2g.min(Length::Finite(2).times(g1g));
            cert.girth_upper = g2g.min(g1g.times(t2));
            cert.girth_bound_ok = cert.girth_lower <= g && g <= cert.girth_upper;
            let t = diameter(product);
            let lower = t2.max(Length::Finite(2).times(t1));
            let upper = t1.plus(t2);
            cert.diameter = Some(t);
            cert.diameter_lower = Some(lower);
            cert.diameter_upper = Some(upper);
            cert.diameter_lower_ok = Some(lower <= t);
            cert.diameter_upper_ok = Some(t <= upper);
        }
        _ => unreachable!("bipartite kinds use verify_bipartite"),
    }
    cert.bound_ok = measured <= cert.bound + BOUND_SLACK;
    Ok(cert)
}

/// Certificate for a bipartite or modified zig-zag product; eigenvalues are
/// second singular values of the normalized biadjacency matrices.
pub fn verify_bipartite(
    kind: ProductKind,
    product: &BipartiteRotationGraph,
    g1: &BipartiteRotationGraph,
    g2: &BipartiteRotationGraph,
    seed: u64,
) -> Result<ProductCertificate, ProductError> {
    assert!(kind.is_bipartite());
    let lambda1 = expansion(g1, seed)?;
    let lambda2_small = expansion(g2, seed)?;
    let measured = expansion(product, seed)?;
    let bound = zigzag_bound(lambda1, lambda2_small)?;
    let g = girth(product);
    Ok(ProductCertificate {
        product_kind: kind,
        num_left: product.num_left(),
        num_right: Some(product.num_right()),
        left_degree: product.left_degree(),
        right_degree: Some(product.right_degree()),
        lambda1,
        lambda2_small,
        measured_lambda: measured,
        bound,
        bound_ok: measured <= bound + BOUND_SLACK,
        bound_sum_variant: None,
        bound_walk_split: None,
        below_one_ok: below_one(lambda1, lambda2_small, measured),
        girth: g,
        component_girths: (girth(g1), girth(g2)),
        girth_hypothesis: is_connected(g2) && g2.num_left() + g2.num_right() > 2,
        girth_lower: Length::Finite(4),
        girth_upper: Length::Finite(4),
        girth_bound_ok: g == Length::Finite(4),
        diameter: None,
        diameter_lower: None,
        diameter_upper: None,
        diameter_lower_ok: None,
        diameter_upper_ok: None,
    })
}

/// A seeded random component pair for a product kind, sized so the product
/// stays small enough for a dense eigensolver.
#[derive(Clone, Debug)]
pub enum Instance {
    Regular { g1: RotationGraph, g2: RotationGraph },
    Bipartite { g1: BipartiteRotationGraph, g2: BipartiteRotationGraph },
}

pub fn random_instance(kind: ProductKind, seed: u64) -> Result<Instance, ProductError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ProductKind::Zigzag | ProductKind::Replacement => {
            // G₂ needs d₁ vertices and degree d₂ < d₁ with d₁·d₂ even
            let d1 = rng.random_range(3..=10usize);
            let d2 = loop {
                let d2 = rng.random_range(2..d1.max(3));
                if d2 < d1 && (d1 * d2) % 2 == 0 {
                    break d2;
                }
                if d1 == 3 {
                    break 2;
                }
            };
            let n1 = loop {
                let n1 = rng.random_range(d1 + 1..=60);
                if (n1 * d1) % 2 == 0 {
                    break n1;
                }
            };
            let g1 = random_regular(n1, d1, rng.random(), true)?;
            let g2 = random_regular(d1, d2, rng.random(), true)?;
            Ok(Instance::Regular { g1, g2 })
        }
        ProductKind::ZigzagBipartite | ProductKind::ZigzagModified => {
            // G₂ is (c₂, d₂)-biregular on (d₁, c₁); G₁ is (c₁, d₁) on (N, M)
            // with d₁c₂ = c₁d₂. Pick G₂'s shape first, then G₁ to match.
            let (c2, d2) = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2)][rng.random_range(0..6)];
            let t = rng.random_range(1..=3usize);
            let (d1, c1) = (d2 * t, c2 * t);
            if d1 < 2 || c1 < 2 || d1 > 10 || c1 > 10 {
                return random_instance(kind, seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
            }
            // N·c₁ = M·d₁ with N, M ≤ 30
            let g = gcd(c1, d1);
            let (unit_n, unit_m) = (d1 / g, c1 / g);
            let max_s = 30 / unit_n.max(unit_m);
            let lo = (c1.max(d1)).div_ceil(unit_n.min(unit_m));
            let s = rng.random_range(lo.min(max_s)..=max_s);
            let (n, m) = (unit_n * s, unit_m * s);
            let g1 = random_biregular(n, m, c1, d1, rng.random(), c1 <= m && d1 <= n)?;
            let g2 = random_biregular(d1, c1, c2, d2, rng.random(), c2 <= c1 && d2 <= d1)?;
            Ok(Instance::Bipartite { g1, g2 })
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
