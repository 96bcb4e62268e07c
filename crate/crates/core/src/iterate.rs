//! Iterative expander families built by repeating the products on a fixed
//! seed graph, with their eigenvalue recurrences.
//!
//! - `zz`: `G₁ = H²`, `G_{i+1} = G_i² ⓩ H`, `H` a `(D⁴, D)` graph.
//! - `zzm`: `G₁ = H³`, `G_{i+1} = G_i³ ⓩᴹ H`, `H` `(c, d)`-biregular on
//!   `(c⁴d⁵, c⁵d⁴)`.
//! - `rep`: `G_{i+1} = G_i⁴ ⓡ H`, `G₁` an `(N, d+1)` graph and `H` a
//!   `((d+1)⁴, d)` graph.
//!
//! Levels whose vertex count exceeds the budget are traced through the bound
//! recurrence only.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{random_biregular, random_regular, BipartiteRotationGraph, GraphError, RotationGraph};
use crate::products::{replacement, replacement_bound, zigzag, zigzag_modified, FVariant, ProductError};
use crate::spectral::{expansion, SpectralError};

pub const DEFAULT_BUDGET: usize = 1 << 20;
/// Largest level measured spectrally by default.
pub const DEFAULT_MEASURE_LIMIT: usize = 1 << 16;
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;
pub const FIXED_POINT_MAX_STEPS: usize = 100_000;
/// Limits within this distance of one count as divergent.
pub const DIVERGENCE_MARGIN: f64 = 1e-6;

pub const ZIGZAG_CEILING: f64 = 0.4;
pub const MODIFIED_CEILING: f64 = 0.55;
pub const REPLACEMENT_CEILING: f64 = 0.86;

#[derive(Debug, Error)]
pub enum IterateError {
    #[error("seed graph has the wrong shape: {0}")]
    SizeMismatch(String),
    #[error("seed graph has {vertices} vertices, over the budget of {budget}")]
    LevelBudget { vertices: u128, budget: usize },
    #[error("recurrence diverges (reached {value} after {steps} steps)")]
    Divergent { value: f64, steps: usize },
    #[error("invalid recurrence parameter {name} = {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    ZigzagOriginal,
    ZigzagModified,
    Replacement,
}

impl FamilyKind {
    pub fn ceiling(self) -> f64 {
        match self {
            FamilyKind::ZigzagOriginal => ZIGZAG_CEILING,
            FamilyKind::ZigzagModified => MODIFIED_CEILING,
            FamilyKind::Replacement => REPLACEMENT_CEILING,
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zz" | "zigzag_original" => Ok(FamilyKind::ZigzagOriginal),
            "zzm" | "zigzag_modified" => Ok(FamilyKind::ZigzagModified),
            "rep" | "replacement" => Ok(FamilyKind::Replacement),
            other => Err(format!("unknown family `{other}` (expected zz, zzm or rep)")),
        }
    }
}

/// A bound recurrence `λ_{i+1} = step(λ_i)` started from the family's `λ₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Recurrence {
    /// `λ₁ = λ_H²`, `λ_{i+1} = λ_i² + λ_H + λ_H²`.
    Zigzag { lambda_h: f64 },
    /// `λ₁ = λ³`, `λ_{i+1} = λ_i³ + λ + λ²`.
    ZigzagModified { lambda: f64 },
    /// `λ_{i+1} = (p + (1−p) f(λ_i^power, λ₂))^{1/3}` with the square-root
    /// `f`; `power = 4` is the family, `power = 2` its squared variant.
    Replacement { lambda1: f64, lambda2: f64, d: usize, power: u32 },
}

impl Recurrence {
    pub fn start(&self) -> f64 {
        match *self {
            Recurrence::Zigzag { lambda_h } => lambda_h * lambda_h,
            Recurrence::ZigzagModified { lambda } => lambda.powi(3),
            Recurrence::Replacement { lambda1, .. } => lambda1,
        }
    }

    pub fn step(&self, x: f64) -> Result<f64, IterateError> {
        match *self {
            Recurrence::Zigzag { lambda_h: h } => Ok(x * x + h + h * h),
            Recurrence::ZigzagModified { lambda: l } => Ok(x.powi(3) + l + l * l),
            Recurrence::Replacement { lambda2, d, power, .. } => {
                Ok(replacement_bound(x.clamp(0.0, 1.0).powi(power as i32), lambda2, d, FVariant::Sqrt)?)
            }
        }
    }

    fn validate(&self) -> Result<(), IterateError> {
        let unit = |name: &'static str, value: f64| {
            if (0.0..=1.0).contains(&value) {
                Ok(())
            } else {
                Err(IterateError::OutOfRange { name, value })
            }
        };
        match *self {
            Recurrence::Zigzag { lambda_h } => unit("lambda_h", lambda_h),
            Recurrence::ZigzagModified { lambda } => unit("lambda", lambda),
            Recurrence::Replacement { lambda1, lambda2, d, power } => {
                unit("lambda1", lambda1)?;
                unit("lambda2", lambda2)?;
                if d == 0 {
                    return Err(IterateError::OutOfRange { name: "d", value: 0.0 });
                }
                if power == 0 {
                    return Err(IterateError::OutOfRange { name: "power", value: 0.0 });
                }
                Ok(())
            }
        }
    }

    /// The first `levels` terms `λ₁, λ₂, …`.
    pub fn sequence(&self, levels: usize) -> Result<Vec<f64>, IterateError> {
        self.validate()?;
        let mut out = Vec::with_capacity(levels);
        let mut x = self.start();
        for _ in 0..levels {
            out.push(x);
            x = self.step(x)?;
        }
        Ok(out)
    }
}

/// Iterates the recurrence until successive terms differ by less than
/// `1e-10` or `10⁵` steps pass. Sequences that exceed one, stop being
/// finite, or settle within `1e-6` of one are reported as divergent, since
/// they certify no expansion.
pub fn recurrence_fixed_point(r: &Recurrence) -> Result<f64, IterateError> {
    r.validate()?;
    let mut x = r.start();
    for steps in 1..=FIXED_POINT_MAX_STEPS {
        let next = r.step(x)?;
        if !next.is_finite() || next > 1.0 {
            return Err(IterateError::Divergent { value: next, steps });
        }
        let done = (next - x).abs() < FIXED_POINT_TOLERANCE;
        x = next;
        if done {
            break;
        }
    }
    if x >= 1.0 - DIVERGENCE_MARGIN {
        return Err(IterateError::Divergent { value: x, steps: FIXED_POINT_MAX_STEPS });
    }
    Ok(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterateConfig {
    pub levels: usize,
    /// Largest vertex count (both sides for bipartite levels) to construct.
    pub budget: usize,
    /// Largest constructed level whose eigenvalue is measured.
    pub measure_limit: usize,
    pub seed: u64,
}

impl Default for IterateConfig {
    fn default() -> Self {
        IterateConfig { levels: 3, budget: DEFAULT_BUDGET, measure_limit: DEFAULT_MEASURE_LIMIT, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub num_left: u128,
    pub num_right: Option<u128>,
    pub left_degree: u128,
    pub right_degree: Option<u128>,
    /// Bound recurrence value, capped at one.
    pub lambda_bound: f64,
    pub measured_lambda: Option<f64>,
    pub constructed: bool,
    /// `measured ≤ bound + 1e-6`, when measured.
    pub bound_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub family: FamilyKind,
    pub seed: u64,
    pub seed_lambda: f64,
    /// The seed graphs meet the family's eigenvalue and degree preconditions.
    pub precondition: bool,
    pub recurrence: Recurrence,
    pub levels: Vec<LevelRecord>,
}

impl IterationTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

fn measure<G: crate::spectral::Normalize + ?Sized>(g: &G, vertices: usize, cfg: &IterateConfig) -> Option<f64> {
    if vertices > cfg.measure_limit {
        return None;
    }
    expansion(g, cfg.seed).ok()
}

fn record(level: usize, size: (u128, Option<u128>), deg: (u128, Option<u128>), bound: f64, measured: Option<f64>, constructed: bool) -> LevelRecord {
    let lambda_bound = bound.min(1.0);
    LevelRecord {
        level,
        num_left: size.0,
        num_right: size.1,
        left_degree: deg.0,
        right_degree: deg.1,
        lambda_bound,
        measured_lambda: measured,
        constructed,
        bound_ok: measured.map(|m| m <= lambda_bound + crate::products::BOUND_SLACK),
    }
}

fn check_budget(vertices: u128, cfg: &IterateConfig) -> Result<(), IterateError> {
    if vertices > cfg.budget as u128 {
        return Err(IterateError::LevelBudget { vertices, budget: cfg.budget });
    }
    Ok(())
}

/// `G₁ = H²`, `G_{i+1} = G_i² ⓩ H`; level `i` has `D^{4i}` vertices and
/// degree `D²`.
pub fn iterate_zigzag(h: &RotationGraph, cfg: &IterateConfig) -> Result<IterationTrace, IterateError> {
    let d = h.degree() as u128;
    if h.num_vertices() as u128 != d.pow(4) {
        return Err(IterateError::SizeMismatch(format!(
            "H must be (D⁴, D): D = {d} but it has {} vertices",
            h.num_vertices()
        )));
    }
    check_budget(d.pow(4), cfg)?;
    let lambda_h = expansion(h, cfg.seed)?;
    let recurrence = Recurrence::Zigzag { lambda_h };
    let bounds = recurrence.sequence(cfg.levels)?;
    let mut levels = Vec::new();
    let mut current = Some(h.square());
    for (i, &bound) in bounds.iter().enumerate() {
        let level = i + 1;
        let n = d.checked_pow(4 * level as u32);
        let size = (n.unwrap_or(u128::MAX), None);
        if level > 1 {
            current = match (current.take(), n) {
                (Some(g), Some(n)) if n <= cfg.budget as u128 => Some(zigzag(&g.square(), h)?),
                _ => None,
            };
        }
        let measured = current.as_ref().and_then(|g| measure(g, g.num_vertices(), cfg));
        if let Some(g) = &current {
            debug_assert_eq!(g.num_vertices() as u128, size.0);
            debug_assert_eq!(g.degree() as u128, d * d);
        }
        levels.push(record(level, size, (d * d, None), bound, measured, current.is_some()));
    }
    Ok(IterationTrace {
        family: FamilyKind::ZigzagOriginal,
        seed: cfg.seed,
        seed_lambda: lambda_h,
        precondition: lambda_h <= 0.2 + crate::products::BOUND_SLACK,
        recurrence,
        levels,
    })
}

/// `G₁ = H³`, `G_{i+1} = G_i³ ⓩᴹ H`; level `i` has
/// `(c^{4i} d^{5i}, c^{4i+1} d^{5i−1})` vertices and degrees `(c²d, cd²)`.
pub fn iterate_zigzag_modified(h: &BipartiteRotationGraph, cfg: &IterateConfig) -> Result<IterationTrace, IterateError> {
    let (c, d) = (h.left_degree() as u128, h.right_degree() as u128);
    let (n_h, m_h) = (c.pow(4) * d.pow(5), c.pow(5) * d.pow(4));
    if (h.num_left() as u128, h.num_right() as u128) != (n_h, m_h) {
        return Err(IterateError::SizeMismatch(format!(
            "H must live on (c⁴d⁵, c⁵d⁴) = ({n_h}, {m_h}), found ({}, {})",
            h.num_left(),
            h.num_right()
        )));
    }
    check_budget(n_h + m_h, cfg)?;
    let lambda = expansion(h, cfg.seed)?;
    let recurrence = Recurrence::ZigzagModified { lambda };
    let bounds = recurrence.sequence(cfg.levels)?;
    let mut levels = Vec::new();
    let mut current = Some(h.power(3)?);
    for (i, &bound) in bounds.iter().enumerate() {
        let level = i as u32 + 1;
        let n = c.checked_pow(4 * level).zip(d.checked_pow(5 * level)).and_then(|(a, b)| a.checked_mul(b));
        let m = c.checked_pow(4 * level + 1).zip(d.checked_pow(5 * level - 1)).and_then(|(a, b)| a.checked_mul(b));
        let total = n.zip(m).and_then(|(a, b)| a.checked_add(b));
        if level > 1 {
            current = match (current.take(), total) {
                (Some(g), Some(t)) if t <= cfg.budget as u128 => Some(zigzag_modified(&g.power(3)?, h)?),
                _ => None,
            };
        }
        let measured = current.as_ref().and_then(|g| measure(g, g.num_left() + g.num_right(), cfg));
        if let Some(g) = &current {
            debug_assert_eq!((g.num_left() as u128, g.num_right() as u128), (n.unwrap(), m.unwrap()));
        }
        levels.push(record(
            level as usize,
            (n.unwrap_or(u128::MAX), Some(m.unwrap_or(u128::MAX))),
            (c * c * d, Some(c * d * d)),
            bound,
            measured,
            current.is_some(),
        ));
    }
    Ok(IterationTrace {
        family: FamilyKind::ZigzagModified,
        seed: cfg.seed,
        seed_lambda: lambda,
        precondition: lambda <= 0.296 + crate::products::BOUND_SLACK,
        recurrence,
        levels,
    })
}

/// `G_{i+1} = G_i⁴ ⓡ H`; level `i` has `N(d+1)^{4(i−1)}` vertices and degree
/// `d + 1`.
pub fn iterate_replacement(
    g1: &RotationGraph,
    h: &RotationGraph,
    cfg: &IterateConfig,
) -> Result<IterationTrace, IterateError> {
    let d = h.degree() as u128;
    if g1.degree() as u128 != d + 1 || h.num_vertices() as u128 != (d + 1).pow(4) {
        return Err(IterateError::SizeMismatch(format!(
            "need G₁ (N, d+1) and H ((d+1)⁴, d); got G₁ degree {}, H degree {} on {} vertices",
            g1.degree(),
            h.degree(),
            h.num_vertices()
        )));
    }
    check_budget(g1.num_vertices() as u128, cfg)?;
    let lambda1 = expansion(g1, cfg.seed)?;
    let lambda2 = expansion(h, cfg.seed)?;
    let recurrence = Recurrence::Replacement { lambda1, lambda2, d: d as usize, power: 4 };
    let bounds = recurrence.sequence(cfg.levels)?;
    let big = g1.num_vertices() as u128;
    let mut levels = Vec::new();
    let mut current = Some(g1.clone());
    for (i, &bound) in bounds.iter().enumerate() {
        let level = i as u32 + 1;
        let n = (d + 1).checked_pow(4 * (level - 1)).and_then(|x| x.checked_mul(big));
        if level > 1 {
            current = match (current.take(), n) {
                (Some(g), Some(n)) if n <= cfg.budget as u128 => Some(replacement(&g.repeated_square(2), h)?),
                _ => None,
            };
        }
        let measured = current.as_ref().and_then(|g| measure(g, g.num_vertices(), cfg));
        levels.push(record(level as usize, (n.unwrap_or(u128::MAX), None), (d + 1, None), bound, measured, current.is_some()));
    }
    Ok(IterationTrace {
        family: FamilyKind::Replacement,
        seed: cfg.seed,
        seed_lambda: lambda2,
        precondition: lambda1 <= 0.2 + crate::products::BOUND_SLACK
            && lambda2 <= 0.2 + crate::products::BOUND_SLACK
            && d >= 6,
        recurrence,
        levels,
    })
}

/// Seed-graph shape for [`run_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedShape {
    /// `D` for `zz`, `d` for `rep`, `d₂` for `zzm`.
    pub degree: usize,
    /// `c₂` for `zzm`.
    pub left_degree: usize,
    /// `N` for `rep`.
    pub base_vertices: usize,
}

impl SeedShape {
    pub fn default_for(family: FamilyKind) -> Self {
        match family {
            FamilyKind::ZigzagOriginal => SeedShape { degree: 4, left_degree: 0, base_vertices: 0 },
            FamilyKind::ZigzagModified => SeedShape { degree: 2, left_degree: 2, base_vertices: 0 },
            FamilyKind::Replacement => SeedShape { degree: 6, left_degree: 0, base_vertices: 8 },
        }
    }
}

/// Draws random seed graphs of the given shape from `cfg.seed` and traces the
/// family.
pub fn run_family(family: FamilyKind, shape: SeedShape, cfg: &IterateConfig) -> Result<IterationTrace, IterateError> {
    match family {
        FamilyKind::ZigzagOriginal => {
            let d = shape.degree;
            let h = random_regular(d.pow(4), d, cfg.seed, true)?;
            iterate_zigzag(&h, cfg)
        }
        FamilyKind::ZigzagModified => {
            let (c, d) = (shape.left_degree, shape.degree);
            let h = random_biregular(c.pow(4) * d.pow(5), c.pow(5) * d.pow(4), c, d, cfg.seed, true)?;
            iterate_zigzag_modified(&h, cfg)
        }
        FamilyKind::Replacement => {
            let d = shape.degree;
            let g1 = random_regular(shape.base_vertices, d + 1, cfg.seed, true)?;
            let h = random_regular((d + 1).pow(4), d, cfg.seed.wrapping_add(1), true)?;
            iterate_replacement(&g1, &h, cfg)
        }
    }
}
