//! Named GLDPC constructions: Cayley zig-zag and replacement codes over both
//! group families, the unbalanced bipartite zig-zag code, and random-graph
//! baselines with the same subcodes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{build, CayleyBuild, CayleyError, CayleyGraph, CayleyProduct, CayleySpec, Family};
use crate::gldpc::{assemble, subcode_library, Assignment, GldpcCode, GldpcError, LinearCode, TannerGraph};
use crate::graph::{random_biregular, random_regular, GraphError};
use crate::products::{zigzag_bipartite, ProductError};

/// Seeds tried, starting from the requested one, before giving up on a
/// Cayley set whose generators collide.
pub const SEED_ATTEMPTS: u64 = 256;

#[derive(Debug, Error)]
pub enum PresetError {
    #[error("unknown example `{0}`")]
    Unknown(String),
    #[error("no seed in {start}..{end} gives a generating set of full degree {degree}")]
    DegreeCollapse { start: u64, end: u64, degree: usize },
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("no library subcode of length {0}; pass one explicitly")]
    NoSubcode(usize),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Gldpc(#[from] GldpcError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Product(#[from] ProductError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Example {
    ShiftZigzag,
    ShiftReplacement,
    MobiusZigzag,
    MobiusReplacement,
    BipartiteZigzag,
    RandomRegular,
    RandomBiregular,
}

impl Example {
    pub const ALL: [Example; 7] = [
        Example::ShiftZigzag,
        Example::ShiftReplacement,
        Example::MobiusZigzag,
        Example::MobiusReplacement,
        Example::BipartiteZigzag,
        Example::RandomRegular,
        Example::RandomBiregular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::ShiftZigzag => "shift-zigzag",
            Example::ShiftReplacement => "shift-replacement",
            Example::MobiusZigzag => "mobius-zigzag",
            Example::MobiusReplacement => "mobius-replacement",
            Example::BipartiteZigzag => "bipartite-zigzag",
            Example::RandomRegular => "random-regular",
            Example::RandomBiregular => "random-biregular",
        }
    }
}

impl std::str::FromStr for Example {
    type Err = PresetError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let e = match s {
            "4.1" => Example::ShiftZigzag,
            "4.1r" => Example::ShiftReplacement,
            "4.2" => Example::MobiusZigzag,
            "4.2r" => Example::MobiusReplacement,
            "4.3" => Example::BipartiteZigzag,
            other => *Example::ALL.iter().find(|e| e.name() == other).ok_or_else(|| PresetError::Unknown(s.into()))?,
        };
        Ok(e)
    }
}

/// Parameters of a named construction; unset fields take the example's
/// defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetParams {
    pub p: Option<usize>,
    pub k: Option<usize>,
    /// Vertex count for the random baselines (left count when bipartite).
    pub n: Option<usize>,
    /// Degree for the random baselines.
    pub d: Option<usize>,
    /// Subcode name, overriding the choice by degree.
    pub subcode: Option<String>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub example: Example,
    pub p: Option<usize>,
    pub k: Option<usize>,
    /// Seed that produced the graph, after skipping collapsed generator sets.
    pub seed_used: u64,
    pub num_constraints: usize,
    pub degrees: Vec<usize>,
    pub subcodes: Vec<String>,
    pub reps: Option<Vec<u64>>,
}

#[derive(Clone, Debug)]
pub struct Preset {
    pub info: PresetInfo,
    pub code: GldpcCode,
}

/// Default subcode for a constraint degree.
pub fn subcode_for_degree(d: usize) -> Result<LinearCode, PresetError> {
    let name = match d {
        7 => "[7,4]",
        9 => "[9,6]",
        15 => "[15,11]",
        16 => "[16,12]",
        20 => "[20,15]",
        25 => "[25,21]",
        _ => return Err(PresetError::NoSubcode(d)),
    };
    Ok(subcode_library(name)?)
}

fn subcode(params: &PresetParams, degree: usize) -> Result<LinearCode, PresetError> {
    match &params.subcode {
        Some(name) => Ok(subcode_library(name)?),
        None => subcode_for_degree(degree),
    }
}

/// Builds a Cayley set, moving to the next seed while duplicate generators
/// shrink the degree below its nominal value.
pub fn full_degree_cayley(spec: &CayleySpec) -> Result<CayleyBuild, PresetError> {
    for s in spec.seed..spec.seed + SEED_ATTEMPTS {
        let b = build(&CayleySpec { seed: s, ..spec.clone() })?;
        if b.degree == b.nominal_degree {
            return Ok(b);
        }
        if spec.reps.is_some() {
            return Ok(b);
        }
    }
    Err(PresetError::DegreeCollapse {
        start: spec.seed,
        end: spec.seed + SEED_ATTEMPTS,
        degree: match spec.product {
            CayleyProduct::Zigzag => spec.k * 4,
            CayleyProduct::Replacement => spec.k + 2,
        },
    })
}

fn cayley_preset(example: Example, params: &PresetParams) -> Result<Preset, PresetError> {
    let (family, product, p, k) = match example {
        Example::ShiftZigzag => (Family::Shift, CayleyProduct::Zigzag, 5, 5),
        Example::ShiftReplacement => (Family::Shift, CayleyProduct::Replacement, 11, 13),
        Example::MobiusZigzag => (Family::Mobius, CayleyProduct::Zigzag, 3, 5),
        Example::MobiusReplacement => (Family::Mobius, CayleyProduct::Replacement, 5, 13),
        _ => unreachable!(),
    };
    let (p, k) = (params.p.unwrap_or(p), params.k.unwrap_or(k));
    let b = full_degree_cayley(&CayleySpec::new(family, p, k, product, params.seed))?;
    let sub = subcode(params, b.degree)?;
    let tanner = match &b.graph {
        CayleyGraph::Undirected(g) => TannerGraph::Regular(g.clone()),
        CayleyGraph::Directed(_) => TannerGraph::Bipartite(b.graph.to_bipartite(b.spec.seed)?.expect("directed graph")),
    };
    let code = assemble(tanner, &Assignment::Uniform(sub.clone()))?;
    Ok(Preset {
        info: PresetInfo {
            example,
            p: Some(p),
            k: Some(k),
            seed_used: b.spec.seed,
            num_constraints: code.graph.num_constraints(),
            degrees: vec![b.degree],
            subcodes: vec![sub.name.clone()],
            reps: Some(b.reps),
        },
        code,
    })
}

pub fn build_preset(example: Example, params: &PresetParams) -> Result<Preset, PresetError> {
    match example {
        Example::ShiftZigzag | Example::ShiftReplacement | Example::MobiusZigzag | Example::MobiusReplacement => {
            cayley_preset(example, params)
        }
        Example::BipartiteZigzag => {
            let g1 = random_biregular(20, 12, 6, 10, params.seed, true)?;
            let g2 = random_biregular(10, 6, 3, 5, params.seed.wrapping_add(1), true)?;
            let z = zigzag_bipartite(&g1, &g2)?;
            let (left, right) = (subcode_library("[9,6]")?, subcode_library("[25,21]")?);
            let names = vec![left.name.clone(), right.name.clone()];
            let code = assemble(TannerGraph::Bipartite(z), &Assignment::Sides { left, right })?;
            Ok(Preset { info: info(example, params, &code, vec![9, 25], names), code })
        }
        Example::RandomRegular => {
            let n = params.n.ok_or(PresetError::MissingParameter("n"))?;
            let d = params.d.ok_or(PresetError::MissingParameter("d"))?;
            let sub = subcode(params, d)?;
            let g = random_regular(n, d, params.seed, true)?;
            let code = assemble(TannerGraph::Regular(g), &Assignment::Uniform(sub.clone()))?;
            Ok(Preset { info: info(example, params, &code, vec![d], vec![sub.name.clone()]), code })
        }
        Example::RandomBiregular => {
            let n = params.n.unwrap_or(200);
            let (c, d) = (9, 25);
            if (n * c) % d != 0 {
                return Err(PresetError::Graph(GraphError::Generation(format!("{n}·{c} is not divisible by {d}"))));
            }
            let g = random_biregular(n, n * c / d, c, d, params.seed, true)?;
            let (left, right) = (subcode_library("[9,6]")?, subcode_library("[25,21]")?);
            let names = vec![left.name.clone(), right.name.clone()];
            let code = assemble(TannerGraph::Bipartite(g), &Assignment::Sides { left, right })?;
            Ok(Preset { info: info(example, params, &code, vec![c, d], names), code })
        }
    }
}

fn info(example: Example, params: &PresetParams, code: &GldpcCode, degrees: Vec<usize>, subcodes: Vec<String>) -> PresetInfo {
    PresetInfo {
        example,
        p: None,
        k: None,
        seed_used: params.seed,
        num_constraints: code.graph.num_constraints(),
        degrees,
        subcodes,
        reps: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn aliases_parse() {
        assert_eq!("4.3".parse::<Example>().unwrap(), Example::BipartiteZigzag);
        assert_eq!("shift-replacement".parse::<Example>().unwrap(), Example::ShiftReplacement);
        assert!("4.9".parse::<Example>().is_err());
    }

    #[test]
    fn bipartite_example_parameters() {
        let p = build_preset(Example::BipartiteZigzag, &PresetParams::default()).unwrap();
        assert_eq!(p.code.n_bits, 1800);
        assert_eq!(p.code.design_rate(), Ratio::new(38, 75));
        assert_eq!(p.info.num_constraints, 272);
    }

    #[test]
    fn shift_zigzag_small() {
        let p = build_preset(Example::ShiftZigzag, &PresetParams::default()).unwrap();
        assert_eq!(p.info.num_constraints, 160);
        assert_eq!(p.info.degrees, vec![20]);
        assert_eq!(p.code.n_bits, 1600);
        assert_eq!(p.code.design_rate(), Ratio::new(1, 2));
    }

    #[test]
    fn random_baseline_needs_size() {
        assert!(matches!(
            build_preset(Example::RandomRegular, &PresetParams::default()),
            Err(PresetError::MissingParameter("n"))
        ));
        let p = build_preset(Example::RandomRegular, &PresetParams { n: Some(160), d: Some(20), ..Default::default() }).unwrap();
        assert_eq!(p.code.n_bits, 1600);
    }
}
