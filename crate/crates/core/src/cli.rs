//! Command-line front end.
//!
//! Every subcommand that writes files also writes `<out>.manifest.json`,
//! which records the expanded argument list, parameters, seeds and the
//! SHA-256 of each output; `repro <manifest>` reruns the command into a
//! scratch directory and compares digests. `--config file.json` supplies
//! flags as a JSON object (`{"max-frames": 1000, "early-stop": true}`); flags
//! given on the command line win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cayley::{CayleyGraph, CayleyProduct, CayleySpec, Family};
use crate::gldpc::{assemble, subcode_library, Assignment, GldpcCode, TannerGraph};
use crate::graph::{
    complete, complete_bipartite, cycle, double_cover_of, is_connected, random_biregular, random_regular,
    BipartiteRotationGraph, EdgeKind, EdgeList, RotationGraph,
};
use crate::iterate::{recurrence_fixed_point, run_family, FamilyKind, IterateConfig, SeedShape};
use crate::presets::{build_preset, full_degree_cayley, subcode_for_degree, Example, PresetInfo, PresetParams};
use crate::products::{
    random_instance, replacement, verify_bipartite, verify_regular, zigzag, zigzag_bipartite, zigzag_modified,
    Instance, ProductKind,
};
use crate::sim::{simulate, uncoded_ber, write_csv_file, SimConfig};
use crate::spectral::{lambda2, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[command(name = "expander-codes", version, about = "Expander graph products and GLDPC codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Generate a random or structured graph.
    #[command(args_override_self = true)]
    Graph(GraphArgs),
    /// Form a graph product and check its bounds.
    #[command(args_override_self = true)]
    Product(ProductArgs),
    /// Build a Cayley graph of a semidirect product group.
    #[command(args_override_self = true)]
    Cayley(CayleyArgs),
    /// Second eigenvalue of a graph's normalized adjacency matrix.
    #[command(args_override_self = true)]
    Spectral(SpectralArgs),
    /// Assemble a GLDPC code from a graph or a named example.
    #[command(args_override_self = true)]
    Code(CodeArgs),
    /// AWGN Monte Carlo simulation of a code.
    #[command(args_override_self = true)]
    Sim(SimArgs),
    /// Trace an iterative expander family.
    #[command(args_override_self = true)]
    Iterate(IterateArgs),
    /// Rerun a manifest and compare output digests.
    #[command(args_override_self = true)]
    Repro(ReproArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    RandomRegular,
    RandomBiregular,
    Cycle,
    Complete,
    CompleteBipartite,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GraphArgs {
    #[arg(long, value_enum)]
    pub kind: GraphKind,
    /// Vertex count (left count for bipartite kinds).
    #[arg(long)]
    pub n: usize,
    /// Right vertex count for bipartite kinds.
    #[arg(long)]
    pub m: Option<usize>,
    /// Degree (right degree for biregular graphs).
    #[arg(long)]
    pub d: Option<usize>,
    /// Left degree for biregular graphs.
    #[arg(long)]
    pub c: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow parallel edges and self-loops.
    #[arg(long)]
    pub multigraph: bool,
    /// `.json` writes the rotation map, anything else an edge list.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ProductArgs {
    /// zz, rep, zb or zm.
    #[arg(long)]
    pub kind: String,
    #[arg(long, requires = "g2", conflicts_with = "random")]
    pub g1: Option<PathBuf>,
    #[arg(long, requires = "g1")]
    pub g2: Option<PathBuf>,
    /// Draw a random component pair from this seed instead of reading files.
    #[arg(long)]
    pub random: Option<u64>,
    /// Seed for spectral measurements.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Write the bound certificate (eigenvalue, girth, diameter) as JSON.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CayleyArgs {
    /// shift or mobius.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub k: usize,
    /// zigzag or replacement.
    #[arg(long, default_value = "zigzag")]
    pub product: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated representatives instead of random ones.
    #[arg(long)]
    pub reps: Option<String>,
    /// Reject non-symmetric shift-family sets instead of closing them.
    #[arg(long)]
    pub no_symmetrize: bool,
    /// Advance the seed until no generators collide.
    #[arg(long)]
    pub full_degree: bool,
    /// Undirected graph, or the bipartite double cover of a directed one.
    #[arg(long)]
    pub out: PathBuf,
    /// The Cayley (di)graph itself as an edge list.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Generators and degree as JSON.
    #[arg(long)]
    pub info: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Dense,
    Lanczos,
    Auto,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SpectralArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CodeArgs {
    /// Named construction: 4.1, 4.1r, 4.2, 4.2r, 4.3, shift-zigzag,
    /// shift-replacement, mobius-zigzag, mobius-replacement,
    /// bipartite-zigzag, random-regular, random-biregular.
    #[arg(long, conflicts_with = "graph")]
    pub example: Option<String>,
    /// Graph file to use as the Tanner graph.
    #[arg(long, required_unless_present = "example")]
    pub graph: Option<PathBuf>,
    /// Subcode for all vertices (left side when bipartite).
    #[arg(long)]
    pub subcode: Option<String>,
    /// Subcode for the right side of a bipartite graph.
    #[arg(long)]
    pub right_subcode: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Code as JSON: graph, subcodes and global parity-check matrix.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub alist: Option<PathBuf>,
    /// Block length, rates and construction parameters as JSON.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SimArgs {
    /// Code JSON written by `code`.
    #[arg(long)]
    pub code: PathBuf,
    /// `start:step:stop` or a comma-separated list, in dB.
    #[arg(long, default_value = "1:1:4")]
    pub snr: String,
    #[arg(long, default_value_t = 10_000)]
    pub max_frames: u64,
    #[arg(long, default_value_t = 100)]
    pub max_errors: u64,
    #[arg(long, default_value_t = crate::decode::DEFAULT_MAX_ITERATIONS)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to all cores. Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = crate::sim::DEFAULT_BATCH)]
    pub batch: usize,
    /// Run every frame for the full iteration count.
    #[arg(long)]
    pub no_early_stop: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct IterateArgs {
    /// zz, zzm or rep.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Largest vertex count to construct, as an integer or `2^k`.
    #[arg(long, default_value = "2^20")]
    pub budget: String,
    /// Largest constructed level to measure spectrally.
    #[arg(long, default_value_t = crate::iterate::DEFAULT_MEASURE_LIMIT)]
    pub measure_limit: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// D for zz, d for rep, d₂ for zzm.
    #[arg(long)]
    pub degree: Option<usize>,
    /// c₂ for zzm.
    #[arg(long)]
    pub left_degree: Option<usize>,
    /// Vertex count of G₁ for rep.
    #[arg(long)]
    pub base_vertices: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReproArgs {
    pub manifest: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, with any config file expanded.
    pub argv: Vec<String>,
    pub cwd: PathBuf,
    pub params: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub outputs: Vec<OutputRecord>,
    pub version: String,
    pub wall_time_s: f64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Graph(_) => "graph",
            Command::Product(_) => "product",
            Command::Cayley(_) => "cayley",
            Command::Spectral(_) => "spectral",
            Command::Code(_) => "code",
            Command::Sim(_) => "sim",
            Command::Iterate(_) => "iterate",
            Command::Repro(_) => "repro",
        }
    }

    /// Output paths in a fixed order; the first is the primary output.
    fn outputs_mut(&mut self) -> Vec<&mut PathBuf> {
        let mut v: Vec<&mut PathBuf> = Vec::new();
        match self {
            Command::Graph(a) => {
                v.push(&mut a.out);
                v.extend(a.dot.as_mut());
            }
            Command::Product(a) => {
                v.push(&mut a.out);
                v.extend(a.certificate.as_mut());
                v.extend(a.dot.as_mut());
            }
            Command::Cayley(a) => {
                v.push(&mut a.out);
                v.extend(a.edges.as_mut());
                v.extend(a.info.as_mut());
            }
            Command::Spectral(a) => v.extend(a.out.as_mut()),
            Command::Code(a) => {
                v.push(&mut a.out);
                v.extend(a.alist.as_mut());
                v.extend(a.meta.as_mut());
            }
            Command::Sim(a) => v.push(&mut a.out),
            Command::Iterate(a) => v.push(&mut a.out),
            Command::Repro(_) => {}
        }
        v
    }

    fn inputs_mut(&mut self) -> Vec<&mut PathBuf> {
        match self {
            Command::Product(a) => a.g1.iter_mut().chain(a.g2.iter_mut()).collect(),
            Command::Spectral(a) => vec![&mut a.graph],
            Command::Code(a) => a.graph.iter_mut().collect(),
            Command::Sim(a) => vec![&mut a.code],
            Command::Repro(a) => vec![&mut a.manifest],
            _ => Vec::new(),
        }
    }
}

/// Runs the command line (without the program name) and returns the exit
/// code: 0 on success, 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = match args.into_iter().map(|a| a.into().into_string()).collect::<Result<_, _>>() {
        Ok(a) => a,
        Err(_) => {
            eprintln!("error: arguments must be valid UTF-8");
            return EXIT_USAGE;
        }
    };
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(std::iter::once("expander-codes".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(cli.command, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_DOMAIN
        }
    }
}

/// Replaces `--config FILE` by the flags it holds, placed right after the
/// subcommand so explicit flags override them.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| anyhow!("--config needs a file"))?);
        } else if let Some(path) = a.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing config {path}"))?;
    let obj = value.as_object().ok_or_else(|| anyhow!("config {path} must hold a JSON object"))?;
    let mut flags = Vec::new();
    for (key, v) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            serde_json::Value::Null | serde_json::Value::Bool(false) => {}
            serde_json::Value::Bool(true) => flags.push(flag),
            serde_json::Value::String(s) => flags.extend([flag, s.clone()]),
            serde_json::Value::Number(n) => flags.extend([flag, n.to_string()]),
            serde_json::Value::Array(items) => {
                let joined: Vec<String> = items
                    .iter()
                    .map(|x| match x {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                flags.extend([flag, joined.join(",")]);
            }
            serde_json::Value::Object(_) => bail!("config key `{key}` holds an object"),
        }
    }
    let pos = rest.iter().position(|a| !a.starts_with('-')).map_or(rest.len(), |p| p + 1);
    rest.splice(pos..pos, flags);
    Ok(rest)
}

fn dispatch(mut command: Command, argv: Vec<String>) -> Result<i32> {
    if let Command::Repro(a) = &command {
        return repro(&a.manifest);
    }
    let start = Instant::now();
    let cwd = std::env::current_dir()?;
    execute(&command)?;
    let outputs: Vec<PathBuf> = command.outputs_mut().into_iter().map(|p| p.clone()).collect();
    if let Some(primary) = outputs.first() {
        let records = outputs
            .iter()
            .map(|p| Ok(OutputRecord { path: p.clone(), sha256: sha256_file(p)? }))
            .collect::<Result<Vec<_>>>()?;
        let params = serde_json::to_value(&command)?;
        let mut seeds = BTreeMap::new();
        collect_seeds(&params, "", &mut seeds);
        let manifest = RunManifest {
            command: command.name().to_string(),
            argv,
            cwd,
            params,
            seeds,
            outputs: records,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: start.elapsed().as_secs_f64(),
        };
        let path = manifest_path(primary);
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        println!("manifest {}", path.display());
    }
    Ok(EXIT_OK)
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut s = primary.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn collect_seeds(v: &serde_json::Value, prefix: &str, out: &mut BTreeMap<String, u64>) {
    if let serde_json::Value::Object(map) = v {
        for (k, x) in map {
            let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
            if k.contains("seed") || k == "random" {
                if let Some(s) = x.as_u64() {
                    out.insert(key.clone(), s);
                }
            }
            collect_seeds(x, &key, out);
        }
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn repro(manifest_file: &Path) -> Result<i32> {
    let text = fs::read_to_string(manifest_file).with_context(|| format!("reading {}", manifest_file.display()))?;
    let manifest: RunManifest = serde_json::from_str(&text).context("parsing manifest")?;
    let cli = Cli::try_parse_from(std::iter::once("expander-codes".to_string()).chain(manifest.argv.iter().cloned()))
        .map_err(|e| anyhow!("manifest arguments no longer parse: {e}"))?;
    let mut command = cli.command;
    if matches!(command, Command::Repro(_)) {
        bail!("a manifest cannot describe a repro run");
    }
    for p in command.inputs_mut() {
        if p.is_relative() {
            *p = manifest.cwd.join(&*p);
        }
    }
    let scratch = tempfile::tempdir()?;
    for (i, p) in command.outputs_mut().into_iter().enumerate() {
        let name = p.file_name().map(|n| n.to_os_string()).unwrap_or_else(|| "out".into());
        let mut file = OsString::from(format!("{i}-"));
        file.push(name);
        *p = scratch.path().join(file);
    }
    execute(&command)?;
    let fresh: Vec<PathBuf> = command.outputs_mut().into_iter().map(|p| p.clone()).collect();
    if fresh.len() != manifest.outputs.len() {
        bail!("manifest lists {} outputs, rerun produced {}", manifest.outputs.len(), fresh.len());
    }
    let mut all_match = true;
    for (record, path) in manifest.outputs.iter().zip(&fresh) {
        let digest = sha256_file(path)?;
        let same = digest == record.sha256;
        all_match &= same;
        println!("{} {}", if same { "identical" } else { "DIFFERS" }, record.path.display());
    }
    Ok(if all_match { EXIT_OK } else { EXIT_DOMAIN })
}

fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Graph(a) => cmd_graph(a),
        Command::Product(a) => cmd_product(a),
        Command::Cayley(a) => cmd_cayley(a),
        Command::Spectral(a) => cmd_spectral(a),
        Command::Code(a) => cmd_code(a),
        Command::Sim(a) => cmd_sim(a),
        Command::Iterate(a) => cmd_iterate(a),
        Command::Repro(_) => unreachable!("handled by dispatch"),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Reads a rotation-map JSON file, or an edge list whose ports are assigned
/// in edge order. Directed lists become their bipartite double cover.
pub fn load_graph(path: &Path) -> Result<TannerGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if is_json(path) {
        let g: TannerGraph = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        match &g {
            TannerGraph::Regular(r) => r.validate()?,
            TannerGraph::Bipartite(b) => b.validate()?,
        }
        return Ok(g);
    }
    let list = EdgeList::parse(&text)?;
    Ok(match list.kind {
        EdgeKind::Undirected => TannerGraph::Regular(RotationGraph::from_edge_list(&list, 0)?),
        EdgeKind::Bipartite => TannerGraph::Bipartite(BipartiteRotationGraph::from_edge_list(&list, 0)?),
        EdgeKind::Directed => TannerGraph::Bipartite(double_cover_of(&list, 0)?),
    })
}

pub fn save_graph(g: &TannerGraph, path: &Path) -> Result<()> {
    if is_json(path) {
        return write(path, &(serde_json::to_string(g)? + "\n"));
    }
    let list = match g {
        TannerGraph::Regular(r) => r.to_edge_list()?,
        TannerGraph::Bipartite(b) => b.to_edge_list(),
    };
    write(path, &list.to_text())
}

fn save_dot(g: &TannerGraph, path: &Path) -> Result<()> {
    let dot = match g {
        TannerGraph::Regular(r) => r.to_dot()?,
        TannerGraph::Bipartite(b) => b.to_dot()?,
    };
    write(path, &dot)
}

fn describe(g: &TannerGraph) -> String {
    match g {
        TannerGraph::Regular(r) => format!(
            "{} vertices, degree {}, {} edges, connected {}",
            r.num_vertices(),
            r.degree(),
            r.num_edges(),
            is_connected(r)
        ),
        TannerGraph::Bipartite(b) => format!(
            "({}, {}) vertices, degrees ({}, {}), {} edges, connected {}",
            b.num_left(),
            b.num_right(),
            b.left_degree(),
            b.right_degree(),
            b.num_edges(),
            is_connected(b)
        ),
    }
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| anyhow!("--{name} is required for this graph kind"))
}

fn cmd_graph(a: &GraphArgs) -> Result<()> {
    let simple = !a.multigraph;
    let g = match a.kind {
        GraphKind::RandomRegular => TannerGraph::Regular(random_regular(a.n, need(a.d, "d")?, a.seed, simple)?),
        GraphKind::RandomBiregular => TannerGraph::Bipartite(random_biregular(
            a.n,
            need(a.m, "m")?,
            need(a.c, "c")?,
            need(a.d, "d")?,
            a.seed,
            simple,
        )?),
        GraphKind::Cycle => TannerGraph::Regular(cycle(a.n, a.seed)?),
        GraphKind::Complete => TannerGraph::Regular(complete(a.n, a.seed)?),
        GraphKind::CompleteBipartite => TannerGraph::Bipartite(complete_bipartite(a.n, need(a.m, "m")?, a.seed)?),
    };
    save_graph(&g, &a.out)?;
    if let Some(dot) = &a.dot {
        save_dot(&g, dot)?;
    }
    println!("{}", describe(&g));
    Ok(())
}

fn cmd_product(a: &ProductArgs) -> Result<()> {
    let kind: ProductKind = a.kind.parse().map_err(|e: String| anyhow!(e))?;
    let instance = match (&a.g1, &a.g2, a.random) {
        (Some(p1), Some(p2), _) => match (load_graph(p1)?, load_graph(p2)?) {
            (TannerGraph::Regular(g1), TannerGraph::Regular(g2)) if !kind.is_bipartite() => Instance::Regular { g1, g2 },
            (TannerGraph::Bipartite(g1), TannerGraph::Bipartite(g2)) if kind.is_bipartite() => {
                Instance::Bipartite { g1, g2 }
            }
            _ => bail!("{kind:?} needs two {} component graphs", if kind.is_bipartite() { "bipartite" } else { "regular" }),
        },
        (_, _, Some(seed)) => random_instance(kind, seed)?,
        _ => bail!("give --g1 and --g2, or --random SEED"),
    };
    let (graph, cert) = match &instance {
        Instance::Regular { g1, g2 } => {
            let p = if kind == ProductKind::Zigzag { zigzag(g1, g2)? } else { replacement(g1, g2)? };
            let cert = match &a.certificate {
                Some(_) => Some(verify_regular(kind, &p, g1, g2, a.seed)?),
                None => None,
            };
            (TannerGraph::Regular(p), cert)
        }
        Instance::Bipartite { g1, g2 } => {
            let p = if kind == ProductKind::ZigzagBipartite { zigzag_bipartite(g1, g2)? } else { zigzag_modified(g1, g2)? };
            let cert = match &a.certificate {
                Some(_) => Some(verify_bipartite(kind, &p, g1, g2, a.seed)?),
                None => None,
            };
            (TannerGraph::Bipartite(p), cert)
        }
    };
    save_graph(&graph, &a.out)?;
    if let Some(dot) = &a.dot {
        save_dot(&graph, dot)?;
    }
    println!("{kind:?}: {}", describe(&graph));
    if let (Some(path), Some(cert)) = (&a.certificate, cert) {
        println!(
            "measured {:.6} bound {:.6} ({}), girth {}",
            cert.measured_lambda,
            cert.bound,
            if cert.bound_ok { "ok" } else { "VIOLATED" },
            cert.girth
        );
        write(path, &(serde_json::to_string_pretty(&cert)? + "\n"))?;
    }
    Ok(())
}

fn parse_reps(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(|x| x.trim().parse::<u64>().with_context(|| format!("bad representative `{x}`"))).collect()
}

#[derive(Serialize)]
struct CayleyInfo<'a> {
    spec: &'a CayleySpec,
    reps: &'a [u64],
    generators: Vec<(u64, usize)>,
    degree: usize,
    nominal_degree: usize,
    symmetrized: bool,
    num_vertices: usize,
}

fn cmd_cayley(a: &CayleyArgs) -> Result<()> {
    let family: Family = a.family.parse().map_err(|e: String| anyhow!(e))?;
    let product: CayleyProduct = a.product.parse().map_err(|e: String| anyhow!(e))?;
    let mut spec = CayleySpec::new(family, a.p, a.k, product, a.seed);
    spec.symmetrize = !a.no_symmetrize;
    spec.reps = a.reps.as_deref().map(parse_reps).transpose()?;
    let b = if a.full_degree { full_degree_cayley(&spec)? } else { crate::cayley::build(&spec)? };
    let graph = match &b.graph {
        CayleyGraph::Undirected(g) => TannerGraph::Regular(g.clone()),
        CayleyGraph::Directed(_) => TannerGraph::Bipartite(b.graph.to_bipartite(b.spec.seed)?.expect("directed")),
    };
    save_graph(&graph, &a.out)?;
    if let Some(path) = &a.edges {
        let list = match &b.graph {
            CayleyGraph::Undirected(g) => g.to_edge_list()?,
            CayleyGraph::Directed(l) => l.clone(),
        };
        write(path, &list.to_text())?;
    }
    if let Some(path) = &a.info {
        let info = CayleyInfo {
            spec: &b.spec,
            reps: &b.reps,
            generators: b.generators.iter().map(|g| (g.a, g.b)).collect(),
            degree: b.degree,
            nominal_degree: b.nominal_degree,
            symmetrized: b.symmetrized,
            num_vertices: b.graph.num_vertices(),
        };
        write(path, &(serde_json::to_string_pretty(&info)? + "\n"))?;
    }
    println!(
        "Cayley graph on {} vertices, degree {} (nominal {}), seed {}; written graph: {}",
        b.graph.num_vertices(),
        b.degree,
        b.nominal_degree,
        b.spec.seed,
        describe(&graph)
    );
    Ok(())
}

fn cmd_spectral(a: &SpectralArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let method = match a.method {
        MethodArg::Dense => Method::Dense,
        MethodArg::Lanczos => Method::Lanczos,
        MethodArg::Auto => Method::Auto,
    };
    let report = match &g {
        TannerGraph::Regular(r) => lambda2(r, method, a.seed)?,
        TannerGraph::Bipartite(b) => lambda2(b, method, a.seed)?,
    };
    println!("{}", report.summary());
    if let Some(out) = &a.out {
        write(out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CodeMeta {
    n_bits: usize,
    num_constraints: usize,
    num_checks: usize,
    design_rate: String,
    design_rate_value: f64,
    true_rate: Option<String>,
    true_rate_value: Option<f64>,
    subcodes: Vec<String>,
    example: Option<PresetInfo>,
}

fn ratio_value(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn cmd_code(a: &CodeArgs) -> Result<()> {
    let (code, preset): (GldpcCode, Option<PresetInfo>) = match (&a.example, &a.graph) {
        (Some(name), _) => {
            let example: Example = name.parse()?;
            let params =
                PresetParams { p: a.p, k: a.k, n: a.n, d: a.d, subcode: a.subcode.clone(), seed: a.seed };
            let p = build_preset(example, &params)?;
            (p.code, Some(p.info))
        }
        (None, Some(path)) => {
            let graph = load_graph(path)?;
            let pick = |name: &Option<String>, degree: usize| match name {
                Some(n) => Ok(subcode_library(n)?),
                None => subcode_for_degree(degree).map_err(anyhow::Error::from),
            };
            let assignment = match &graph {
                TannerGraph::Regular(r) => Assignment::Uniform(pick(&a.subcode, r.degree())?),
                TannerGraph::Bipartite(b) => Assignment::Sides {
                    left: pick(&a.subcode, b.left_degree())?,
                    right: pick(&a.right_subcode, b.right_degree())?,
                },
            };
            (assemble(graph, &assignment)?, None)
        }
        (None, None) => bail!("give --example or --graph"),
    };
    let design = code.design_rate();
    let true_rate = code.true_rate().ok();
    write(&a.out, &(code.to_json() + "\n"))?;
    if let Some(path) = &a.alist {
        write(path, &code.h_global.to_alist())?;
    }
    let meta = CodeMeta {
        n_bits: code.n_bits,
        num_constraints: code.graph.num_constraints(),
        num_checks: code.num_checks(),
        design_rate: design.to_string(),
        design_rate_value: ratio_value(design),
        true_rate: true_rate.map(|r| r.to_string()),
        true_rate_value: true_rate.map(ratio_value),
        subcodes: code.codes.iter().map(|c| c.name.clone()).collect(),
        example: preset,
    };
    if let Some(path) = &a.meta {
        write(path, &(serde_json::to_string_pretty(&meta)? + "\n"))?;
    }
    println!(
        "{} bits, {} constraints, design rate {} = {:.5}, true rate {}",
        meta.n_bits,
        meta.num_constraints,
        meta.design_rate,
        meta.design_rate_value,
        match (&meta.true_rate, meta.true_rate_value) {
            (Some(r), Some(v)) => format!("{r} = {v:.5}"),
            _ => "not computed (block too long)".to_string(),
        }
    );
    Ok(())
}

/// `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_snr(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts[..] {
        [start, step, stop] => {
            let (start, step, stop): (f64, f64, f64) = (start.trim().parse()?, step.trim().parse()?, stop.trim().parse()?);
            if step <= 0.0 || stop < start || !start.is_finite() || !stop.is_finite() {
                bail!("SNR range `{s}` must have a positive step and stop ≥ start");
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect()
        }
        [_] => s.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>()?,
        _ => bail!("SNR must be `start:step:stop` or a comma-separated list"),
    };
    Ok(values)
}

fn cmd_sim(a: &SimArgs) -> Result<()> {
    let text = fs::read_to_string(&a.code).with_context(|| format!("reading {}", a.code.display()))?;
    let code = GldpcCode::from_json(&text)?;
    let config = SimConfig {
        snr_db: parse_snr(&a.snr)?,
        max_frames: a.max_frames,
        max_errors: a.max_errors,
        max_iterations: a.iters,
        seed: a.seed,
        early_stop: !a.no_early_stop,
        threads: a.threads,
        batch: a.batch,
    };
    let points = simulate(&code, &config)?;
    write_csv_file(&points, &a.out)?;
    println!("snr_db frames bit_errors frame_errors ber fer avg_iterations uncoded_ber");
    for p in &points {
        println!(
            "{} {} {} {} {:.4e} {:.4e} {:.2} {:.4e}",
            p.snr_db,
            p.frames,
            p.bit_errors,
            p.frame_errors,
            p.ber,
            p.fer,
            p.avg_iterations,
            uncoded_ber(p.snr_db)
        );
    }
    Ok(())
}

/// An integer or `b^e`.
pub fn parse_budget(s: &str) -> Result<usize> {
    match s.split_once('^') {
        Some((b, e)) => {
            let (b, e): (usize, u32) = (b.trim().parse()?, e.trim().parse()?);
            b.checked_pow(e).ok_or_else(|| anyhow!("budget `{s}` overflows"))
        }
        None => Ok(s.trim().parse()?),
    }
}

fn cmd_iterate(a: &IterateArgs) -> Result<()> {
    let family: FamilyKind = a.family.parse().map_err(|e: String| anyhow!(e))?;
    let mut shape = SeedShape::default_for(family);
    if let Some(d) = a.degree {
        shape.degree = d;
    }
    if let Some(c) = a.left_degree {
        shape.left_degree = c;
    }
    if let Some(n) = a.base_vertices {
        shape.base_vertices = n;
    }
    let cfg = IterateConfig { levels: a.levels, budget: parse_budget(&a.budget)?, measure_limit: a.measure_limit, seed: a.seed };
    let trace = run_family(family, shape, &cfg)?;
    write(&a.out, &(trace.to_json() + "\n"))?;
    println!("{family:?}: seed graph λ = {:.6}, precondition {}", trace.seed_lambda, trace.precondition);
    for l in &trace.levels {
        let size = match l.num_right {
            Some(m) => format!("({}, {})", l.num_left, m),
            None => l.num_left.to_string(),
        };
        let measured = l.measured_lambda.map_or("-".to_string(), |m| format!("{m:.6}"));
        println!(
            "level {}: {} vertices, bound {:.6}, measured {}{}",
            l.level,
            size,
            l.lambda_bound,
            measured,
            if l.constructed { "" } else { " (not constructed)" }
        );
    }
    match recurrence_fixed_point(&trace.recurrence) {
        Ok(x) => println!("bound recurrence limit {x:.6} (ceiling {})", family.ceiling()),
        Err(e) => println!("bound recurrence: {e}"),
    }
    Ok(())
}
