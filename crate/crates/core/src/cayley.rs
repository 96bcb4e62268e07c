//! Cayley graphs of semidirect products `A ⋊ B` with `A = 𝔽₂ⁿ`.
//!
//! Two actions are provided: the cyclic group `ℤ_p` shifting coordinates of
//! `𝔽₂ᵖ`, and `SL₂(𝔽_p)` permuting the coordinates of `𝔽₂^{P¹}` through
//! Möbius maps on the projective line `P¹ = 𝔽_p ∪ {∞}`.
//!
//! Elements of `A` are bit masks; bit `t` is coordinate `t`, and for the
//! projective line coordinate `p` stands for `∞`. Group law:
//! `(a, b)(c, d) = (a + φ_b(c), bd)` with `φ_b(x) = x ∘ b⁻¹`.

use std::collections::HashMap;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{double_cover_of, BipartiteRotationGraph, EdgeList, GraphError, RotationGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CayleyError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("prime {p} too large for the {family} family (max {max})")]
    TooLarge { family: Family, p: usize, max: usize },
    #[error("element {0:#x} does not fit in the bit-vector group")]
    InvalidElement(u64),
    #[error("generating set is not closed under inverses")]
    NonSymmetric,
    #[error("generating set contains the identity")]
    IdentityGenerator,
    #[error("need {k} distinct nonzero representatives, only {available} exist")]
    NotEnoughReps { k: usize, available: u64 },
    #[error("duplicate representative {0:#x}")]
    DuplicateRep(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A finite group with elements numbered `0..order`.
pub trait FiniteGroup {
    type Elem: Copy + Eq + Hash + std::fmt::Debug;
    fn order(&self) -> usize;
    fn index(&self, x: &Self::Elem) -> usize;
    fn element(&self, index: usize) -> Self::Elem;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Self::Elem;
}

/// A group `B` (elements numbered `0..order`) acting on `𝔽₂^bits` by
/// coordinate permutations.
pub trait ActingGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, x: usize, y: usize) -> usize;
    fn inv(&self, x: usize) -> usize;
    fn bits(&self) -> usize;
    /// `φ_g(a) = a ∘ g⁻¹`.
    fn act(&self, g: usize, a: u64) -> u64;
}

/// `ℤ_p` acting by `φ_b(x)_j = x_{(j+b) mod p}`.
#[derive(Clone, Debug)]
pub struct CyclicShift {
    p: usize,
}

impl CyclicShift {
    pub fn new(p: usize) -> Self {
        assert!((1..64).contains(&p));
        CyclicShift { p }
    }
}

impl ActingGroup for CyclicShift {
    fn order(&self) -> usize {
        self.p
    }
    fn identity(&self) -> usize {
        0
    }
    fn mul(&self, x: usize, y: usize) -> usize {
        (x + y) % self.p
    }
    fn inv(&self, x: usize) -> usize {
        (self.p - x) % self.p
    }
    fn bits(&self) -> usize {
        self.p
    }
    fn act(&self, b: usize, a: u64) -> u64 {
        let p = self.p as u32;
        let mask = (1u64 << p) - 1;
        let b = (b % self.p) as u32;
        if b == 0 {
            return a;
        }
        ((a >> b) | (a << (p - b))) & mask
    }
}

/// `SL₂(𝔽_p)` as row-major matrices `[a, b, c, d]`, acting on `P¹` by
/// `x ↦ (ax + b)/(cx + d)`.
#[derive(Clone, Debug)]
pub struct Sl2 {
    p: usize,
    elems: Vec<[usize; 4]>,
    lookup: HashMap<[usize; 4], usize>,
    inverse: Vec<usize>,
    /// `source[g][t] = g⁻¹·t`, so `φ_g(a)` has bit `t` equal to bit `source[g][t]` of `a`.
    source: Vec<Vec<u8>>,
    table: Option<Vec<u32>>,
}

/// Largest prime with a multiplication table for `SL₂(𝔽_p)`.
pub const SL2_TABLE_MAX_P: usize = 7;
/// `𝔽₂^{p+1}` must fit in a `u64`.
pub const MOBIUS_MAX_P: usize = 61;

fn mod_inv(x: usize, p: usize) -> usize {
    // Fermat: x^(p-2)
    let (mut base, mut e, mut acc) = (x % p, p - 2, 1usize);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl Sl2 {
    pub fn new(p: usize) -> Result<Self, CayleyError> {
        if !is_prime(p) {
            return Err(CayleyError::NotPrime(p));
        }
        if p > MOBIUS_MAX_P {
            return Err(CayleyError::TooLarge { family: Family::Mobius, p, max: MOBIUS_MAX_P });
        }
        let mut elems = Vec::with_capacity(p * p * p - p);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - b * c % p) % p == 1 {
                            elems.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        let lookup: HashMap<[usize; 4], usize> = elems.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let inverse = elems.iter().map(|&[a, b, c, d]| lookup[&[d, (p - b) % p, (p - c) % p, a]]).collect::<Vec<_>>();
        let mut g = Sl2 { p, elems, lookup, inverse, source: Vec::new(), table: None };
        g.source = (0..g.elems.len()).map(|i| (0..=p).map(|t| g.apply(g.inverse[i], t) as u8).collect()).collect();
        if p <= SL2_TABLE_MAX_P {
            let n = g.elems.len();
            let mut table = vec![0u32; n * n];
            for x in 0..n {
                for y in 0..n {
                    table[x * n + y] = g.mul_direct(x, y) as u32;
                }
            }
            g.table = Some(table);
        }
        Ok(g)
    }

    pub fn matrix(&self, g: usize) -> [usize; 4] {
        self.elems[g]
    }

    pub fn index_of(&self, m: [usize; 4]) -> Option<usize> {
        self.lookup.get(&m).copied()
    }

    /// Möbius action on `P¹`; point `p` is `∞`.
    pub fn apply(&self, g: usize, x: usize) -> usize {
        let p = self.p;
        let [a, b, c, d] = self.elems[g];
        if x == p {
            return if c == 0 { p } else { a * mod_inv(c, p) % p };
        }
        let den = (c * x + d) % p;
        if den == 0 {
            return p;
        }
        (a * x + b) % p * mod_inv(den, p) % p
    }

    fn mul_direct(&self, x: usize, y: usize) -> usize {
        let p = self.p;
        let [a, b, c, d] = self.elems[x];
        let [e, f, g, h] = self.elems[y];
        self.lookup[&[(a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p]]
    }
}

impl ActingGroup for Sl2 {
    fn order(&self) -> usize {
        self.elems.len()
    }
    fn identity(&self) -> usize {
        self.lookup[&[1, 0, 0, 1]]
    }
    fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.elems.len() + y] as usize,
            None => self.mul_direct(x, y),
        }
    }
    fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }
    fn bits(&self) -> usize {
        self.p + 1
    }
    fn act(&self, g: usize, a: u64) -> u64 {
        let src = &self.source[g];
        let mut out = 0u64;
        for (t, &s) in src.iter().enumerate() {
            out |= ((a >> s) & 1) << t;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemidirectElement {
    pub a: u64,
    pub b: usize,
}

/// `A ⋊ B` with `A = 𝔽₂^{B.bits()}`. Element `(a, b)` has index `b·2^bits + a`.
#[derive(Clone, Debug)]
pub struct Semidirect<B> {
    pub acting: B,
}

impl<B: ActingGroup> Semidirect<B> {
    pub fn new(acting: B) -> Self {
        Semidirect { acting }
    }

    pub fn a_size(&self) -> usize {
        1usize << self.acting.bits()
    }

    pub fn check(&self, a: u64) -> Result<u64, CayleyError> {
        if self.acting.bits() < 64 && a >> self.acting.bits() != 0 {
            return Err(CayleyError::InvalidElement(a));
        }
        Ok(a)
    }

    /// The orbit `{φ_b(a) : b ∈ B}`, sorted.
    pub fn orbit(&self, a: u64) -> Result<Vec<u64>, CayleyError> {
        self.check(a)?;
        let mut o: Vec<u64> = (0..self.acting.order()).map(|b| self.acting.act(b, a)).collect();
        o.sort_unstable();
        o.dedup();
        Ok(o)
    }
}

impl<B: ActingGroup> FiniteGroup for Semidirect<B> {
    type Elem = SemidirectElement;
    fn order(&self) -> usize {
        self.a_size() * self.acting.order()
    }
    fn index(&self, x: &SemidirectElement) -> usize {
        x.b * self.a_size() + x.a as usize
    }
    fn element(&self, index: usize) -> SemidirectElement {
        SemidirectElement { a: (index % self.a_size()) as u64, b: index / self.a_size() }
    }
    fn identity(&self) -> SemidirectElement {
        SemidirectElement { a: 0, b: self.acting.identity() }
    }
    fn mul(&self, x: &SemidirectElement, y: &SemidirectElement) -> SemidirectElement {
        SemidirectElement { a: x.a ^ self.acting.act(x.b, y.a), b: self.acting.mul(x.b, y.b) }
    }
    fn inv(&self, x: &SemidirectElement) -> SemidirectElement {
        let bi = self.acting.inv(x.b);
        SemidirectElement { a: self.acting.act(bi, x.a), b: bi }
    }
}

/// A Cayley graph with right multiplication `v → v·s`.
#[derive(Clone, Debug)]
pub enum CayleyGraph {
    /// Symmetric generating set; port `i` is generator `i`.
    Undirected(RotationGraph),
    /// Non-symmetric generating set; one arc per vertex and generator.
    Directed(EdgeList),
}

impl CayleyGraph {
    pub fn num_vertices(&self) -> usize {
        match self {
            CayleyGraph::Undirected(g) => g.num_vertices(),
            CayleyGraph::Directed(l) => l.num_vertices,
        }
    }

    /// The undirected graph itself, or the bipartite double cover of the
    /// directed one.
    pub fn to_bipartite(&self, seed: u64) -> Result<Option<BipartiteRotationGraph>, CayleyError> {
        match self {
            CayleyGraph::Undirected(_) => Ok(None),
            CayleyGraph::Directed(l) => Ok(Some(double_cover_of(l, seed)?)),
        }
    }
}

/// Cayley graph of `group` with generators `gens` (duplicates removed, order
/// kept). Symmetric sets give an undirected graph; otherwise the set is closed
/// under inverses when `symmetrize` holds, or returned as a directed graph
/// when `allow_directed` holds, or rejected.
pub fn cayley_graph<G: FiniteGroup>(
    group: &G,
    gens: &[G::Elem],
    symmetrize: bool,
    allow_directed: bool,
) -> Result<(CayleyGraph, Vec<G::Elem>), CayleyError> {
    let mut set: Vec<G::Elem> = Vec::with_capacity(gens.len());
    for g in gens {
        if !set.contains(g) {
            set.push(*g);
        }
    }
    if set.contains(&group.identity()) {
        return Err(CayleyError::IdentityGenerator);
    }
    let symmetric = set.iter().all(|s| set.contains(&group.inv(s)));
    if !symmetric && symmetrize {
        for s in set.clone() {
            let si = group.inv(&s);
            if !set.contains(&si) {
                set.push(si);
            }
        }
    } else if !symmetric {
        if !allow_directed {
            return Err(CayleyError::NonSymmetric);
        }
        let n = group.order();
        let mut arcs = Vec::with_capacity(n * set.len());
        for v in 0..n {
            let x = group.element(v);
            for s in &set {
                arcs.push((v, group.index(&group.mul(&x, s))));
            }
        }
        return Ok((CayleyGraph::Directed(EdgeList::directed(n, arcs)), set));
    }
    let d = set.len();
    let back: Vec<usize> = set.iter().map(|s| set.iter().position(|t| *t == group.inv(s)).unwrap()).collect();
    let n = group.order();
    let mut rot = Vec::with_capacity(n * d);
    for v in 0..n {
        let x = group.element(v);
        for (i, s) in set.iter().enumerate() {
            rot.push((group.index(&group.mul(&x, s)), back[i]));
        }
    }
    Ok((CayleyGraph::Undirected(RotationGraph::from_rotation(n, d, rot)?), set))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `𝔽₂ᵖ ⋊ ℤ_p`, generators `S_B = {±1}`.
    Shift,
    /// `𝔽₂^{P¹} ⋊ SL₂(𝔽_p)`, generators `S_B = {[[1,1],[0,1]], [[1,0],[1,1]]}`.
    Mobius,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Shift => "shift",
            Family::Mobius => "mobius",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shift" => Ok(Family::Shift),
            "mobius" => Ok(Family::Mobius),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CayleyProduct {
    /// `S = {(1, β)(a_i, 1)(1, β′)}`.
    Zigzag,
    /// `S = (1, S_B) ∪ {(a_i, 1)}`.
    Replacement,
}

impl std::str::FromStr for CayleyProduct {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zigzag" => Ok(CayleyProduct::Zigzag),
            "replacement" => Ok(CayleyProduct::Replacement),
            other => Err(format!("unknown Cayley product `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleySpec {
    pub family: Family,
    pub p: usize,
    pub k: usize,
    /// Explicit representatives `a_1..a_k`; drawn from `seed` when absent.
    pub reps: Option<Vec<u64>>,
    pub product: CayleyProduct,
    pub seed: u64,
    /// Close a non-symmetric shift-family set under inverses instead of
    /// failing.
    pub symmetrize: bool,
}

impl CayleySpec {
    pub fn new(family: Family, p: usize, k: usize, product: CayleyProduct, seed: u64) -> Self {
        CayleySpec { family, p, k, reps: None, product, seed, symmetrize: true }
    }
}

/// A built Cayley graph with its generating data.
#[derive(Clone, Debug)]
pub struct CayleyBuild {
    pub spec: CayleySpec,
    pub reps: Vec<u64>,
    pub generators: Vec<SemidirectElement>,
    /// `d_g = |S|` after removing duplicates (and symmetrizing, if that ran).
    pub degree: usize,
    /// Nominal degree before generator collisions: `k|S_B|²` or `|S_B| + k`.
    pub nominal_degree: usize,
    pub symmetrized: bool,
    pub graph: CayleyGraph,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Whether 2 generates the multiplicative group `ℤ_p^*`.
pub fn two_is_primitive(p: usize) -> bool {
    if !is_prime(p) || p == 2 {
        return false;
    }
    let (mut x, mut order) = (2 % p, 1);
    while x != 1 {
        x = x * 2 % p;
        order += 1;
    }
    order == p - 1
}

/// `k` distinct nonzero elements of `𝔽₂^bits`, drawn from `seed`.
pub fn draw_reps(bits: usize, k: usize, seed: u64) -> Result<Vec<u64>, CayleyError> {
    let available = (1u64 << bits) - 1;
    if k as u64 > available {
        return Err(CayleyError::NotEnoughReps { k, available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reps = Vec::with_capacity(k);
    while reps.len() < k {
        let a = rng.random_range(1..=available);
        if !reps.contains(&a) {
            reps.push(a);
        }
    }
    Ok(reps)
}

fn generating_set<B: ActingGroup>(
    group: &Semidirect<B>,
    s_b: &[usize],
    reps: &[u64],
    product: CayleyProduct,
) -> Vec<SemidirectElement> {
    let one_b = group.acting.identity();
    match product {
        CayleyProduct::Zigzag => {
            let mut s = Vec::with_capacity(reps.len() * s_b.len() * s_b.len());
            for &a in reps {
                for &beta in s_b {
                    for &beta2 in s_b {
                        let x = group.mul(&SemidirectElement { a: 0, b: beta }, &SemidirectElement { a, b: one_b });
                        s.push(group.mul(&x, &SemidirectElement { a: 0, b: beta2 }));
                    }
                }
            }
            s
        }
        CayleyProduct::Replacement => s_b
            .iter()
            .map(|&b| SemidirectElement { a: 0, b })
            .chain(reps.iter().map(|&a| SemidirectElement { a, b: one_b }))
            .collect(),
    }
}

fn build_with<B: ActingGroup>(
    group: &Semidirect<B>,
    s_b: &[usize],
    spec: &CayleySpec,
    allow_directed: bool,
) -> Result<CayleyBuild, CayleyError> {
    let reps = match &spec.reps {
        Some(r) => {
            for (i, &a) in r.iter().enumerate() {
                group.check(a)?;
                if r[..i].contains(&a) {
                    return Err(CayleyError::DuplicateRep(a));
                }
            }
            r.clone()
        }
        None => draw_reps(group.acting.bits(), spec.k, spec.seed)?,
    };
    let gens = generating_set(group, s_b, &reps, spec.product);
    let mut distinct = gens.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let (graph, set) = cayley_graph(group, &gens, spec.symmetrize && !allow_directed, allow_directed)?;
    let nominal_degree = match spec.product {
        CayleyProduct::Zigzag => reps.len() * s_b.len() * s_b.len(),
        CayleyProduct::Replacement => s_b.len() + reps.len(),
    };
    Ok(CayleyBuild {
        spec: spec.clone(),
        reps,
        degree: set.len(),
        symmetrized: set.len() != distinct.len(),
        generators: set,
        nominal_degree,
        graph,
    })
}

/// Builds the Cayley graph described by `spec`. The shift family gives an
/// undirected graph; the Möbius family gives a directed one (its `S_B` is not
/// closed under inverses), to be passed through the double cover.
pub fn build(spec: &CayleySpec) -> Result<CayleyBuild, CayleyError> {
    if !is_prime(spec.p) {
        return Err(CayleyError::NotPrime(spec.p));
    }
    match spec.family {
        Family::Shift => {
            if spec.p > 30 {
                return Err(CayleyError::TooLarge { family: Family::Shift, p: spec.p, max: 30 });
            }
            let group = Semidirect::new(CyclicShift::new(spec.p));
            build_with(&group, &[1, spec.p - 1], spec, false)
        }
        Family::Mobius => {
            let sl2 = Sl2::new(spec.p)?;
            let s_b = [sl2.index_of([1, 1, 0, 1]).unwrap(), sl2.index_of([1, 0, 1, 1]).unwrap()];
            if spec.p > 7 {
                return Err(CayleyError::TooLarge { family: Family::Mobius, p: spec.p, max: 7 });
            }
            let group = Semidirect::new(sl2);
            build_with(&group, &s_b, spec, true)
        }
    }
}

pub fn build_zigzag_cayley(family: Family, p: usize, k: usize, seed: u64) -> Result<CayleyBuild, CayleyError> {
    build(&CayleySpec::new(family, p, k, CayleyProduct::Zigzag, seed))
}

pub fn build_replacement_cayley(family: Family, p: usize, k: usize, seed: u64) -> Result<CayleyBuild, CayleyError> {
    build(&CayleySpec::new(family, p, k, CayleyProduct::Replacement, seed))
}

/// Orbit of `a` under the family's acting group.
pub fn orbit(family: Family, p: usize, a: u64) -> Result<Vec<u64>, CayleyError> {
    if !is_prime(p) {
        return Err(CayleyError::NotPrime(p));
    }
    match family {
        Family::Shift => Semidirect::new(CyclicShift::new(p)).orbit(a),
        Family::Mobius => Semidirect::new(Sl2::new(p)?).orbit(a),
    }
}
