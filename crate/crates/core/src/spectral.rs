//! Normalized adjacency matrices and second-eigenvalue estimates.
//!
//! Every graph is normalized as `D^{-1/2} A D^{-1/2}`, which is `A/d` for a
//! `d`-regular graph, `A/√(cd)` for a `(c, d)`-biregular bipartite graph, and
//! the symmetric `a_ij / √(r_i c_j)` scaling for irregular graphs. The top
//! eigenvalue is 1 for every connected graph, with eigenvector `∝ √deg`.
//!
//! Small graphs (at most [`AUTO_DENSE_LIMIT`] vertices under
//! [`Method::Auto`]) use a dense symmetric eigensolver. Larger ones use
//! Lanczos with the known top eigenvector (and, for bipartite graphs, its
//! sign-flipped partner) deflated.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{adjacency_of, is_connected, BipartiteRotationGraph, PortGraph, RotationGraph};

pub const DENSE_LIMIT: usize = 4_096;
/// Largest graph [`Method::Auto`] sends to the dense solver.
pub const AUTO_DENSE_LIMIT: usize = 1_024;
/// Krylov dimension per Lanczos cycle.
pub const LANCZOS_STEPS: usize = 120;
pub const LANCZOS_RESTARTS: usize = 30;
pub const LANCZOS_CHECK_EVERY: usize = 10;
pub const LANCZOS_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph needs at least two vertices for a second eigenvalue")]
    TooSmall,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("Lanczos did not converge in {iterations} steps (estimate {estimate}, residual {residual:e})")]
    NoConvergence { iterations: usize, estimate: f64, residual: f64 },
    #[error("dense method limited to {DENSE_LIMIT} vertices, graph has {0}")]
    TooLargeForDense(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dense,
    Lanczos,
    /// Dense up to [`AUTO_DENSE_LIMIT`] vertices, Lanczos beyond.
    Auto,
}

/// Spectral data of a normalized adjacency matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub num_vertices: usize,
    /// Largest eigenvalue; 1 for connected graphs.
    pub lambda_max: f64,
    /// Second largest signed eigenvalue.
    pub lambda2: f64,
    /// Smallest eigenvalue (dense method only).
    pub lambda_min: Option<f64>,
    /// Largest absolute eigenvalue other than the top one.
    pub lambda_abs: f64,
    /// Second largest singular value of the normalized biadjacency matrix
    /// (bipartite graphs only).
    pub sigma2: Option<f64>,
    pub method: Method,
    /// Residual norm `‖Ãx − λx‖` of the reported second eigenpair.
    pub residual: f64,
}

impl SpectralReport {
    /// The quantity eigenvalue bounds are stated for: `sigma2` for bipartite
    /// graphs, the second largest absolute eigenvalue otherwise.
    pub fn expansion(&self) -> f64 {
        self.sigma2.unwrap_or(self.lambda_abs)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "n={} method={:?} lambda_max={:.9} lambda2={:.9} lambda_abs={:.9}",
            self.num_vertices, self.method, self.lambda_max, self.lambda2, self.lambda_abs
        );
        if let Some(m) = self.lambda_min {
            s.push_str(&format!(" lambda_min={m:.9}"));
        }
        if let Some(s2) = self.sigma2 {
            s.push_str(&format!(" sigma2={s2:.9}"));
        }
        s.push_str(&format!(" residual={:.3e}", self.residual));
        s
    }
}

/// `lambda2 < kappa`: the report certifies membership in an expander family
/// with constant `kappa`.
pub fn is_expander_certificate(report: &SpectralReport, kappa: f64) -> bool {
    debug_assert!(kappa > 0.0 && kappa < 1.0);
    report.lambda2 < kappa
}

/// `2√(d−1)/d`, the normalized Ramanujan bound for `d`-regular graphs.
pub fn ramanujan_bound(d: usize) -> f64 {
    2.0 * ((d as f64) - 1.0).sqrt() / d as f64
}

/// Symmetric irregular multigraph given by adjacency counts.
#[derive(Clone, Debug, PartialEq)]
pub struct IrregularAdjacency {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl IrregularAdjacency {
    /// Undirected edges; a self-loop adds 2 to its diagonal entry.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut dense: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); n];
        for &(u, v) in edges {
            *dense[u].entry(v).or_default() += 1.0;
            *dense[v].entry(u).or_default() += 1.0;
        }
        IrregularAdjacency { n, rows: dense.into_iter().map(|r| r.into_iter().collect()).collect() }
    }
}

impl PortGraph for IrregularAdjacency {
    fn node_count(&self) -> usize {
        self.n
    }
    fn node_degree(&self, node: usize) -> usize {
        self.rows[node].len()
    }
    /// Connectivity-only view: one port per distinct neighbor.
    fn step(&self, node: usize, port: usize) -> (usize, usize) {
        (self.rows[node][port].0, 0)
    }
}

/// Sparse symmetric normalized adjacency.
#[derive(Clone, Debug)]
pub struct NormalizedAdjacency {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    /// Unit top eigenvector, `∝ √deg`.
    top: Vec<f64>,
    /// Number of left vertices when the matrix is a bipartite union.
    left: Option<usize>,
}

impl NormalizedAdjacency {
    fn from_rows(rows: Vec<Vec<(usize, f64)>>, left: Option<usize>) -> Result<Self, SpectralError> {
        let n = rows.len();
        let degrees: Vec<f64> = rows.iter().map(|r| r.iter().map(|&(_, a)| a).sum()).collect();
        if n == 0 || degrees.iter().all(|&d| d == 0.0) {
            return Err(SpectralError::EmptyGraph);
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (i, row) in rows.iter().enumerate() {
            for &(j, a) in row {
                let scale = (degrees[i] * degrees[j]).sqrt();
                if scale > 0.0 {
                    cols.push(j);
                    vals.push(a / scale);
                }
            }
            row_ptr.push(cols.len());
        }
        let total: f64 = degrees.iter().sum();
        let top = degrees.iter().map(|&d| (d / total).sqrt()).collect();
        Ok(NormalizedAdjacency { n, row_ptr, cols, vals, top, left })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        (self.row_ptr[i]..self.row_ptr[i + 1]).filter(|&k| self.cols[k] == j).map(|k| self.vals[k]).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[k])] += self.vals[k];
            }
        }
        m
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let row = |i: usize| -> f64 {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(|k| self.vals[k] * x[self.cols[k]]).sum()
        };
        if self.n >= 8_192 {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row(i));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row(i);
            }
        }
    }

    /// Top eigenvector with the right side negated: the `−1` eigenvector of a
    /// bipartite union.
    fn bottom(&self) -> Option<Vec<f64>> {
        self.left.map(|l| self.top.iter().enumerate().map(|(i, &t)| if i < l { t } else { -t }).collect())
    }
}

/// Anything that can be turned into a normalized adjacency matrix.
pub trait Normalize {
    fn normalize(&self) -> Result<NormalizedAdjacency, SpectralError>;
    fn connected(&self) -> bool;
}

fn counts_to_f64(rows: Vec<Vec<(usize, u32)>>) -> Vec<Vec<(usize, f64)>> {
    rows.into_iter().map(|r| r.into_iter().map(|(j, c)| (j, c as f64)).collect()).collect()
}

impl Normalize for RotationGraph {
    fn normalize(&self) -> Result<NormalizedAdjacency, SpectralError> {
        NormalizedAdjacency::from_rows(counts_to_f64(adjacency_of(self)), None)
    }
    fn connected(&self) -> bool {
        is_connected(self)
    }
}

impl Normalize for BipartiteRotationGraph {
    fn normalize(&self) -> Result<NormalizedAdjacency, SpectralError> {
        NormalizedAdjacency::from_rows(counts_to_f64(adjacency_of(self)), Some(self.num_left()))
    }
    fn connected(&self) -> bool {
        is_connected(self)
    }
}

impl Normalize for IrregularAdjacency {
    fn normalize(&self) -> Result<NormalizedAdjacency, SpectralError> {
        NormalizedAdjacency::from_rows(self.rows.clone(), None)
    }
    fn connected(&self) -> bool {
        is_connected(self)
    }
}

/// All eigenvalues of the normalized adjacency, descending.
pub fn dense_spectrum(a: &NormalizedAdjacency) -> Vec<f64> {
    let eig = SymmetricEigen::new(a.to_dense());
    let mut e: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    e.sort_by(|x, y| y.total_cmp(x));
    e
}

/// Second eigenvalue report for a connected graph.
pub fn lambda2<G: Normalize + ?Sized>(g: &G, method: Method, seed: u64) -> Result<SpectralReport, SpectralError> {
    let a = g.normalize()?;
    if a.n < 2 {
        return Err(SpectralError::TooSmall);
    }
    if !g.connected() {
        return Err(SpectralError::Disconnected);
    }
    let method = match method {
        Method::Auto if a.n <= AUTO_DENSE_LIMIT => Method::Dense,
        Method::Auto => Method::Lanczos,
        m => m,
    };
    match method {
        Method::Dense => dense_report(&a),
        _ => lanczos_report(&a, seed),
    }
}

/// The expansion parameter a product bound consumes: `sigma2` for bipartite
/// graphs, the second largest absolute eigenvalue otherwise. Disconnected
/// graphs have expansion 1.
pub fn expansion<G: Normalize + ?Sized>(g: &G, seed: u64) -> Result<f64, SpectralError> {
    if !g.connected() {
        return Ok(1.0);
    }
    Ok(lambda2(g, Method::Auto, seed)?.expansion())
}

fn dense_report(a: &NormalizedAdjacency) -> Result<SpectralReport, SpectralError> {
    if a.n > DENSE_LIMIT {
        return Err(SpectralError::TooLargeForDense(a.n));
    }
    let dense = a.to_dense();
    let eig = SymmetricEigen::new(dense.clone());
    let mut order: Vec<usize> = (0..a.n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let ev = |k: usize| eig.eigenvalues[order[k]];
    let second = eig.eigenvectors.column(order[1]).into_owned();
    let residual = (&dense * &second - &second * ev(1)).norm();
    let lambda_abs = ev(1).abs().max(ev(a.n - 1).abs());
    let sigma2 = a.left.map(|l| {
        let b = dense.view((0, l), (l, a.n - l)).into_owned();
        let mut s: Vec<f64> = b.singular_values().iter().copied().collect();
        s.sort_by(|x, y| y.total_cmp(x));
        s.get(1).copied().unwrap_or(0.0)
    });
    Ok(SpectralReport {
        num_vertices: a.n,
        lambda_max: ev(0),
        lambda2: ev(1),
        lambda_min: Some(ev(a.n - 1)),
        lambda_abs,
        sigma2,
        method: Method::Dense,
        residual,
    })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn project_out(x: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(x, b);
        x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= c * bi);
    }
}

fn normalize_vec(x: &mut [f64]) -> f64 {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

/// Largest eigenvalue of a symmetric operator restricted to the orthogonal
/// complement of `deflate`, by Lanczos with full reorthogonalization and
/// explicit restarts from the best Ritz vector. Returns `(θ, ‖Ax − θx‖)`.
fn deflated_lanczos<F>(
    n: usize,
    apply: F,
    deflate: &[Vec<f64>],
    seed: u64,
) -> Result<(f64, f64), SpectralError>
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    project_out(&mut x, deflate);
    if normalize_vec(&mut x) == 0.0 {
        return Ok((0.0, 0.0));
    }
    let steps = LANCZOS_STEPS.min(n.saturating_sub(deflate.len()).max(1));
    let (mut theta, mut residual) = (0.0, f64::INFINITY);
    let mut w = vec![0.0; n];
    for _ in 0..LANCZOS_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        for j in 0..steps {
            apply(&basis[j], &mut w);
            project_out(&mut w, deflate);
            alpha.push(dot(&w, &basis[j]));
            for _ in 0..2 {
                project_out(&mut w, &basis);
                project_out(&mut w, deflate);
            }
            let b = dot(&w, &w).sqrt();
            let last = j + 1 == steps;
            let invariant = b <= 1e-12;
            if last || invariant || (j + 1) % LANCZOS_CHECK_EVERY == 0 {
                let (t, s) = top_ritz(&alpha, &beta);
                theta = t;
                x.iter_mut().for_each(|v| *v = 0.0);
                for (coef, v) in s.iter().zip(&basis) {
                    x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += coef * vi);
                }
                normalize_vec(&mut x);
                if invariant || b * s[j].abs() <= LANCZOS_TOLERANCE || last {
                    apply(&x, &mut w);
                    project_out(&mut w, deflate);
                    residual = w.iter().zip(&x).map(|(wi, xi)| (wi - theta * xi).powi(2)).sum::<f64>().sqrt();
                    if residual <= LANCZOS_TOLERANCE || invariant {
                        return Ok((theta, residual));
                    }
                    break;
                }
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }
    }
    Err(SpectralError::NoConvergence { iterations: LANCZOS_RESTARTS * steps, estimate: theta, residual })
}

/// Largest eigenvalue of the tridiagonal matrix with diagonal `alpha` and
/// off-diagonal `beta`, with its eigenvector.
fn top_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let k = eig.eigenvalues.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map_or(0, |(k, _)| k);
    (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
}

fn lanczos_report(a: &NormalizedAdjacency, seed: u64) -> Result<SpectralReport, SpectralError> {
    let n = a.n;
    let top = vec![a.top.clone()];
    // (Ã + I)/2 has spectrum in [0, 1]; its deflated top is (λ2 + 1)/2
    let shifted = |x: &[f64], y: &mut [f64]| {
        a.matvec(x, y);
        y.iter_mut().zip(x).for_each(|(yi, xi)| *yi = 0.5 * (*yi + xi));
    };
    let (theta, res_shift) = deflated_lanczos(n, shifted, &top, seed)?;
    let lambda2 = 2.0 * theta - 1.0;
    // Ã² with the ±1 eigenvectors removed: largest remaining |λ|² (σ₂² when bipartite)
    let mut both = top.clone();
    if let Some(b) = a.bottom() {
        both.push(b);
    }
    let squared = |x: &[f64], y: &mut [f64]| {
        let mut tmp = vec![0.0; x.len()];
        a.matvec(x, &mut tmp);
        a.matvec(&tmp, y);
    };
    let (theta2, _) = deflated_lanczos(n, squared, &both, seed.wrapping_add(1))?;
    let abs_or_sigma = theta2.max(0.0).sqrt();
    let (lambda_abs, sigma2) = match a.left {
        Some(_) => (1.0, Some(abs_or_sigma)),
        None => (abs_or_sigma, None),
    };
    Ok(SpectralReport {
        num_vertices: n,
        lambda_max: 1.0,
        lambda2,
        lambda_min: if a.left.is_some() { Some(-1.0) } else { None },
        lambda_abs,
        sigma2,
        method: Method::Lanczos,
        residual: 2.0 * res_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, complete_bipartite, cycle, random_biregular, random_regular};

    #[test]
    fn k2_normalizes_to_swap() {
        let g = complete(2, 0).unwrap();
        let a = g.normalize().unwrap();
        assert_eq!(a.to_dense(), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let r = lambda2(&g, Method::Dense, 0).unwrap();
        assert!((r.lambda_max - 1.0).abs() < 1e-12);
        assert!((r.lambda2 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_entries_are_counts_over_degree() {
        let g = random_regular(10, 4, 3, false).unwrap();
        let a = g.normalize().unwrap();
        for (i, row) in g.adjacency_counts().iter().enumerate() {
            for &(j, c) in row {
                assert!((a.entry(i, j) - c as f64 / 4.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn biregular_entries_over_sqrt_cd() {
        let g = random_biregular(6, 4, 2, 3, 1, false).unwrap();
        let a = g.normalize().unwrap();
        for (v, row) in g.biadjacency_counts().iter().enumerate() {
            for &(w, c) in row {
                assert!((a.entry(v, 6 + w) - c as f64 / 6f64.sqrt()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn k6_second_eigenvalue() {
        let r = lambda2(&complete(6, 0).unwrap(), Method::Dense, 0).unwrap();
        assert!((r.lambda2 + 0.2).abs() < 1e-8);
    }

    #[test]
    fn eight_cycle_second_eigenvalue() {
        let r = lambda2(&cycle(8, 0).unwrap(), Method::Dense, 0).unwrap();
        assert!((r.lambda2 - (std::f64::consts::PI / 4.0).cos()).abs() < 1e-8);
    }

    #[test]
    fn bipartite_has_minus_one_and_sigma2() {
        let g = random_biregular(12, 8, 2, 3, 11, true).unwrap();
        if !is_connected(&g) {
            return;
        }
        let r = lambda2(&g, Method::Dense, 0).unwrap();
        assert!((r.lambda_min.unwrap() + 1.0).abs() < 1e-8);
        let spec = dense_spectrum(&g.normalize().unwrap());
        // second largest |λ| once the ±1 pair is removed
        let mut abs: Vec<f64> = spec[1..spec.len() - 1].iter().map(|x| x.abs()).collect();
        abs.sort_by(|x, y| y.total_cmp(x));
        assert!((r.sigma2.unwrap() - abs[0]).abs() < 1e-8);
    }

    #[test]
    fn complete_bipartite_sigma2_is_zero() {
        let r = lambda2(&complete_bipartite(3, 4, 0).unwrap(), Method::Dense, 0).unwrap();
        assert!(r.sigma2.unwrap().abs() < 1e-8);
    }

    #[test]
    fn disconnected_rejected() {
        let g = RotationGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], 0).unwrap();
        assert_eq!(lambda2(&g, Method::Dense, 0).unwrap_err(), SpectralError::Disconnected);
    }

    #[test]
    fn dense_and_lanczos_agree() {
        for seed in 0..4 {
            let g = random_regular(60, 5, seed, true).unwrap();
            let d = lambda2(&g, Method::Dense, 0).unwrap();
            let p = lambda2(&g, Method::Lanczos, seed).unwrap();
            assert!((d.lambda2 - p.lambda2).abs() < 1e-5, "{} vs {}", d.lambda2, p.lambda2);
            assert!((d.lambda_abs - p.lambda_abs).abs() < 1e-5);
            let b = random_biregular(30, 20, 4, 6, seed, true).unwrap();
            let d = lambda2(&b, Method::Dense, 0).unwrap();
            let p = lambda2(&b, Method::Lanczos, seed).unwrap();
            assert!((d.sigma2.unwrap() - p.sigma2.unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn expander_certificate_is_strict() {
        let mut r = lambda2(&complete(6, 0).unwrap(), Method::Dense, 0).unwrap();
        r.lambda2 = 0.4;
        assert!(is_expander_certificate(&r, 0.55));
        r.lambda2 = 0.55;
        assert!(!is_expander_certificate(&r, 0.55));
    }

    #[test]
    fn ramanujan_check_on_petersen_like_graph() {
        // K4 is 3-regular with λ2 = -1/3, well under 2√2/3
        let r = lambda2(&complete(4, 0).unwrap(), Method::Dense, 0).unwrap();
        assert!(is_expander_certificate(&r, ramanujan_bound(3)));
    }
}
