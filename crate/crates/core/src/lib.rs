//! Expander graph products and generalized LDPC codes built on them.
//!
//! The crate builds zig-zag, replacement and bipartite zig-zag products of
//! rotation-map graphs, Cayley-graph instances over semidirect products,
//! GLDPC codes whose bits are graph edges, a trellis-based iterative decoder
//! with an AWGN Monte Carlo harness, and the three iterative expander
//! families obtained by repeating the products.

pub mod cayley;
pub mod cli;
pub mod decode;
pub mod gf2;
pub mod gldpc;
pub mod graph;
pub mod iterate;
pub mod presets;
pub mod products;
pub mod sim;
pub mod spectral;
