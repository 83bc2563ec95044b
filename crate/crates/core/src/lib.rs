//! Minimum k-Union / small set bipartite vertex expansion toolkit.
//!
//! Instance generators, brute-force oracles, an exact least-expanding-set
//! solver, the caterpillar approximation pipeline, and builders plus verifiers
//! for SDP and Sherali–Adams integrality-gap certificates.

pub mod approx;
pub mod bench;
pub mod certs;
pub mod error;
pub mod exact;
pub mod flow;
pub mod gen;
pub mod graph;
pub mod io;
pub mod les;
pub mod reductions;
pub mod rng;
pub mod ssve;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Expansion, Hypergraph, Solution, SsbveInstance, UndirectedGraph};
