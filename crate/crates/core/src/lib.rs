//! Threshold-based Gaussian boson sampling (TGBS) and seeded graph search.
//!
//! A graph is programmed into a simulated Gaussian boson sampler
//! ([`embedding`]), sampled with threshold detectors ([`sampler`]), and the
//! detection patterns are used as seeds for dense-subgraph and clique
//! heuristics ([`solvers`]) or as graph feature maps ([`classify`]).

pub mod bench;
pub mod classify;
pub mod dataset;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod rng;
pub mod sampler;
pub mod solvers;

pub use error::{Error, Result};
