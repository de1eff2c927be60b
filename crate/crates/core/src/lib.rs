//! Random d-uniform hypergraphs and the simple random walk on them.
//!
//! The crate samples hypergraphs from H(n, p), projects them to weighted
//! multigraphs, decomposes the normalized adjacency `B = D^{-1/2} A D^{-1/2}`
//! and evaluates hitting, commute and cover-time quantities exactly (by two
//! independent routes) and by simulation. It is `no_std` and needs only
//! `alloc`; file formats, parallel drivers and the command line live in the
//! `hyperwalk` crate.

#![no_std]

extern crate alloc;

pub mod checks;
pub mod error;
pub mod exact_times;
pub mod hypergraph;
pub mod linalg;
pub mod montecarlo;
pub mod projection;
pub mod rng;
pub mod spectral;
pub mod union_find;

pub use nalgebra;

pub use error::{Error, Result};
pub use hypergraph::{generate, is_connected, GenerationParams, Hypergraph};
pub use projection::{project, Multigraph, StationaryDist};
pub use spectral::Spectrum;
