//! Gradient-based distributed controllers for single-integrator multi-agent
//! systems over directed networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: directed/undirected networks, edge classification, proximity
//!   graphs with one or two sensing ranges, maximal cliques.
//! * [`objectives`]: the distance-based formation potential and the
//!   clique-based matching potential, with analytic per-agent gradients.
//! * [`assignment`]: minority-to-majority optimal assignment (brute force and
//!   rectangular Hungarian).
//! * [`controller`]: gradient flow, the naive directed law and the
//!   projection-based law for tail agents.
//! * [`sim`]: fixed-step integration, trajectories, metrics and the
//!   region-of-attraction radius around matched configurations.
//!
//! Node indices are 0-based everywhere in the API. File formats use 1-based
//! indices; see [`graph::io`].

pub mod assignment;
pub mod controller;
pub mod error;
pub mod graph;
pub mod objectives;
pub mod sim;
pub mod state;

pub use error::{Error, Result};
pub use graph::{Clique, DirectedNetwork, EdgeClassification, Partition, UndirectedGraph};
pub use state::StateMatrix;
