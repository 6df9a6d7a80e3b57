//! Cooperative online convex optimization on communication networks.
//!
//! Agents sit on the vertices of an undirected graph and each runs its own
//! lazy online mirror descent instance. In every round some agents are
//! active: they predict and pay the loss, and the loss is then revealed to
//! them and to their neighbors. The crate simulates this protocol, measures
//! network regret, and computes the graph and probability constants that the
//! regret guarantees are stated in.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agent;
pub mod analysis;
pub mod environment;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod graph;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};
