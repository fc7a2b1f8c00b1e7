//! Diameter graphs and hypergraphs of finite Euclidean point sets, exact
//! hypergraph coloring, the Euclidean Ramsey arrow relation at small scale,
//! and constructive witnesses for diameter-Ramsey sets.
//!
//! Exact modes use rational arithmetic; anything involving irrational
//! coordinates runs in floats with a relative tolerance (default `1e-9`).

pub mod chromatic;
pub mod constructions;
pub mod degeneracy;
pub mod diameter;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod hypergraph;
pub mod par;
pub mod ramsey;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{
    angle_at, cartesian_product, find_congruence, CongruenceMap, Diameter, Mode, PointSet, Scalar,
    SqDistMatrix,
};
