//! Mu-separation in directed mixed graphs.
//!
//! Local independence graphs of partially observed stochastic processes are
//! directed mixed graphs (DMGs) read through mu-separation, an asymmetric
//! analogue of m-separation. This crate implements that reading end to end:
//!
//! - [`graph`], [`walk`]: DMGs with directed and bidirected edges (loops
//!   allowed), walks, and collider classification.
//! - [`separation`]: mu-separation via mark-annotated reachability, plus an
//!   exhaustive route oracle, collider-bounded search, and witness walks.
//! - [`independence`]: independence-model signatures over conditioning
//!   families, weak / Markov / trek equivalence with distinguishing triples.
//! - [`potential`]: C-potential sibling and parent conditions.
//! - [`equivalence`]: greatest elements of weak equivalence classes, DMEGs,
//!   least elements, and the k-weak hierarchy forest.
//! - [`projection`]: latent projection and separability-based connectivity.
//! - [`learning`]: independence oracles and the constraint-based learner of
//!   the maximal weakly-equivalent graph.
//! - [`reduce`]: 3DNF tautology reduction instances (dense and sparse).
//! - [`io`]: JSON document formats and DOT export.

pub mod equivalence;
pub mod error;
pub mod graph;
pub mod independence;
pub mod io;
pub mod learning;
pub mod potential;
pub mod projection;
pub mod reduce;
pub mod separation;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Dmg, Edge, NodeId, NodeSet};
