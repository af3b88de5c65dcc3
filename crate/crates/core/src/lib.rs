//! Exact tools for k-uniform set families over `[n] = {1, ..., n}` that have no
//! perfect matching and no small blocking set.
//!
//! The crate is organised bottom-up:
//!
//! - [`kset`] and [`family`]: bit-mask sets, families, the text/JSON family formats.
//! - [`matching`]: exact deciders for perfect matchings, covering matchings and
//!   blocking sets.
//! - [`constructions`]: the explicit extremal families and their closed-form sizes.
//! - [`shifting`]: the shift operator, its potential function and the constrained
//!   shift-to-fixpoint loop.
//! - [`graph_prop`]: the graph-level edge bound, its two equality configurations,
//!   the Hall-type witness and the desk-scale exhaustive verifier.
//! - [`search`]: maximality checks and extremal family search.
//!
//! Vertices are 1-based everywhere. Families live on at most 64 vertices.

pub mod binom;
pub mod constructions;
pub mod error;
pub mod family;
pub mod graph_prop;
pub mod kset;
pub mod matching;
pub mod search;
pub mod shifting;

pub use error::{Error, Result};
pub use family::SetFamily;
pub use kset::{KSet, Vertex};
pub use matching::{BlockingWitness, Matching};
