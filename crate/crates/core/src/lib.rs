//! Stable maximum nullity of digraphs.
//!
//! The crate decides whether a digraph `D` has stable maximum nullity 0, at
//! most 1, or at least 2, and backs each answer with certificates that can be
//! re-checked independently:
//!
//! * `nu = 0` exactly when `D` is acyclic (a topological order is the certificate);
//! * `nu <= 1` exactly when `D` and its reverse both have Kelly-width at most 2,
//!   equivalently when `D` has none of the five obstructions `K3`, `N4`, `M5`
//!   and the reverses of `N4` and `M5` as a directed minor;
//! * otherwise a replayable minor witness for one obstruction is produced.
//!
//! Matrix-side checks (nullity, the asymmetric strong Arnold property and the
//! support property) use exact rational arithmetic throughout.

pub mod bipartite;
pub mod canon;
pub mod classify;
pub mod digraph;
pub mod enumerate;
pub mod error;
pub mod kelly;
pub mod matrix;
pub mod minors;
pub mod survey;

pub use digraph::{Digraph, Relabel, VertexId};
pub use error::{Error, Result};
