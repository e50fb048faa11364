//! Toolkit for adding links to a graph so that its effective graph
//! resistance (Kirchhoff index) drops as far as possible.
//!
//! * [`graph`], [`graph6`], [`enumerate`]: graph values, text formats and
//!   isomorph-free catalogs of small connected graphs.
//! * [`resistance`]: pairwise resistances, the Kirchhoff index and rank-one
//!   link updates.
//! * [`solver`]: greedy link addition (naive and incremental), exhaustive
//!   optimum and greedy efficiency.
//! * [`submod`]: submodularity ratio, curvature, greedy guarantee factors
//!   and the search for minimal diminishing-returns violations.
//! * [`family`]: the two-path counterexample family and its closed forms.
//! * [`sweep`]: efficiency studies over catalogs and random samples.

pub mod enumerate;
pub mod error;
pub mod family;
pub mod graph;
pub mod graph6;
pub mod resistance;
pub mod solver;
pub mod submod;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, Graph, NodePair};
pub use graph6::{encode_graph6, parse_graph6};
