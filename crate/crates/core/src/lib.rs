//! Exact small-scale algorithms for dichromatic number and directed minors,
//! each producing a certificate that can be checked independently.
//!
//! * [`coloring`]: exact dichromatic and chromatic numbers.
//! * [`decomposition`]: partitions into strongly connected 2-dicolourable
//!   parts whose quotient graph bounds the dichromatic number.
//! * [`strong_minor`]: strong minor models, exact search, and forcing a
//!   bidirected clique from large dichromatic number.
//! * [`butterfly`]: butterfly contractions, traces and minor search.
//! * [`subdivision`]: subdivisions of subcubic digraphs from strong models.
//! * [`io`], [`certificate`], [`explore`]: files, JSON certificates, and the
//!   counterexample search.

pub mod bits;
pub mod butterfly;
pub mod certificate;
pub mod coloring;
pub mod decomposition;
pub mod digraph;
pub mod error;
pub mod explore;
pub mod generate;
pub mod graph;
pub mod io;
pub mod iso;
pub mod strong_minor;
pub mod subdivision;

pub use digraph::{biorient, Digraph, VertexSet};
pub use error::{Error, Result};
pub use graph::Graph;
