//! Packing and covering odd `(u,v)`-trails in multigraphs.
//!
//! For a graph `G`, terminals `u`, `v` and an integer `k`, [`driver::solve_uv`]
//! returns either `k` pairwise edge-disjoint odd `(u,v)`-trails or an edge
//! set of size at most `2k - 1` meeting every odd `(u,v)`-trail. The
//! pipeline behind it:
//!
//! * [`flow`] decides whether a minimum cut is already small enough.
//! * [`gadget`] turns odd `(s,s)`-trails into nonzero paths of a
//!   `Z₂`-labelled clique expansion of `G`, and [`apath`] packs or covers
//!   those paths exactly.
//! * [`untangle`] rewrites odd trails with ends in `{u,v}` into odd
//!   `(u,v)`-trails against a fixed family of edge-disjoint paths.
//!
//! [`minmax`] evaluates the exact min-max formula for odd `(s,s)`-trail
//! packing, [`oracle`] holds independent brute-force ground truth, and
//! [`fixtures`] builds the tight example families used by the tests.

pub mod apath;
pub mod driver;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod gadget;
pub mod graph;
pub mod minmax;
pub mod oracle;
pub mod schema;
mod search;
pub mod trail;
pub mod untangle;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, EdgeSet, Multigraph, VertexId};
pub use trail::Trail;
