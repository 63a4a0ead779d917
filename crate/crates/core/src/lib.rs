//! Steiner spanners of low complexity.
//!
//! Builds geodesic t-spanners that may use a bounded number of Steiner points
//! on three kinds of metric spaces: edge-weighted trees whose leaves are the
//! sites, forests of such trees, and point sites inside a simple polygon.
//! Every link of a spanner is realized as a concrete path (a tree path or a
//! geodesic polyline) and the complexity of a spanner is the total number of
//! edges or segments over all of its links.
//!
//! The crate also contains instance generators for the lower-bound gadgets
//! (pitchfork stars, comb chains, combs) and brute-force oracles used to
//! certify spanning ratios, sizes and the structural properties of the
//! construction.

pub mod error;
pub mod forest_spanner;
pub mod format;
pub mod generators;
pub mod geometry;
pub mod polygon_spanner;
pub mod spanner;
pub mod steiner_tree;
pub mod tree;
pub mod tree_spanner;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Point, SimplePolygon};
pub use spanner::{Host, Link, LinkOrigin, LinkPath, Metric, Node, NodeKind, SpannerGraph};
pub use tree::{EdgeId, EdgeWeightedTree, Forest, TreeBuilder, VertexId};
