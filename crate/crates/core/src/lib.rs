//! Book embedding and track layout optimization for graphs whose vertices
//! sit on a spine in a fixed order.
//!
//! With the vertex order frozen, every question about crossings reduces to
//! how edge intervals interleave. This crate covers four families of such
//! questions:
//!
//! * exact per-page-count crossing minima and the page number
//!   ([`exact_pages`]), with a greedy approximation ([`approx_pages`]),
//! * deleting the fewest edges so one page has at most `d` crossings per
//!   edge ([`edge_deletion`]),
//! * deleting the fewest edges so `p` pages are crossing-free, driven by the
//!   hitting-set structure of the instance ([`hitting_flow`]),
//! * ordering bipartite "track" vertices to minimize crossings against the
//!   spine ([`tracks`]).
//!
//! Every solver returns a witness that re-verifies against the pairwise
//! predicates in [`graph`], and each has an exhaustive counterpart in
//! [`oracles`] used by the test suite.
//!
//! ```
//! use bookemb::{exact_pages, OrderedGraph};
//!
//! let k5 = OrderedGraph::complete(5).unwrap();
//! let (number, layout) = exact_pages::page_number(&k5).unwrap();
//! assert_eq!(number, 3);
//! assert!(k5.is_d_planar(&layout, 0));
//! ```

pub mod approx_pages;
pub mod circle_mis;
pub mod edge_deletion;
pub mod error;
pub mod exact_pages;
pub mod graph;
pub mod hitting_flow;
pub mod io;
pub mod oracles;
pub mod subset;
pub mod tracks;

pub use error::{Error, Result};
pub use graph::{OrderedGraph, PageAssignment};
pub use subset::EdgeSubset;
