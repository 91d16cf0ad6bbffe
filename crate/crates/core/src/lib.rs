//! Maintain a DFS tree of an undirected graph under vertex/edge failures and
//! fully dynamic updates.
//!
//! The library preprocesses a graph once in O(m + n): it runs a static DFS,
//! decomposes the tree into heavy paths whose vertices get consecutive dfn,
//! collapses the paths into a shallow hierarchy, and stores each vertex's
//! ancestor-neighbors in a sorted array overlaid with fractional cascading.
//! After that, [`reroot::run_reroot`] reports a valid DFS tree rooted at any
//! vertex, [`fault::query_fault_tolerant`] reports a DFS tree avoiding any
//! fault set, and [`dynamic::DynamicDfs`] keeps a tree current across an
//! online stream of insertions and deletions with overlapped periodic
//! rebuilding. [`apps`] derives O(1) connectivity, biconnectivity and
//! 2-edge-connectivity answers from the maintained tree.

pub mod ancestor;
pub mod apps;
pub mod dynamic;
pub mod error;
pub mod fault;
pub mod graph;
pub mod preprocess;
pub mod reroot;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, VertexId, ROOT};
