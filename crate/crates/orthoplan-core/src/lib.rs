//! Orthogonal floor plans with a designated L- or T-shaped module, built from
//! plane triangulated graphs through complex-triangle elimination, four-completion,
//! canonical ordering, regular edge labeling and rectangular duals.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod completion;
mod embed;
pub mod graph;
pub mod layout;
pub mod ordering;
pub mod pipeline;
pub mod rel;
pub mod report;
pub mod triangles;
pub mod verify;

pub use graph::{build_graph, PlanarGraph, VertexId};
pub use report::ValidationReport;
