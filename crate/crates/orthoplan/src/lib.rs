//! File formats, instance generation, rendering and probes around
//! `orthoplan-core`.

pub mod cli;
pub mod gen;
pub mod io;
pub mod manifest;
pub mod probe;
pub mod svg;
