//! Maximum edge 2-coloring toolkit.

pub mod analysis;
pub mod approx;
pub mod coloring;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matching;
pub mod rational;
