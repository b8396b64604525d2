//! Command-line frontend for the area decomposition library: input parsing
//! (GeoJSON / WKT), deterministic GeoJSON + stats output, SVG rendering,
//! corpus generation, and benchmarking.

pub mod commands;
pub mod io;
pub mod svg;
