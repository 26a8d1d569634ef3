pub mod error;
pub mod graph;
pub mod planar;
pub mod instance;
pub mod exact;
pub mod starter;
pub mod spanner;
pub mod thinning;
pub mod ptas;
pub mod io;
pub mod check;
