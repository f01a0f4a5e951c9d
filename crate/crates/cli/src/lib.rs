//! Command-line front end for `polyalg`: a CSV-backed catalog of named
//! relations, s-expression queries against it, and the triangle benchmark.

pub mod app;
pub mod bench;
pub mod catalog;
pub mod csvio;
pub mod failure;
pub mod render;

pub use app::run;
pub use failure::Failure;
