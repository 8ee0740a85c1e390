//! File formats, reports, and the command-line front end for `aoi-core`.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod report;
pub mod table;

pub use error::AppError;
