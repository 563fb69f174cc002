pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
pub mod svg;
