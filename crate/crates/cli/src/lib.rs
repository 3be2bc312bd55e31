//! Command-line tool and read-only HTTP service around `cricket-rules-core`.

pub mod analysis;
pub mod cli;
pub mod json;
pub mod server;
pub mod svg;
pub mod synth;
