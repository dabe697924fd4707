//! Command-line and HTTP front ends for the `smaatri` engine.

pub mod cli;
pub mod engine;
pub mod http;
