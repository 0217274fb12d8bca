//! Simulation, generators, suites and IO for the `square4-core` algorithm.

pub mod adversary;
pub mod batch;
pub mod config;
pub mod generate;
pub mod properties;
pub mod render;
pub mod sim;
pub mod trace;

pub use square4_core as core;
