//! Scenario-driven verification runs over `artin-core`: TOML scenarios in,
//! JSON reports and a summary CSV out.

pub mod checks;
pub mod config;
pub mod exec;
pub mod report;
pub mod run;
