pub mod commands;
pub mod error;
pub mod run_config;
pub mod svg;
