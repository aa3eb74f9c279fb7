//! Experiment driver: configuration, parallel ensembles, aggregation, fits and outputs.

pub mod config;
pub mod ensemble;
pub mod fit;
pub mod logicals;
pub mod oracle;
pub mod output;
pub mod scenarios;
pub mod stats;
