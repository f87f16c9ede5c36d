//! File formats, configuration and the `kforge` command line on top of
//! [`kforge_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod pipeline;
pub mod report;
pub mod threads;
pub mod verify;

pub use config::RunConfig;
pub use error::{Error, Result};
