//! File formats, command line and HTTP service around `ballmapper-core`.
//!
//! * [`io`]: CSV ingestion into a [`PointCloud`](ballmapper_core::pointcloud::PointCloud).
//! * [`json`]: canonical graph, coloring and report JSON.
//! * [`report`]: CSV tables for sweeps, comparisons, tests and fits.
//! * [`dot`] and [`svg`]: static renderings.
//! * [`cli`]: the `ballmapper` command.
//! * [`server`]: the session-based HTTP API.

pub mod cli;
pub mod dot;
pub mod error;
pub mod io;
pub mod json;
pub mod report;
pub mod server;
pub mod svg;

pub use error::{AppError, AppResult};
