//! Ball Mapper graphs over tabular point clouds.
//!
//! A Ball Mapper graph summarises the shape of a point cloud at a single
//! resolution `epsilon`. A seeded greedy epsilon-net picks landmark rows so
//! that every row lies within `epsilon` of some landmark; each landmark
//! becomes a vertex (a closed ball of radius `epsilon`) and two vertices are
//! joined whenever their balls share at least one row of the cloud.
//!
//! This crate is `no_std` (it needs `alloc`) and carries only the
//! algorithmic parts:
//!
//! * [`pointcloud`]: the tabular cloud, column statistics, quartile splits.
//! * [`mapper`]: epsilon-net, graph construction, colorings and layout.
//! * [`analysis`]: radius sweeps, per-ball summaries, group comparisons,
//!   normalised centroid distances and subgroup fractions.
//! * [`stats`]: two-sample t-tests and the special functions behind them.
//! * [`regression`]: least squares via Householder QR and residual maps.
//!
//! File formats, the command line and the HTTP service live in the
//! `ballmapper` crate.
//!
//! ```
//! use ballmapper_core::pointcloud::PointCloud;
//! use ballmapper_core::mapper::{build_graph, build_net};
//!
//! let cloud = PointCloud::new(
//!     vec!["a".into(), "b".into(), "c".into()],
//!     vec!["x".into()],
//!     vec![0.0, 1.0, 2.0],
//! )
//! .unwrap();
//! let net = build_net(&cloud, 1.2, 0).unwrap();
//! let graph = build_graph(&cloud, &net).unwrap();
//! assert!(graph.ball_count() >= 1);
//! ```
#![no_std]
#![warn(rust_2018_idioms)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod mapper;
pub mod metric;
pub mod pointcloud;
pub mod regression;
pub mod rng;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
