//! Post-construction analysis of a Ball Mapper graph.

mod compare;
mod distance;
mod summary;
mod sweep;

pub use compare::{column_ttests, compare_groups, ColumnTest, ComparisonReport, ComparisonRow};
pub use distance::{distance_coloring, normalized_distance, normalized_distance_with, subgroup_fraction, ZeroScale};
pub use summary::{ball_summary, centroid, BallCentroid, BallSummary};
pub use sweep::{graph_stats, radius_sweep, SweepRow};
