//! Ball Mapper construction: epsilon-net, balls and edges, colorings, layout.

mod coloring;
mod graph;
mod layout;
mod net;

pub use coloring::{color_by, Aggregator, Coloring};
pub use graph::{build_graph, Ball, BallMapperGraph};
pub use layout::{layout, layout_with, LayoutConfig, Position};
pub use net::{build_net, build_net_with, EpsilonNet};
