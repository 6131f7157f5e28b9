use alloc::vec::Vec;

use crate::error::Result;
use crate::mapper::{build_graph, build_net, BallMapperGraph};
use crate::pointcloud::PointCloud;
use crate::stats;

/// Size statistics of one graph in a radius sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub ball_count: usize,
    /// Mean member count per ball.
    pub size_mean: f64,
    /// Population standard deviation of member counts.
    pub size_sd: f64,
    /// Edge count divided by ball count.
    pub edges_per_ball: f64,
}

pub fn graph_stats(graph: &BallMapperGraph) -> SweepRow {
    let sizes: Vec<f64> = graph.balls().iter().map(|b| b.size() as f64).collect();
    SweepRow {
        epsilon: graph.epsilon(),
        ball_count: graph.ball_count(),
        size_mean: stats::mean(&sizes),
        size_sd: stats::population_sd(&sizes),
        edges_per_ball: graph.edge_count() as f64 / graph.ball_count() as f64,
    }
}

/// Build one graph per radius, every one with the same `seed`, so each row
/// matches a standalone build at that radius.
pub fn radius_sweep(cloud: &PointCloud, epsilons: &[f64], seed: u64) -> Result<Vec<SweepRow>> {
    epsilons
        .iter()
        .map(|&eps| {
            let net = build_net(cloud, eps, seed)?;
            Ok(graph_stats(&build_graph(cloud, &net)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use alloc::string::String;
    use alloc::vec;

    fn line(xs: &[f64]) -> PointCloud {
        let ids = (0..xs.len()).map(|i| alloc::format!("p{i}")).collect();
        PointCloud::new(ids, vec![String::from("x")], xs.to_vec()).unwrap()
    }

    #[test]
    fn radius_beyond_diameter() {
        let c = line(&[0.0, 1.0, 4.0, 7.0]);
        let rows = radius_sweep(&c, &[7.0, 100.0], 3).unwrap();
        for row in rows {
            assert_eq!(row.ball_count, 1);
            assert_eq!(row.size_mean, 4.0);
            assert_eq!(row.size_sd, 0.0);
            assert_eq!(row.edges_per_ball, 0.0);
        }
    }

    #[test]
    fn propagates_bad_radius() {
        let c = line(&[0.0]);
        assert!(matches!(radius_sweep(&c, &[1.0, -1.0], 0), Err(Error::InvalidParameter(_))));
    }
}
