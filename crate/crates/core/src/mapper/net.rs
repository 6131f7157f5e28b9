use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::pointcloud::PointCloud;
use crate::rng::SplitMix64;

/// Landmark rows of a greedy epsilon-net, with the parameters that made it.
///
/// Every cloud row lies within `epsilon` of some landmark, and any two
/// landmarks are strictly more than `epsilon` apart.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonNet {
    pub epsilon: f64,
    pub seed: u64,
    pub metric: Metric,
    /// Row count of the cloud the net was built over.
    pub n_rows: usize,
    /// Landmark row indices in discovery order.
    pub landmarks: Vec<usize>,
}

pub fn build_net(cloud: &PointCloud, epsilon: f64, seed: u64) -> Result<EpsilonNet> {
    build_net_with(cloud, epsilon, seed, Metric::default())
}

/// Greedy epsilon-net.
///
/// Rows not yet covered are kept in ascending row order. Each step draws an
/// index uniformly from that list with [`SplitMix64::index`], makes the row
/// at that index a landmark, and removes every row within `epsilon` of it
/// (closed ball). The loop ends when nothing is left uncovered.
pub fn build_net_with(cloud: &PointCloud, epsilon: f64, seed: u64, metric: Metric) -> Result<EpsilonNet> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("epsilon must be positive, got {epsilon}")));
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut rng = SplitMix64::new(seed);
    let mut uncovered: Vec<usize> = (0..cloud.len()).collect();
    let mut landmarks = Vec::new();
    while !uncovered.is_empty() {
        let landmark = uncovered[rng.index(uncovered.len())];
        let centre = cloud.row(landmark);
        uncovered.retain(|&r| metric.distance(cloud.row(r), centre) > epsilon);
        landmarks.push(landmark);
    }
    Ok(EpsilonNet { epsilon, seed, metric, n_rows: cloud.len(), landmarks })
}
