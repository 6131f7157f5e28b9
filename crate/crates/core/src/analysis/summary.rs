use alloc::vec::Vec;

use crate::error::Result;
use crate::mapper::BallMapperGraph;
use crate::pointcloud::PointCloud;
use crate::stats;

/// Mean coordinates of the rows inside one ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallCentroid {
    pub ball_id: u32,
    pub coordinates: Vec<f64>,
}

/// Per-axis means (clamped into the member range) and population sds.
pub(crate) fn axis_moments(cloud: &PointCloud, rows: &[usize]) -> (Vec<f64>, Vec<f64>) {
    (0..cloud.dim())
        .map(|j| {
            let xs: Vec<f64> = rows.iter().map(|&r| cloud.row(r)[j]).collect();
            let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            (stats::mean(&xs).clamp(lo, hi), stats::population_sd(&xs))
        })
        .unzip()
}

pub fn centroid(graph: &BallMapperGraph, cloud: &PointCloud, ball_id: u32) -> Result<BallCentroid> {
    graph.check_cloud(cloud)?;
    let ball = graph.ball(ball_id)?;
    let (coordinates, _) = axis_moments(cloud, &ball.members);
    Ok(BallCentroid { ball_id, coordinates })
}

/// Per-ball description: axis means and sds, an optional attribute mean and
/// the member count.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSummary {
    pub ball_id: u32,
    pub size: usize,
    pub axis_means: Vec<f64>,
    pub axis_sds: Vec<f64>,
    /// Mean of the attribute over members that have a value; `None` when no
    /// member has one.
    pub attribute_mean: Option<f64>,
}

pub fn ball_summary(graph: &BallMapperGraph, cloud: &PointCloud, attribute: Option<&str>) -> Result<Vec<BallSummary>> {
    graph.check_cloud(cloud)?;
    let column = attribute.map(|name| cloud.column(name)).transpose()?;
    Ok(graph
        .balls()
        .iter()
        .map(|ball| {
            let (axis_means, axis_sds) = axis_moments(cloud, &ball.members);
            let attribute_mean = column.as_ref().and_then(|col| {
                let present: Vec<f64> = ball.members.iter().filter_map(|&r| col[r]).collect();
                (!present.is_empty()).then(|| stats::mean(&present))
            });
            BallSummary { ball_id: ball.id, size: ball.size(), axis_means, axis_sds, attribute_mean }
        })
        .collect())
}
