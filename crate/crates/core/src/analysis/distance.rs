use alloc::string::String;
use alloc::vec::Vec;

use super::summary::axis_moments;
use crate::error::{Error, Result};
use crate::mapper::{BallMapperGraph, Coloring};
use crate::pointcloud::{sigmas_for, AxisStats, PointCloud};

/// What to do with an axis whose normalising scale is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroScale {
    #[default]
    Error,
    /// Leave the axis out of the sum. Only a constant axis has zero spread,
    /// and it cannot separate any two rows.
    ExcludeAxis,
}

/// `sum_j |a_j - b_j| / sigma_j`: the L1 distance in units of each axis's
/// standard deviation.
pub fn normalized_distance(a: &[f64], b: &[f64], sigmas: &[f64]) -> Result<f64> {
    normalized_distance_with(a, b, sigmas, ZeroScale::Error)
}

pub fn normalized_distance_with(a: &[f64], b: &[f64], sigmas: &[f64], zero: ZeroScale) -> Result<f64> {
    check_scales(a.len(), sigmas, zero)?;
    if b.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    Ok(fold_distance(a, b, sigmas))
}

fn check_scales(dim: usize, sigmas: &[f64], zero: ZeroScale) -> Result<()> {
    if sigmas.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: sigmas.len() });
    }
    for (j, &s) in sigmas.iter().enumerate() {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("scale of axis {j} is {s}")));
        }
        if s == 0.0 && zero == ZeroScale::Error {
            return Err(Error::DegenerateScale(alloc::format!("axis {j}")));
        }
    }
    Ok(())
}

/// Scales already validated; zero scales are skipped.
#[inline]
fn fold_distance(a: &[f64], b: &[f64], sigmas: &[f64]) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.len() {
        if sigmas[j] > 0.0 {
            acc += libm::fabs(a[j] - b[j]) / sigmas[j];
        }
    }
    acc
}

/// Color each ball by how far its rows sit from the centroids of `targets`.
///
/// For a ball, every member row's normalised distance to each target
/// centroid is computed; distances are averaged over targets (equal
/// weights) and then over the ball's members. Target balls are colored by
/// the same rule.
pub fn distance_coloring(
    graph: &BallMapperGraph,
    cloud: &PointCloud,
    targets: &[u32],
    sigmas: &[AxisStats],
    zero: ZeroScale,
) -> Result<Coloring> {
    graph.check_cloud(cloud)?;
    if targets.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let scales = sigmas_for(cloud.axis_names(), sigmas)?;
    for (axis, &s) in cloud.axis_names().iter().zip(&scales) {
        if s == 0.0 && zero == ZeroScale::Error {
            return Err(Error::DegenerateScale(axis.clone()));
        }
    }
    check_scales(cloud.dim(), &scales, zero)?;

    let centroids: Vec<Vec<f64>> =
        targets.iter().map(|&id| Ok(axis_moments(cloud, &graph.ball(id)?.members).0)).collect::<Result<_>>()?;

    let row_distance: Vec<f64> = cloud
        .rows()
        .map(|row| centroids.iter().map(|c| fold_distance(row, c, &scales)).sum::<f64>() / centroids.len() as f64)
        .collect();

    let values = graph
        .balls()
        .iter()
        .map(|ball| Some(ball.members.iter().map(|&r| row_distance[r]).sum::<f64>() / ball.size() as f64))
        .collect();

    let ids: Vec<String> = targets.iter().map(|id| alloc::format!("{id}")).collect();
    Ok(Coloring::from_values(alloc::format!("distance to {}", ids.join(",")), values))
}

/// Share of each ball's members whose flag is set.
pub fn subgroup_fraction(graph: &BallMapperGraph, flags: &[bool], label: &str) -> Result<Coloring> {
    if flags.len() != graph.n_rows() {
        return Err(Error::IncompleteFunction { label: label.into(), row: flags.len().min(graph.n_rows()) });
    }
    let values = graph
        .balls()
        .iter()
        .map(|ball| {
            let hits = ball.members.iter().filter(|&&r| flags[r]).count();
            Some(hits as f64 / ball.size() as f64)
        })
        .collect();
    Ok(Coloring::from_values(label, values))
}
