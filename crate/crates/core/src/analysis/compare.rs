use alloc::string::String;
use alloc::vec::Vec;

use super::summary::axis_moments;
use crate::error::{Error, Result};
use crate::mapper::BallMapperGraph;
use crate::pointcloud::{sigmas_for, AxisStats, PointCloud};
use crate::stats::{ttest_two_sample_with, TTest, TTestKind};

/// One axis of a two-group comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub axis: String,
    pub mean_a: f64,
    pub mean_b: f64,
    /// `mean_a - mean_b`
    pub diff: f64,
    /// `diff` divided by the population sd of the axis over the whole cloud.
    pub std_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub group_a: Vec<u32>,
    pub group_b: Vec<u32>,
    pub rows: Vec<ComparisonRow>,
    /// Distinct rows covered by group A; a row inside several balls of the
    /// group counts once.
    pub size_a: usize,
    pub size_b: usize,
}

/// Contrast the mean coordinates of two groups of balls.
///
/// Each group is first reduced to the distinct rows its balls cover, so a
/// row sitting in the intersection of two balls of the same group is
/// averaged once.
pub fn compare_groups(
    graph: &BallMapperGraph,
    cloud: &PointCloud,
    group_a: &[u32],
    group_b: &[u32],
    sigmas: &[AxisStats],
) -> Result<ComparisonReport> {
    graph.check_cloud(cloud)?;
    let rows_a = graph.group_rows(group_a)?;
    let rows_b = graph.group_rows(group_b)?;
    let scales = sigmas_for(cloud.axis_names(), sigmas)?;
    let (means_a, _) = axis_moments(cloud, &rows_a);
    let (means_b, _) = axis_moments(cloud, &rows_b);

    let rows = cloud
        .axis_names()
        .iter()
        .enumerate()
        .map(|(j, axis)| {
            let diff = means_a[j] - means_b[j];
            let std_diff = if scales[j] > 0.0 {
                diff / scales[j]
            } else if diff == 0.0 {
                0.0
            } else {
                return Err(Error::DegenerateScale(axis.clone()));
            };
            Ok(ComparisonRow { axis: axis.clone(), mean_a: means_a[j], mean_b: means_b[j], diff, std_diff })
        })
        .collect::<Result<_>>()?;

    Ok(ComparisonReport {
        group_a: group_a.to_vec(),
        group_b: group_b.to_vec(),
        rows,
        size_a: rows_a.len(),
        size_b: rows_b.len(),
    })
}

/// Two-sample test of one column between two sets of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnTest {
    pub column: String,
    pub test: TTest,
}

/// Test every listed column (axis or numeric attribute) between `rows_a`
/// and `rows_b`. Rows with no value in a column are left out of that
/// column's test only.
pub fn column_ttests(
    cloud: &PointCloud,
    columns: &[&str],
    rows_a: &[usize],
    rows_b: &[usize],
    kind: TTestKind,
) -> Result<Vec<ColumnTest>> {
    let pick = |values: &[Option<f64>], rows: &[usize]| -> Result<Vec<f64>> {
        rows.iter()
            .map(|&r| values.get(r).copied().ok_or(Error::DimensionMismatch { expected: values.len(), got: r + 1 }))
            .filter_map(|v| v.transpose())
            .collect()
    };
    columns
        .iter()
        .map(|&name| {
            let values = cloud.column(name)?;
            let test = ttest_two_sample_with(&pick(&values, rows_a)?, &pick(&values, rows_b)?, kind)?;
            Ok(ColumnTest { column: String::from(name), test })
        })
        .collect()
}
