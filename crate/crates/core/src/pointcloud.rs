//! The tabular point cloud and its column statistics.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stats;

/// A non-axis column carried alongside the cloud (an outcome, a region label).
#[derive(Debug, Clone, PartialEq)]
pub enum Attribute {
    Numeric(Vec<Option<f64>>),
    Text(Vec<Option<String>>),
}

impl Attribute {
    pub fn len(&self) -> usize {
        match self {
            Attribute::Numeric(v) => v.len(),
            Attribute::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn select(&self, rows: &[usize]) -> Attribute {
        match self {
            Attribute::Numeric(v) => Attribute::Numeric(rows.iter().map(|&r| v[r]).collect()),
            Attribute::Text(v) => Attribute::Text(rows.iter().map(|&r| v[r].clone()).collect()),
        }
    }
}

/// Rows of real-valued coordinates on named axes, each row with an opaque id.
///
/// Values are stored row-major. A cloud is immutable once built; every row
/// has one finite value per axis, row ids are unique and axis names are
/// unique and non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    row_ids: Vec<String>,
    axis_names: Vec<String>,
    values: Vec<f64>,
    attributes: Vec<(String, Attribute)>,
}

impl PointCloud {
    pub fn new(row_ids: Vec<String>, axis_names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if row_ids.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if axis_names.is_empty() {
            return Err(Error::InvalidCloud("at least one axis is required".into()));
        }
        let mut seen = BTreeSet::new();
        for name in &axis_names {
            if name.is_empty() {
                return Err(Error::InvalidCloud("axis names must be non-empty".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidCloud(alloc::format!("duplicate axis `{name}`")));
            }
        }
        let mut seen = BTreeSet::new();
        for id in &row_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidCloud(alloc::format!("duplicate row id `{id}`")));
            }
        }
        let expected = row_ids.len() * axis_names.len();
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: values.len() });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidCloud(alloc::format!("non-finite value in row {}", pos / axis_names.len())));
        }
        Ok(PointCloud { row_ids, axis_names, values, attributes: Vec::new() })
    }

    /// Attach a non-axis column. Its length must match the row count and
    /// its name must not clash with an axis or another attribute.
    pub fn with_attribute(mut self, name: impl Into<String>, attribute: Attribute) -> Result<Self> {
        let name = name.into();
        if attribute.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: attribute.len() });
        }
        if name.is_empty() || self.has_column(&name) {
            return Err(Error::InvalidCloud(alloc::format!("attribute name `{name}` is taken or empty")));
        }
        self.attributes.push((name, attribute));
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.row_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_ids.is_empty()
    }

    /// Number of axes.
    pub fn dim(&self) -> usize {
        self.axis_names.len()
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn axis_names(&self) -> &[String] {
        &self.axis_names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, index: usize) -> &[f64] {
        let d = self.dim();
        &self.values[index * d..(index + 1) * d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dim())
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axis_names.iter().position(|a| a == name)
    }

    pub fn row_index(&self, id: &str) -> Option<usize> {
        self.row_ids.iter().position(|r| r == id)
    }

    /// Values of one axis, in row order.
    pub fn axis_values(&self, axis: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[axis])
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.attributes.iter().map(|(n, _)| n.as_str())
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.axis_index(name).is_some() || self.attribute(name).is_some()
    }

    /// A numeric column by name (axis or numeric attribute); `None` marks
    /// a missing cell.
    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        if let Some(j) = self.axis_index(name) {
            return Ok(self.axis_values(j).map(Some).collect());
        }
        match self.attribute(name) {
            Some(Attribute::Numeric(v)) => Ok(v.clone()),
            Some(Attribute::Text(_)) => Err(Error::NotNumeric(name.into())),
            None => Err(Error::UnknownColumn(name.into())),
        }
    }

    /// Like [`column`](Self::column) but every row must have a value.
    pub fn complete_column(&self, name: &str) -> Result<Vec<f64>> {
        self.column(name)?
            .into_iter()
            .enumerate()
            .map(|(row, v)| v.ok_or_else(|| Error::IncompleteFunction { label: name.into(), row }))
            .collect()
    }

    /// Per-row flags `column == value`. Text columns compare as strings,
    /// numeric ones after parsing `value`. Missing cells are an error.
    pub fn flags_equal(&self, name: &str, value: &str) -> Result<Vec<bool>> {
        let incomplete = |row| Error::IncompleteFunction { label: name.into(), row };
        match self.attribute(name) {
            Some(Attribute::Text(v)) => v
                .iter()
                .enumerate()
                .map(|(row, cell)| cell.as_deref().map(|c| c == value).ok_or_else(|| incomplete(row)))
                .collect(),
            _ => {
                let column = self.complete_column(name)?;
                let target: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(alloc::format!("`{value}` is not a number")))?;
                Ok(column.into_iter().map(|x| x == target).collect())
            }
        }
    }

    /// A new cloud holding the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<PointCloud> {
        if rows.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.len()) {
            return Err(Error::Consistency(alloc::format!("row index {bad} out of range")));
        }
        let mut values = Vec::with_capacity(rows.len() * self.dim());
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        let row_ids = rows.iter().map(|&r| self.row_ids[r].clone()).collect();
        let mut cloud = PointCloud::new(row_ids, self.axis_names.clone(), values)?;
        cloud.attributes = self.attributes.iter().map(|(n, a)| (n.clone(), a.select(rows))).collect();
        Ok(cloud)
    }

    /// Rows for which `keep` returns true.
    pub fn filter_rows(&self, mut keep: impl FnMut(usize) -> bool) -> Result<PointCloud> {
        let rows: Vec<usize> = (0..self.len()).filter(|&r| keep(r)).collect();
        self.select_rows(&rows)
    }

    /// Re-project onto the named axes. Axes that are not selected are kept
    /// as numeric attributes.
    pub fn select_axes(&self, names: &[&str]) -> Result<PointCloud> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.axis_index(n).ok_or_else(|| Error::UnknownColumn((*n).into())))
            .collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(self.len() * idx.len());
        for row in self.rows() {
            values.extend(idx.iter().map(|&j| row[j]));
        }
        let axis_names = names.iter().map(|n| String::from(*n)).collect();
        let mut cloud = PointCloud::new(self.row_ids.clone(), axis_names, values)?;
        for (j, name) in self.axis_names.iter().enumerate() {
            if !idx.contains(&j) {
                cloud.attributes.push((name.clone(), Attribute::Numeric(self.axis_values(j).map(Some).collect())));
            }
        }
        cloud.attributes.extend(self.attributes.iter().cloned());
        Ok(cloud)
    }
}

/// Summary of one axis over every row of the cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisStats {
    pub axis_name: String,
    pub mean: f64,
    /// Population standard deviation (divisor `n`).
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

/// Mean, population standard deviation, minimum and maximum of each axis.
///
/// The population (not sample) deviation is the normalising scale used by
/// [`normalized_distance`](crate::analysis::normalized_distance) and by
/// standardised differences in comparison reports.
pub fn axis_stats(cloud: &PointCloud) -> Vec<AxisStats> {
    (0..cloud.dim())
        .map(|j| {
            let column: Vec<f64> = cloud.axis_values(j).collect();
            let (min, max) =
                column.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            AxisStats {
                axis_name: cloud.axis_names()[j].clone(),
                mean: stats::mean(&column).clamp(min, max),
                sd: stats::population_sd(&column),
                min,
                max,
            }
        })
        .collect()
}

/// Look up the standard deviation of each named axis in `stats`.
pub fn sigmas_for(axis_names: &[String], stats: &[AxisStats]) -> Result<Vec<f64>> {
    axis_names
        .iter()
        .map(|name| {
            stats.iter().find(|s| &s.axis_name == name).map(|s| s.sd).ok_or_else(|| Error::UnknownColumn(name.clone()))
        })
        .collect()
}

/// Rows in the lower and upper quartile of a numeric column.
///
/// With `k = ceil(n / 4)`, the lower cut is the `k`-th smallest value and the
/// upper cut the `k`-th largest (nearest rank, counted from each end). A row
/// belongs to the lower group when its value is `<=` the lower cut and to the
/// upper group when it is `>=` the upper cut; both lists are in row order.
pub fn quartile_split(cloud: &PointCloud, attribute: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let values = cloud.complete_column(attribute)?;
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let k = n.div_ceil(4);
    let lower_cut = sorted[k - 1];
    let upper_cut = sorted[n - k];
    let lower = (0..n).filter(|&r| values[r] <= lower_cut).collect();
    let upper = (0..n).filter(|&r| values[r] >= upper_cut).collect();
    Ok((lower, upper))
}
