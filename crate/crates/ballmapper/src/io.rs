//! CSV ingestion.
//!
//! Input is comma-delimited UTF-8 with a header row; fields may be quoted.
//! A cell is missing when it is empty (after trimming) or one of `NA`,
//! `NaN`, `null` (any case). Rows are kept in file order.

use std::io::Read;
use std::path::Path;

use ballmapper_core::pointcloud::{Attribute, PointCloud};
use ballmapper_core::Error;

use crate::error::{AppError, AppResult};

/// Which columns of the file become axes, row ids and attributes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadSpec {
    pub axes: Vec<String>,
    /// Column holding row ids; rows are numbered from 1 in file order when absent.
    pub id_column: Option<String>,
    /// Columns carried along as attributes; `None` keeps every column that
    /// is neither an axis nor the id column.
    pub attributes: Option<Vec<String>>,
    /// Extra columns that must have a value, or the row is dropped.
    pub required: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub cloud: PointCloud,
    /// Rows left out because a selected axis or required column had no
    /// usable value.
    pub dropped: usize,
}

pub fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || ["na", "nan", "null"].iter().any(|m| c.eq_ignore_ascii_case(m))
}

fn parse_number(cell: &str) -> Option<f64> {
    if is_missing(cell) {
        return None;
    }
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn position(headers: &[String], name: &str) -> AppResult<usize> {
    headers.iter().position(|h| h == name).ok_or_else(|| Error::UnknownColumn(name.into()).into())
}

/// Read a cloud from CSV text.
///
/// A row whose value on any selected axis is missing or not a finite
/// number is dropped, as is a row missing any `required` column. An
/// attribute is numeric when every non-missing cell parses as a finite
/// number, and text otherwise.
pub fn load_cloud<R: Read>(reader: R, spec: &LoadSpec) -> AppResult<Loaded> {
    if spec.axes.is_empty() {
        return Err(Error::InvalidParameter("at least one axis is required".into()).into());
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(String::from).collect();

    let axis_cols = spec.axes.iter().map(|a| position(&headers, a)).collect::<AppResult<Vec<_>>>()?;
    let id_col = spec.id_column.as_deref().map(|c| position(&headers, c)).transpose()?;
    let required_cols = spec.required.iter().map(|c| position(&headers, c)).collect::<AppResult<Vec<_>>>()?;
    let attr_names: Vec<String> = match &spec.attributes {
        Some(names) => names.clone(),
        None => {
            headers.iter().filter(|h| !spec.axes.contains(h) && spec.id_column.as_ref() != Some(h)).cloned().collect()
        }
    };
    let attr_cols = attr_names.iter().map(|a| position(&headers, a)).collect::<AppResult<Vec<_>>>()?;

    let mut ids = Vec::new();
    let mut values = Vec::new();
    let mut raw_attrs: Vec<Vec<Option<String>>> = vec![Vec::new(); attr_cols.len()];
    let mut dropped = 0;
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let coords: Option<Vec<f64>> = axis_cols.iter().map(|&c| parse_number(record.get(c).unwrap_or(""))).collect();
        let complete = required_cols.iter().all(|&c| !is_missing(record.get(c).unwrap_or("")));
        let Some(coords) = coords.filter(|_| complete) else {
            dropped += 1;
            continue;
        };
        ids.push(match id_col {
            Some(c) => record.get(c).unwrap_or("").to_string(),
            None => (line + 1).to_string(),
        });
        values.extend(coords);
        for (store, &c) in raw_attrs.iter_mut().zip(&attr_cols) {
            let cell = record.get(c).unwrap_or("");
            store.push((!is_missing(cell)).then(|| cell.to_string()));
        }
    }

    let mut cloud = PointCloud::new(ids, spec.axes.clone(), values)?;
    for (name, cells) in attr_names.into_iter().zip(raw_attrs) {
        let numeric: Option<Vec<Option<f64>>> = cells
            .iter()
            .map(|c| match c {
                None => Some(None),
                Some(s) => parse_number(s).map(Some),
            })
            .collect();
        let attribute = match numeric {
            Some(v) => Attribute::Numeric(v),
            None => Attribute::Text(cells),
        };
        cloud = cloud.with_attribute(name, attribute)?;
    }
    Ok(Loaded { cloud, dropped })
}

pub fn load_cloud_path(path: &Path, spec: &LoadSpec) -> AppResult<Loaded> {
    let file = std::fs::File::open(path).map_err(AppError::file(path))?;
    load_cloud(std::io::BufReader::new(file), spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "id,x,y,region,share\n\
                       a,1,2,North,0.5\n\
                       b,3,,South,0.25\n\
                       c,\"5\",6,North,NA\n\
                       d,7,8,,1\n";

    fn spec(axes: &[&str]) -> LoadSpec {
        LoadSpec {
            axes: axes.iter().map(|s| s.to_string()).collect(),
            id_column: Some("id".into()),
            ..Default::default()
        }
    }

    #[test]
    fn drops_rows_missing_a_selected_axis() {
        let l = load_cloud(CSV.as_bytes(), &spec(&["x", "y"])).unwrap();
        assert_eq!(l.dropped, 1);
        assert_eq!(l.cloud.row_ids(), ["a", "c", "d"]);
        assert_eq!(l.cloud.values(), [1.0, 2.0, 5.0, 6.0, 7.0, 8.0]);
        let l = load_cloud(CSV.as_bytes(), &spec(&["x"])).unwrap();
        assert_eq!((l.dropped, l.cloud.len()), (0, 4));
    }

    #[test]
    fn attribute_types() {
        let l = load_cloud(CSV.as_bytes(), &spec(&["x"])).unwrap();
        assert_eq!(l.cloud.attribute("share"), Some(&Attribute::Numeric(vec![Some(0.5), Some(0.25), None, Some(1.0)])));
        assert!(matches!(l.cloud.attribute("region"), Some(Attribute::Text(v)) if v[3].is_none()));
        // y is not an axis here, so it is an attribute.
        assert!(matches!(l.cloud.attribute("y"), Some(Attribute::Numeric(_))));
    }

    #[test]
    fn required_and_selected_attributes() {
        let mut s = spec(&["x"]);
        s.required = vec!["region".into()];
        s.attributes = Some(vec!["share".into()]);
        let l = load_cloud(CSV.as_bytes(), &s).unwrap();
        assert_eq!(l.dropped, 1);
        assert_eq!(l.cloud.attribute_names().collect::<Vec<_>>(), ["share"]);
    }

    #[test]
    fn row_numbers_without_id_column() {
        let mut s = spec(&["x", "y"]);
        s.id_column = None;
        let l = load_cloud(CSV.as_bytes(), &s).unwrap();
        assert_eq!(l.cloud.row_ids(), ["1", "3", "4"]);
    }

    #[test]
    fn errors() {
        let e = load_cloud(CSV.as_bytes(), &spec(&["z"])).unwrap_err();
        assert_eq!(e.code(), "unknown_column");
        let e = load_cloud("id,x\na,\n".as_bytes(), &spec(&["x"])).unwrap_err();
        assert_eq!(e.code(), "empty_cloud");
        let e = load_cloud("id,x\na,1\na,2\n".as_bytes(), &spec(&["x"])).unwrap_err();
        assert_eq!(e.code(), "invalid_cloud");
    }
}
