//! Canonical JSON for graphs, colorings and reports.
//!
//! Objects are written with sorted keys and two-space indentation, numbers
//! in shortest round-trip form, and a trailing newline, so equal inputs
//! give byte-identical files.
//!
//! Graph layout:
//!
//! ```text
//! { "axes": [name, ...],
//!   "balls": [{ "id": 1, "landmark": row_id, "members": [row_id, ...], "size": n }, ...],
//!   "colorings": { label: { "1": value, ... } },      (optional)
//!   "edges": [[a, b], ...],
//!   "epsilon": real,
//!   "seed": int }
//! ```
//!
//! Edges are sorted with `a < b`; members follow cloud row order. A ball
//! with no value in a coloring has no key in that coloring's map.

use std::collections::BTreeMap;

use ballmapper_core::analysis::{ColumnTest, ComparisonReport, SweepRow};
use ballmapper_core::mapper::{Ball, BallMapperGraph, Coloring, Position};
use ballmapper_core::metric::Metric;
use ballmapper_core::pointcloud::{AxisStats, PointCloud};
use ballmapper_core::regression::OlsFit;
use ballmapper_core::Error;
use serde_json::{json, Map, Value};

use crate::error::{AppError, AppResult};

/// Pretty-printed, newline-terminated.
pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values always serialize");
    s.push('\n');
    s
}

fn coloring_map(coloring: &Coloring) -> Value {
    let map: Map<String, Value> =
        coloring.values.iter().enumerate().filter_map(|(i, v)| v.map(|v| ((i + 1).to_string(), json!(v)))).collect();
    Value::Object(map)
}

pub fn graph_to_value(graph: &BallMapperGraph, cloud: &PointCloud, colorings: &[Coloring]) -> AppResult<Value> {
    if cloud.len() != graph.n_rows() {
        return Err(
            Error::Consistency(format!("graph covers {} rows, cloud has {}", graph.n_rows(), cloud.len())).into()
        );
    }
    let ids = cloud.row_ids();
    let balls: Vec<Value> = graph
        .balls()
        .iter()
        .map(|b| {
            json!({
                "id": b.id,
                "landmark": ids[b.landmark],
                "members": b.members.iter().map(|&r| ids[r].as_str()).collect::<Vec<_>>(),
                "size": b.size(),
            })
        })
        .collect();
    let mut root = json!({
        "epsilon": graph.epsilon(),
        "seed": graph.seed(),
        "axes": graph.axis_names(),
        "balls": balls,
        "edges": graph.edges().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
    });
    if !colorings.is_empty() {
        let mut map = Map::new();
        for c in colorings {
            check_coloring(graph, c)?;
            map.insert(c.label.clone(), coloring_map(c));
        }
        root["colorings"] = Value::Object(map);
    }
    Ok(root)
}

pub fn graph_to_string(graph: &BallMapperGraph, cloud: &PointCloud, colorings: &[Coloring]) -> AppResult<String> {
    Ok(to_canonical_string(&graph_to_value(graph, cloud, colorings)?))
}

pub(crate) fn check_coloring(graph: &BallMapperGraph, coloring: &Coloring) -> AppResult<()> {
    if coloring.values.len() != graph.ball_count() {
        return Err(Error::Consistency(format!(
            "coloring `{}` has {} values, graph has {} balls",
            coloring.label,
            coloring.values.len(),
            graph.ball_count()
        ))
        .into());
    }
    Ok(())
}

fn field<'a>(obj: &'a Value, key: &str) -> AppResult<&'a Value> {
    obj.get(key).ok_or_else(|| AppError::Format(format!("missing field `{key}`")))
}

fn as_u64(v: &Value, what: &str) -> AppResult<u64> {
    v.as_u64().ok_or_else(|| AppError::Format(format!("`{what}` must be a non-negative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> AppResult<&'a str> {
    v.as_str().ok_or_else(|| AppError::Format(format!("`{what}` must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> AppResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| AppError::Format(format!("`{what}` must be an array")))
}

fn ball_id(v: &Value) -> AppResult<u32> {
    u32::try_from(as_u64(v, "ball id")?).map_err(|_| AppError::Format("ball id out of range".into()))
}

/// Parse graph JSON against the cloud it was built from. Returns the graph
/// and any embedded colorings (in label order).
pub fn graph_from_value(value: &Value, cloud: &PointCloud) -> AppResult<(BallMapperGraph, Vec<Coloring>)> {
    let epsilon =
        field(value, "epsilon")?.as_f64().ok_or_else(|| AppError::Format("`epsilon` must be a number".into()))?;
    let seed = as_u64(field(value, "seed")?, "seed")?;
    let axes = as_array(field(value, "axes")?, "axes")?
        .iter()
        .map(|a| as_str(a, "axes").map(String::from))
        .collect::<AppResult<Vec<_>>>()?;
    if axes != cloud.axis_names() {
        return Err(
            Error::Consistency(format!("graph axes {axes:?} differ from cloud axes {:?}", cloud.axis_names())).into()
        );
    }
    let row = |v: &Value| -> AppResult<usize> {
        let id = as_str(v, "row id")?;
        cloud.row_index(id).ok_or_else(|| Error::Consistency(format!("row `{id}` is not in the cloud")).into())
    };
    let balls = as_array(field(value, "balls")?, "balls")?
        .iter()
        .map(|b| {
            let members = as_array(field(b, "members")?, "members")?.iter().map(row).collect::<AppResult<Vec<_>>>()?;
            let ball = Ball { id: ball_id(field(b, "id")?)?, landmark: row(field(b, "landmark")?)?, members };
            if as_u64(field(b, "size")?, "size")? != ball.size() as u64 {
                return Err(Error::Consistency(format!("ball {} size does not match its members", ball.id)).into());
            }
            Ok(ball)
        })
        .collect::<AppResult<Vec<_>>>()?;
    let edges = as_array(field(value, "edges")?, "edges")?
        .iter()
        .map(|e| match as_array(e, "edge")?.as_slice() {
            [a, b] => Ok((ball_id(a)?, ball_id(b)?)),
            _ => Err(AppError::Format("an edge must have two ends".into())),
        })
        .collect::<AppResult<Vec<_>>>()?;
    let graph = BallMapperGraph::from_parts(epsilon, seed, Metric::Euclidean, axes, cloud.len(), balls, edges)?;

    let mut colorings = Vec::new();
    if let Some(map) = value.get("colorings") {
        let map = map.as_object().ok_or_else(|| AppError::Format("`colorings` must be an object".into()))?;
        for (label, values) in map {
            colorings.push(values_from_map(label, values, graph.ball_count())?);
        }
    }
    Ok((graph, colorings))
}

pub fn parse_graph(text: &str, cloud: &PointCloud) -> AppResult<(BallMapperGraph, Vec<Coloring>)> {
    graph_from_value(&serde_json::from_str(text)?, cloud)
}

fn values_from_map(label: &str, values: &Value, ball_count: usize) -> AppResult<Coloring> {
    let obj = values.as_object().ok_or_else(|| AppError::Format(format!("coloring `{label}` must be an object")))?;
    let mut out = vec![None; ball_count];
    for (key, v) in obj {
        let id: usize = key.parse().map_err(|_| AppError::Format(format!("bad ball id `{key}`")))?;
        let slot = id.checked_sub(1).and_then(|i| out.get_mut(i)).ok_or(Error::UnknownBall(id as u32))?;
        *slot = Some(v.as_f64().ok_or_else(|| AppError::Format(format!("coloring `{label}` value must be a number")))?);
    }
    Ok(Coloring::from_values(label, out))
}

/// `{ "label", "scale_max", "scale_min", "values": { "1": v, ... } }`
pub fn coloring_to_value(coloring: &Coloring) -> Value {
    json!({
        "label": coloring.label,
        "scale_min": coloring.scale_min,
        "scale_max": coloring.scale_max,
        "values": coloring_map(coloring),
    })
}

pub fn coloring_from_value(value: &Value, ball_count: usize) -> AppResult<Coloring> {
    let label = as_str(field(value, "label")?, "label")?;
    values_from_map(label, field(value, "values")?, ball_count)
}

pub fn sweep_to_value(rows: &[SweepRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "epsilon": r.epsilon,
                    "balls": r.ball_count,
                    "size_mean": r.size_mean,
                    "size_sd": r.size_sd,
                    "edges_per_ball": r.edges_per_ball,
                })
            })
            .collect(),
    )
}

pub fn comparison_to_value(report: &ComparisonReport) -> Value {
    json!({
        "group_a": report.group_a,
        "group_b": report.group_b,
        "size_a": report.size_a,
        "size_b": report.size_b,
        "rows": report.rows.iter().map(|r| json!({
            "axis": r.axis,
            "mean_a": r.mean_a,
            "mean_b": r.mean_b,
            "diff": r.diff,
            "std_diff": r.std_diff,
        })).collect::<Vec<_>>(),
    })
}

pub fn ttests_to_value(tests: &[ColumnTest]) -> Value {
    Value::Array(
        tests
            .iter()
            .map(|c| {
                json!({
                    "column": c.column,
                    "mean_a": c.test.mean_a,
                    "mean_b": c.test.mean_b,
                    "diff": c.test.diff,
                    "t": c.test.t,
                    "df": c.test.df,
                    "p": c.test.p,
                    "stars": c.test.stars.stars(),
                })
            })
            .collect(),
    )
}

pub fn ols_to_value(fit: &OlsFit) -> Value {
    let terms: Vec<Value> = (0..fit.terms.len())
        .map(|i| {
            json!({
                "term": fit.terms[i],
                "estimate": fit.coefficients[i],
                "std_error": fit.std_errors[i],
                "t": fit.t_values[i],
                "p": fit.p_values[i],
                "stars": fit.stars[i].stars(),
            })
        })
        .collect();
    json!({ "terms": terms, "r_squared": fit.r_squared, "df_residual": fit.df_residual, "n": fit.residuals.len() })
}

pub fn axis_stats_to_value(stats: &[AxisStats]) -> Value {
    Value::Array(
        stats
            .iter()
            .map(|s| json!({ "axis": s.axis_name, "mean": s.mean, "sd": s.sd, "min": s.min, "max": s.max }))
            .collect(),
    )
}

/// `{ "1": [x, y], ... }`
pub fn layout_to_value(positions: &[Position]) -> Value {
    let map: BTreeMap<String, [f64; 2]> =
        positions.iter().enumerate().map(|(i, p)| ((i + 1).to_string(), *p)).collect();
    json!(map)
}
