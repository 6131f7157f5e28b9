use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use super::graph::BallMapperGraph;
use crate::error::{Error, Result};
use crate::stats;

/// How a per-row function is reduced over the members of a ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregator {
    Mean,
    /// Population standard deviation.
    Sd,
    /// Share of members whose value is non-zero. Rows without a value are
    /// ignored; a ball with no valued rows gets no color.
    FractionTrue,
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Aggregator::Mean),
            "sd" => Ok(Aggregator::Sd),
            "fraction" | "fraction-true" => Ok(Aggregator::FractionTrue),
            other => Err(Error::InvalidParameter(alloc::format!("unknown aggregator `{other}`"))),
        }
    }
}

/// One value per ball (indexed by `id - 1`) plus the bounds of its scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    pub label: String,
    pub values: Vec<Option<f64>>,
    pub scale_min: f64,
    pub scale_max: f64,
}

impl Coloring {
    /// Wrap per-ball values; the scale spans the present values, or is
    /// `[0, 0]` when none is present.
    pub fn from_values(label: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        let (lo, hi) =
            values.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let (scale_min, scale_max) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
        Coloring { label: label.into(), values, scale_min, scale_max }
    }

    pub fn value(&self, ball_id: u32) -> Option<f64> {
        self.values.get((ball_id as usize).checked_sub(1)?).copied().flatten()
    }

    /// Position of a value on the scale, in `[0, 1]`; a flat scale maps to 0.5.
    pub fn normalized(&self, value: f64) -> f64 {
        let span = self.scale_max - self.scale_min;
        if span > 0.0 {
            ((value - self.scale_min) / span).clamp(0.0, 1.0)
        } else {
            0.5
        }
    }
}

/// Color every ball by reducing `row_values` over its members.
pub fn color_by(
    graph: &BallMapperGraph,
    row_values: &[Option<f64>],
    aggregator: Aggregator,
    label: &str,
) -> Result<Coloring> {
    if row_values.len() != graph.n_rows() {
        return Err(Error::DimensionMismatch { expected: graph.n_rows(), got: row_values.len() });
    }
    let mut values = Vec::with_capacity(graph.ball_count());
    for ball in graph.balls() {
        let value = match aggregator {
            Aggregator::Mean | Aggregator::Sd => {
                let xs: Vec<f64> = ball
                    .members
                    .iter()
                    .map(|&r| row_values[r].ok_or_else(|| Error::IncompleteFunction { label: label.into(), row: r }))
                    .collect::<Result<_>>()?;
                if aggregator == Aggregator::Mean {
                    let (lo, hi) =
                        xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
                    Some(stats::mean(&xs).clamp(lo, hi))
                } else {
                    Some(stats::population_sd(&xs))
                }
            }
            Aggregator::FractionTrue => {
                let present: Vec<f64> = ball.members.iter().filter_map(|&r| row_values[r]).collect();
                if present.is_empty() {
                    None
                } else {
                    let hits = present.iter().filter(|&&x| x != 0.0).count();
                    Some(hits as f64 / present.len() as f64)
                }
            }
        };
        values.push(value);
    }
    Ok(Coloring::from_values(label, values))
}
