//! Synthetic point clouds with known shape.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

/// A unit circle with an opening centred at the top and a horizontal bar
/// along the diameter `y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleWithBar {
    /// Total number of points.
    pub points: usize,
    /// Angular width of the opening, in radians.
    pub gap_angle: f64,
}

impl Default for CircleWithBar {
    fn default() -> Self {
        CircleWithBar { points: 200, gap_angle: 0.6 }
    }
}

/// A generated [`CircleWithBar`] cloud and its geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleWithBarCloud {
    pub cloud: PointCloud,
    /// Largest distance between neighbouring samples along the shape.
    pub sampling_gap: f64,
    /// Straight-line width of the opening.
    pub top_gap: f64,
    /// Rows at the two ends of the arc, either side of the opening.
    pub gap_endpoints: (usize, usize),
}

impl CircleWithBar {
    /// Points are shared between the arc and the bar in proportion to their
    /// lengths and spaced evenly along each. The arc runs clockwise from the
    /// right edge of the opening to its left edge; the bar's end points are
    /// left out because the circle already passes through them. Axes are
    /// named `x` and `y`, row ids `pt000`, `pt001`, ...
    pub fn generate(&self) -> Result<CircleWithBarCloud> {
        if !(self.gap_angle > 0.0 && self.gap_angle < PI) {
            return Err(Error::InvalidParameter("gap angle must lie in (0, pi)".into()));
        }
        if self.points < 16 {
            return Err(Error::InvalidParameter("need at least 16 points".into()));
        }
        let arc_len = 2.0 * PI - self.gap_angle;
        let arc_points = libm::round((self.points as f64) * arc_len / (arc_len + 2.0)) as usize;
        let bar_points = self.points - arc_points;

        let start = PI / 2.0 - self.gap_angle / 2.0;
        let arc_step = arc_len / (arc_points - 1) as f64;
        let bar_step = 2.0 / (bar_points + 1) as f64;

        let mut values = Vec::with_capacity(2 * self.points);
        for i in 0..arc_points {
            let angle = start - arc_step * i as f64;
            values.extend([libm::cos(angle), libm::sin(angle)]);
        }
        for i in 1..=bar_points {
            values.extend([-1.0 + bar_step * i as f64, 0.0]);
        }

        let ids = (0..self.points).map(|i| alloc::format!("pt{i:03}")).collect();
        let cloud = PointCloud::new(ids, vec![String::from("x"), String::from("y")], values)?;
        Ok(CircleWithBarCloud {
            cloud,
            sampling_gap: (2.0 * libm::sin(arc_step / 2.0)).max(bar_step),
            top_gap: 2.0 * libm::sin(self.gap_angle / 2.0),
            gap_endpoints: (0, arc_points - 1),
        })
    }
}
