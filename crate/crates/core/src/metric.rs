//! Distances between rows of a point cloud.

use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// Distance used for ball membership. Ball Mapper graphs are built on raw
/// axis values; Euclidean is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Metric {
    /// Distance between two equal-length coordinate slices.
    ///
    /// Coordinates are folded left to right, so the value is reproducible
    /// bit-for-bit by anything that sums in the same order.
    #[inline]
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Metric::Euclidean => {
                let mut acc = 0.0;
                for (x, y) in a.iter().zip(b) {
                    let d = x - y;
                    acc += d * d;
                }
                libm::sqrt(acc)
            }
            Metric::Manhattan => a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).sum(),
            Metric::Chebyshev => a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).fold(0.0, f64::max),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
            Metric::Chebyshev => "chebyshev",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "manhattan" => Ok(Metric::Manhattan),
            "chebyshev" => Ok(Metric::Chebyshev),
            other => Err(Error::InvalidParameter(alloc::format!("unknown metric `{other}`"))),
        }
    }
}
