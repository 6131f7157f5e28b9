//! Descriptive statistics, two-sample t-tests and the Student t tail.

use core::fmt;

use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard deviation with divisor `n`.
pub fn population_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss: f64 = values.iter().map(|x| (x - m) * (x - m)).sum();
    libm::sqrt(ss / values.len() as f64)
}

/// Variance with divisor `n - 1`.
pub fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss: f64 = values.iter().map(|x| (x - m) * (x - m)).sum();
    ss / (values.len() - 1) as f64
}

/// Significance marker: `*` below 5%, `**` below 1%, `***` below 0.1%.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Significance {
    None,
    FivePercent,
    OnePercent,
    TenthPercent,
}

impl Significance {
    pub fn from_p(p: f64) -> Self {
        if p < 0.001 {
            Significance::TenthPercent
        } else if p < 0.01 {
            Significance::OnePercent
        } else if p < 0.05 {
            Significance::FivePercent
        } else {
            Significance::None
        }
    }

    pub fn stars(self) -> &'static str {
        match self {
            Significance::None => "",
            Significance::FivePercent => "*",
            Significance::OnePercent => "**",
            Significance::TenthPercent => "***",
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.stars())
    }
}

/// Variance assumption of a two-sample t-test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TTestKind {
    /// Unequal variances, Welch–Satterthwaite degrees of freedom.
    #[default]
    Welch,
    /// Pooled variance, `n_a + n_b - 2` degrees of freedom.
    Pooled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TTest {
    pub mean_a: f64,
    pub mean_b: f64,
    /// `mean_a - mean_b`
    pub diff: f64,
    pub t: f64,
    pub df: f64,
    /// Two-sided p-value.
    pub p: f64,
    pub stars: Significance,
}

/// Welch two-sample t-test for equality of means.
pub fn ttest_two_sample(a: &[f64], b: &[f64]) -> Result<TTest> {
    ttest_two_sample_with(a, b, TTestKind::Welch)
}

pub fn ttest_two_sample_with(a: &[f64], b: &[f64], kind: TTestKind) -> Result<TTest> {
    for sample in [a, b] {
        if sample.len() < 2 {
            return Err(Error::SampleTooSmall { needed: 2, got: sample.len() });
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("sample contains a non-finite value".into()));
        }
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mean_a, mean_b) = (mean(a), mean(b));
    let (var_a, var_b) = (sample_variance(a), sample_variance(b));
    let diff = mean_a - mean_b;

    let (se2, df) = match kind {
        TTestKind::Welch => {
            let (qa, qb) = (var_a / na, var_b / nb);
            let denom = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
            let df = if denom > 0.0 { (qa + qb) * (qa + qb) / denom } else { na + nb - 2.0 };
            (qa + qb, df)
        }
        TTestKind::Pooled => {
            let df = na + nb - 2.0;
            let pooled = ((na - 1.0) * var_a + (nb - 1.0) * var_b) / df;
            (pooled * (1.0 / na + 1.0 / nb), df)
        }
    };

    let t = if se2 > 0.0 {
        diff / libm::sqrt(se2)
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    };
    let p = student_t_two_sided_p(t, df);
    Ok(TTest { mean_a, mean_b, diff, t, df, p, stars: Significance::from_p(p) })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    if t == 0.0 {
        return 1.0;
    }
    regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// Regularised incomplete beta function `I_x(a, b)`.
///
/// Evaluated with the modified Lentz continued fraction, switching to the
/// symmetry relation `I_x(a, b) = 1 - I_{1-x}(b, a)` where the fraction
/// converges slowly.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b) + a * libm::log(x) + b * libm::log1p(-x);
    let front = libm::exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let guard = |v: f64| if libm::fabs(v) < TINY { TINY } else { v };

    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + even * d);
        c = guard(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + odd * d);
        c = guard(1.0 + odd / c);
        let delta = d * c;
        h *= delta;
        if libm::fabs(delta - 1.0) < EPS {
            break;
        }
    }
    h
}
