//! Ordinary least squares with an intercept, and residual maps on a graph.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::subgroup_fraction;
use crate::error::{Error, Result};
use crate::mapper::{BallMapperGraph, Coloring};
use crate::pointcloud::PointCloud;
use crate::stats::{self, Significance};

/// Name of the intercept term in [`OlsFit::terms`].
pub const INTERCEPT: &str = "Constant";

/// Columns whose `|R_kk|` falls below this fraction of the largest diagonal
/// entry (after scaling every column to unit norm) are treated as linearly
/// dependent on the columns before them.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    /// Intercept first, then regressors in the order given.
    pub terms: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Classical (homoskedastic) standard errors.
    pub std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub stars: Vec<Significance>,
    pub r_squared: f64,
    pub fitted: Vec<f64>,
    /// `observed - fitted`, per row.
    pub residuals: Vec<f64>,
    pub df_residual: usize,
}

/// Regress a cloud column on other columns (axes or numeric attributes).
pub fn ols_fit(cloud: &PointCloud, outcome: &str, regressors: &[&str]) -> Result<OlsFit> {
    let y = cloud.complete_column(outcome)?;
    let columns: Vec<(String, Vec<f64>)> =
        regressors.iter().map(|&name| Ok((String::from(name), cloud.complete_column(name)?))).collect::<Result<_>>()?;
    ols(&y, &columns)
}

/// Least squares of `y` on an intercept plus `columns`, solved by
/// Householder QR of the column-scaled design matrix.
pub fn ols(y: &[f64], columns: &[(String, Vec<f64>)]) -> Result<OlsFit> {
    let n = y.len();
    let p = columns.len() + 1;
    if n <= p {
        return Err(Error::SampleTooSmall { needed: p + 1, got: n });
    }
    for (_, col) in columns {
        if col.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: col.len() });
        }
    }
    if y.iter().chain(columns.iter().flat_map(|(_, c)| c.iter())).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("regression input contains a non-finite value".into()));
    }
    let terms: Vec<String> =
        core::iter::once(String::from(INTERCEPT)).chain(columns.iter().map(|(name, _)| name.clone())).collect();

    // Column-major design, each column scaled to unit Euclidean norm.
    let mut a = vec![0.0; n * p];
    let mut scale = vec![0.0; p];
    for k in 0..p {
        let col = &mut a[k * n..(k + 1) * n];
        if k == 0 {
            col.fill(1.0);
        } else {
            col.copy_from_slice(&columns[k - 1].1);
        }
        let norm = libm::sqrt(col.iter().map(|v| v * v).sum());
        if norm == 0.0 {
            return Err(Error::Collinear(terms[k].clone()));
        }
        col.iter_mut().for_each(|v| *v /= norm);
        scale[k] = norm;
    }

    let mut qty = y.to_vec();
    let mut v = vec![0.0; n];
    for k in 0..p {
        let norm_x = libm::sqrt(a[k * n + k..(k + 1) * n].iter().map(|x| x * x).sum());
        let x0 = a[k * n + k];
        let alpha = if x0 >= 0.0 { -norm_x } else { norm_x };
        let tail = &mut v[k..];
        tail.copy_from_slice(&a[k * n + k..(k + 1) * n]);
        tail[0] -= alpha;
        let vnorm = libm::sqrt(tail.iter().map(|x| x * x).sum());
        if vnorm > 0.0 {
            tail.iter_mut().for_each(|x| *x /= vnorm);
            for j in k..p {
                let col = &mut a[j * n + k..(j + 1) * n];
                reflect(tail, col);
            }
            reflect(tail, &mut qty[k..]);
        }
    }

    let r = |i: usize, j: usize| a[j * n + i];
    let max_diag = (0..p).map(|k| libm::fabs(r(k, k))).fold(0.0, f64::max);
    if let Some(k) = (0..p).find(|&k| libm::fabs(r(k, k)) <= RANK_TOLERANCE * max_diag) {
        return Err(Error::Collinear(terms[k].clone()));
    }

    // Back substitution for the scaled coefficients.
    let mut beta_scaled = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| r(i, j) * beta_scaled[j]).sum();
        beta_scaled[i] = (qty[i] - s) / r(i, i);
    }
    let coefficients: Vec<f64> = beta_scaled.iter().zip(&scale).map(|(b, s)| b / s).collect();

    let fitted: Vec<f64> =
        (0..n).map(|i| coefficients[0] + (1..p).map(|k| coefficients[k] * columns[k - 1].1[i]).sum::<f64>()).collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(o, f)| o - f).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let y_mean = stats::mean(y);
    let sst: f64 = y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum();
    let r_squared = if sst > 0.0 { (1.0 - ssr / sst).clamp(0.0, 1.0) } else { 1.0 };

    // diag((R^T R)^-1) are the squared row norms of R^-1.
    let mut r_inv = vec![0.0; p * p];
    for col in 0..p {
        for i in (0..=col).rev() {
            let rhs = if i == col { 1.0 } else { 0.0 };
            let s: f64 = (i + 1..=col).map(|j| r(i, j) * r_inv[j * p + col]).sum();
            r_inv[i * p + col] = (rhs - s) / r(i, i);
        }
    }
    let df_residual = n - p;
    let sigma2 = ssr / df_residual as f64;
    let std_errors: Vec<f64> = (0..p)
        .map(|i| {
            let row_norm2: f64 = r_inv[i * p..(i + 1) * p].iter().map(|x| x * x).sum();
            libm::sqrt(sigma2 * row_norm2) / scale[i]
        })
        .collect();
    let t_values: Vec<f64> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(&b, &se)| {
            if se > 0.0 {
                b / se
            } else if b == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(b)
            }
        })
        .collect();
    let p_values: Vec<f64> = t_values.iter().map(|&t| stats::student_t_two_sided_p(t, df_residual as f64)).collect();
    let stars = p_values.iter().map(|&p| Significance::from_p(p)).collect();

    Ok(OlsFit { terms, coefficients, std_errors, t_values, p_values, stars, r_squared, fitted, residuals, df_residual })
}

/// Apply `I - 2 v v^T` to `x` in place (`v` has unit norm).
#[inline]
fn reflect(v: &[f64], x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= 2.0 * dot * vi;
    }
}

impl OlsFit {
    pub fn coefficient(&self, term: &str) -> Option<f64> {
        self.terms.iter().position(|t| t == term).map(|i| self.coefficients[i])
    }
}

/// For each threshold, the share of every ball's members whose absolute
/// residual exceeds it.
pub fn residual_threshold_fractions(
    graph: &BallMapperGraph,
    fit: &OlsFit,
    thresholds: &[f64],
) -> Result<Vec<Coloring>> {
    if fit.residuals.len() != graph.n_rows() {
        return Err(Error::Consistency(alloc::format!(
            "fit has {} residuals, graph covers {} rows",
            fit.residuals.len(),
            graph.n_rows()
        )));
    }
    thresholds
        .iter()
        .map(|&t| {
            let flags: Vec<bool> = fit.residuals.iter().map(|e| libm::fabs(*e) > t).collect();
            subgroup_fraction(graph, &flags, &alloc::format!("|residual| > {t}"))
        })
        .collect()
}
