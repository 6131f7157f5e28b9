//! Least squares against a normal-equations solve in nalgebra.

use ballmapper_core::mapper::{build_graph, build_net};
use ballmapper_core::pointcloud::PointCloud;
use ballmapper_core::regression::{ols, residual_threshold_fractions};
use ballmapper_core::rng::SplitMix64;
use ballmapper_core::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn design(n: usize, p: usize, seed: u64) -> (Vec<f64>, Vec<(String, Vec<f64>)>) {
    let mut rng = SplitMix64::new(seed);
    let columns: Vec<(String, Vec<f64>)> = (0..p)
        .map(|j| (format!("x{j}"), (0..n).map(|_| rng.next_f64() * (j as f64 + 1.0) * 4.0 - 2.0).collect()))
        .collect();
    let beta = [0.5, -1.25, 2.0, 0.75, -3.0, 1.5];
    let y = (0..n)
        .map(|i| {
            let signal: f64 = columns.iter().enumerate().map(|(j, (_, c))| beta[j + 1] * c[i]).sum();
            beta[0] + signal + (rng.next_f64() - 0.5) * 2.0
        })
        .collect();
    (y, columns)
}

struct Normal {
    beta: DVector<f64>,
    se: Vec<f64>,
    r2: f64,
}

fn normal_equations(y: &[f64], columns: &[(String, Vec<f64>)]) -> Normal {
    let n = y.len();
    let p = columns.len() + 1;
    let x = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { columns[j - 1].1[i] });
    let yv = DVector::from_column_slice(y);
    let xtx = x.transpose() * &x;
    let inv = xtx.clone().try_inverse().unwrap();
    let beta = xtx.cholesky().unwrap().solve(&(x.transpose() * &yv));
    let e = &yv - &x * &beta;
    let s2 = e.norm_squared() / (n - p) as f64;
    let ybar = yv.mean();
    let tss: f64 = y.iter().map(|v| (v - ybar).powi(2)).sum();
    Normal { se: (0..p).map(|j| (s2 * inv[(j, j)]).sqrt()).collect(), beta, r2: 1.0 - e.norm_squared() / tss }
}

#[test]
fn matches_normal_equations() {
    let (y, cols) = design(200, 5, 77);
    let fit = ols(&y, &cols).unwrap();
    let oracle = normal_equations(&y, &cols);
    for j in 0..6 {
        assert!((fit.coefficients[j] - oracle.beta[j]).abs() < 1e-8, "beta {j}");
        assert!((fit.std_errors[j] - oracle.se[j]).abs() < 1e-8, "se {j}");
        assert!((fit.t_values[j] - fit.coefficients[j] / fit.std_errors[j]).abs() < 1e-9);
    }
    assert!((fit.r_squared - oracle.r2).abs() < 1e-10);
    assert_eq!(fit.df_residual, 194);
}

#[test]
fn residuals_are_orthogonal_to_the_design() {
    let (y, cols) = design(200, 5, 3);
    let fit = ols(&y, &cols).unwrap();
    let scale: f64 = y.iter().map(|v| v.abs()).sum::<f64>();
    assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-8 * scale);
    for (_, c) in &cols {
        let dot: f64 = c.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-8 * scale);
    }
    for ((f, e), y) in fit.fitted.iter().zip(&fit.residuals).zip(&y) {
        assert!((f + e - y).abs() < 1e-12);
    }
}

#[test]
fn r_squared_recomputed() {
    let (y, cols) = design(120, 3, 11);
    let fit = ols(&y, &cols).unwrap();
    let ybar = y.iter().sum::<f64>() / y.len() as f64;
    let rss: f64 = fit.residuals.iter().map(|e| e * e).sum();
    let tss: f64 = y.iter().map(|v| (v - ybar).powi(2)).sum();
    assert!((fit.r_squared - (1.0 - rss / tss)).abs() < 1e-12);
}

#[test]
fn duplicate_regressor_is_collinear() {
    let (y, mut cols) = design(50, 3, 5);
    let copy = (String::from("copy"), cols[1].1.clone());
    cols.push(copy);
    assert_eq!(ols(&y, &cols).unwrap_err(), Error::Collinear(String::from("copy")));

    let (y, mut cols) = design(50, 2, 5);
    let combo: Vec<f64> = cols[0].1.iter().zip(&cols[1].1).map(|(a, b)| 2.0 * a - b + 1.0).collect();
    cols.push((String::from("combo"), combo));
    assert_eq!(ols(&y, &cols).unwrap_err(), Error::Collinear(String::from("combo")));
}

proptest! {
    #[test]
    fn threshold_fractions_do_not_increase(seed in any::<u64>(), eps in 0.2f64..2.0, n in 20usize..80) {
        let (y, cols) = design(n, 2, seed);
        let fit = ols(&y, &cols).unwrap();
        let cloud = PointCloud::new(
            (0..n).map(|i| format!("r{i}")).collect(),
            vec![String::from("x0"), String::from("x1")],
            (0..n).flat_map(|i| [cols[0].1[i], cols[1].1[i]]).collect(),
        )
        .unwrap();
        let g = build_graph(&cloud, &build_net(&cloud, eps, seed).unwrap()).unwrap();
        let thresholds = [0.0, 0.1, 0.25, 0.5, 0.75, 1.0];
        let maps = residual_threshold_fractions(&g, &fit, &thresholds).unwrap();
        for ball in g.balls() {
            for w in maps.windows(2) {
                prop_assert!(w[1].value(ball.id).unwrap() <= w[0].value(ball.id).unwrap());
            }
        }
    }
}
