//! Oracles and properties for distances, comparisons, fractions and t-tests.

use ballmapper_core::analysis::{
    ball_summary, compare_groups, distance_coloring, normalized_distance, radius_sweep, subgroup_fraction, ZeroScale,
};
use ballmapper_core::mapper::{build_graph, build_net, BallMapperGraph};
use ballmapper_core::pointcloud::{axis_stats, PointCloud};
use ballmapper_core::stats::{ttest_two_sample, ttest_two_sample_with, TTestKind};
use ballmapper_core::Error;
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

fn cloud_from(points: &[Vec<f64>]) -> PointCloud {
    PointCloud::new(
        (0..points.len()).map(|i| format!("r{i}")).collect(),
        (0..points[0].len()).map(|j| format!("a{j}")).collect(),
        points.iter().flatten().copied().collect(),
    )
    .unwrap()
}

fn pop_sd(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

fn brute_sigmas(cloud: &PointCloud) -> Vec<f64> {
    (0..cloud.dim()).map(|j| pop_sd(&cloud.rows().map(|r| r[j]).collect::<Vec<_>>())).collect()
}

fn brute_distance(a: &[f64], b: &[f64], s: &[f64]) -> f64 {
    a.iter().zip(b).zip(s).map(|((x, y), s)| (x - y).abs() / s).sum()
}

fn mean_of(cloud: &PointCloud, rows: &[usize], j: usize) -> f64 {
    rows.iter().map(|&r| cloud.row(r)[j]).sum::<f64>() / rows.len() as f64
}

/// Points with every axis spread out, so no scale is zero.
fn arb_points() -> impl Strategy<Value = (Vec<Vec<f64>>, f64, u64)> {
    (1usize..=4, 4usize..=50).prop_flat_map(|(d, n)| {
        (prop::collection::vec(prop::collection::vec(-5.0f64..5.0, d), n), 0.5f64..6.0, any::<u64>())
    })
}

fn graph_of(points: &[Vec<f64>], eps: f64, seed: u64) -> (PointCloud, BallMapperGraph) {
    let cloud = cloud_from(points);
    let g = build_graph(&cloud, &build_net(&cloud, eps, seed).unwrap()).unwrap();
    (cloud, g)
}

fn positive_scales(cloud: &PointCloud) -> bool {
    brute_sigmas(cloud).iter().all(|s| *s > 1e-6)
}

#[test]
fn distance_rejects_zero_scale_by_default() {
    assert!(matches!(normalized_distance(&[1.0, 2.0], &[0.0, 2.0], &[1.0, 0.0]), Err(Error::DegenerateScale(_))));
}

#[test]
fn symmetric_cloud_target_is_strictly_closest() {
    // Four clusters at the corners of a square; the top-right cluster is the target.
    let mut points = Vec::new();
    for (cx, cy) in [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)] {
        for (dx, dy) in [(0.0, 0.0), (0.3, 0.0), (0.0, 0.3), (0.3, 0.3)] {
            points.push(vec![cx + dx, cy + dy]);
        }
    }
    let (cloud, g) = graph_of(&points, 1.0, 5);
    assert_eq!(g.ball_count(), 4);
    let target =
        g.balls().iter().find(|b| cloud.row(b.landmark)[0] > 5.0 && cloud.row(b.landmark)[1] > 5.0).unwrap().id;
    let col = distance_coloring(&g, &cloud, &[target], &axis_stats(&cloud), ZeroScale::Error).unwrap();
    let own = col.value(target).unwrap();
    for b in g.balls() {
        if b.id != target {
            assert!(col.value(b.id).unwrap() > own);
        }
    }
}

#[test]
fn ttest_matches_statrs() {
    let a = [2.1, 3.4, 1.9, 5.0, 4.4, 3.3, 2.8];
    let b = [4.0, 5.1, 6.3, 5.5, 4.9, 7.2];
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let ma = a.iter().sum::<f64>() / na;
    let mb = b.iter().sum::<f64>() / nb;
    let va = a.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / (na - 1.0);
    let vb = b.iter().map(|x| (x - mb).powi(2)).sum::<f64>() / (nb - 1.0);

    let se2 = va / na + vb / nb;
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    let p = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, df).unwrap().cdf(t.abs()));
    let w = ttest_two_sample(&a, &b).unwrap();
    assert!((w.t - t).abs() < 1e-12);
    assert!((w.df - df).abs() < 1e-12);
    assert!((w.p - p).abs() < 1e-9, "{} vs {}", w.p, p);

    let pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    let tp = (ma - mb) / (pooled * (1.0 / na + 1.0 / nb)).sqrt();
    let pp = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, na + nb - 2.0).unwrap().cdf(tp.abs()));
    let s = ttest_two_sample_with(&a, &b, TTestKind::Pooled).unwrap();
    assert!((s.t - tp).abs() < 1e-12);
    assert!((s.p - pp).abs() < 1e-9);
}

#[test]
fn sweep_extremes() {
    let points: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64, (i * i % 5) as f64]).collect();
    let cloud = cloud_from(&points);
    let rows = radius_sweep(&cloud, &[0.1, 1e6], 9).unwrap();
    assert_eq!(rows[0].ball_count, 12);
    assert_eq!(rows[0].size_sd, 0.0);
    assert_eq!(rows[0].edges_per_ball, 0.0);
    assert_eq!(rows[1].ball_count, 1);
    assert_eq!(rows[1].size_mean, 12.0);
}

proptest! {
    #[test]
    fn distance_is_a_metric(
        v in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3, -1e3f64..1e3, 1e-3f64..1e2), 1..8),
    ) {
        let a: Vec<f64> = v.iter().map(|t| t.0).collect();
        let b: Vec<f64> = v.iter().map(|t| t.1).collect();
        let c: Vec<f64> = v.iter().map(|t| t.2).collect();
        let s: Vec<f64> = v.iter().map(|t| t.3).collect();
        let ab = normalized_distance(&a, &b, &s).unwrap();
        let ba = normalized_distance(&b, &a, &s).unwrap();
        let ac = normalized_distance(&a, &c, &s).unwrap();
        let bc = normalized_distance(&b, &c, &s).unwrap();
        prop_assert_eq!(normalized_distance(&a, &a, &s).unwrap(), 0.0);
        prop_assert_eq!(ab, ba);
        prop_assert!(ab >= 0.0);
        prop_assert!(ac <= ab + bc + 1e-9 * (ab + bc).max(1.0));
        let brute = brute_distance(&a, &b, &s);
        prop_assert!((ab - brute).abs() <= 1e-12 * brute.max(1.0));
    }

    #[test]
    fn comparison_rows_are_consistent((points, eps, seed) in arb_points()) {
        let (cloud, g) = graph_of(&points, eps, seed);
        prop_assume!(positive_scales(&cloud) && g.ball_count() >= 2);
        let half = g.ball_count() as u32 / 2;
        let a: Vec<u32> = (1..=half).collect();
        let b: Vec<u32> = (half + 1..=g.ball_count() as u32).collect();
        let report = compare_groups(&g, &cloud, &a, &b, &axis_stats(&cloud)).unwrap();
        let rows_a = g.group_rows(&a).unwrap();
        let rows_b = g.group_rows(&b).unwrap();
        let sig = brute_sigmas(&cloud);
        prop_assert_eq!(report.size_a, rows_a.len());
        prop_assert_eq!(report.size_b, rows_b.len());
        for (j, row) in report.rows.iter().enumerate() {
            prop_assert!((row.mean_a - mean_of(&cloud, &rows_a, j)).abs() < 1e-9);
            prop_assert!((row.mean_b - mean_of(&cloud, &rows_b, j)).abs() < 1e-9);
            prop_assert!((row.diff - (row.mean_a - row.mean_b)).abs() < 1e-12);
            prop_assert!((row.std_diff * sig[j] - row.diff).abs() < 1e-9);
        }
    }

    #[test]
    fn fractions_count_flags((points, eps, seed) in arb_points(), mask in any::<u64>()) {
        let (cloud, g) = graph_of(&points, eps, seed);
        let flags: Vec<bool> = (0..cloud.len()).map(|r| mask >> (r % 64) & 1 == 1).collect();
        let col = subgroup_fraction(&g, &flags, "flag").unwrap();
        for ball in g.balls() {
            let hits = ball.members.iter().filter(|&&r| flags[r]).count();
            let v = col.value(ball.id).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert_eq!(v, hits as f64 / ball.size() as f64);
        }
    }

    #[test]
    fn single_row_target_matches_brute_force((points, seed) in (1usize..=3, 4usize..=40).prop_flat_map(|(d, n)| {
        (prop::collection::vec(prop::collection::vec(-5.0f64..5.0, d), n), any::<u64>())
    })) {
        // A radius below the closest pair gives one row per ball.
        let cloud = cloud_from(&points);
        prop_assume!(positive_scales(&cloud));
        let mut min_gap = f64::INFINITY;
        for a in 0..cloud.len() {
            for b in a + 1..cloud.len() {
                let d: f64 = cloud.row(a).iter().zip(cloud.row(b)).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                min_gap = min_gap.min(d);
            }
        }
        prop_assume!(min_gap > 1e-6);
        let g = build_graph(&cloud, &build_net(&cloud, min_gap * 0.4, seed).unwrap()).unwrap();
        let target = g.balls()[0].clone();
        let sig = brute_sigmas(&cloud);
        let col = distance_coloring(&g, &cloud, &[target.id], &axis_stats(&cloud), ZeroScale::Error).unwrap();
        for ball in g.balls() {
            let want = brute_distance(cloud.row(ball.landmark), cloud.row(target.landmark), &sig);
            prop_assert!((col.value(ball.id).unwrap() - want).abs() < 1e-9);
        }
        prop_assert_eq!(col.value(target.id).unwrap(), 0.0);
    }

    #[test]
    fn summaries_match_brute_force((points, eps, seed) in arb_points()) {
        let (cloud, g) = graph_of(&points, eps, seed);
        let summaries = ball_summary(&g, &cloud, None).unwrap();
        for (ball, s) in g.balls().iter().zip(&summaries) {
            prop_assert_eq!(s.ball_id, ball.id);
            prop_assert_eq!(s.size, ball.size());
            for j in 0..cloud.dim() {
                prop_assert!((s.axis_means[j] - mean_of(&cloud, &ball.members, j)).abs() < 1e-9);
                let col: Vec<f64> = ball.members.iter().map(|&r| cloud.row(r)[j]).collect();
                prop_assert!((s.axis_sds[j] - pop_sd(&col)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ttest_is_antisymmetric(
        a in prop::collection::vec(-50.0f64..50.0, 2..30),
        b in prop::collection::vec(-50.0f64..50.0, 2..30),
    ) {
        let ab = ttest_two_sample(&a, &b).unwrap();
        let ba = ttest_two_sample(&b, &a).unwrap();
        prop_assert_eq!(ab.t, -ba.t);
        prop_assert_eq!(ab.p, ba.p);
        prop_assert!((0.0..=1.0).contains(&ab.p));
    }

    #[test]
    fn ttest_p_matches_statrs(
        a in prop::collection::vec(-50.0f64..50.0, 3..40),
        b in prop::collection::vec(-50.0f64..50.0, 3..40),
    ) {
        let w = ttest_two_sample(&a, &b).unwrap();
        prop_assume!(w.df.is_finite() && w.t.is_finite());
        let p = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, w.df).unwrap().cdf(w.t.abs()));
        prop_assert!((w.p - p).abs() < 1e-9, "{} vs {}", w.p, p);
    }
}
