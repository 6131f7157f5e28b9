use ballmapper_core::pointcloud::{axis_stats, quartile_split, Attribute, PointCloud};
use proptest::prelude::*;

fn two_pass_sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn axis_stats_match_brute_force(
        xs in prop::collection::vec(-1e4f64..1e4, 1..10_000),
        shift in -1e3f64..1e3,
    ) {
        let n = xs.len();
        let cloud = PointCloud::new(
            (0..n).map(|i| format!("r{i}")).collect(),
            vec!["u".into(), "v".into()],
            xs.iter().flat_map(|x| [*x, x * 0.5 + shift]).collect(),
        )
        .unwrap();
        let stats = axis_stats(&cloud);
        let v: Vec<f64> = xs.iter().map(|x| x * 0.5 + shift).collect();
        for (s, col) in stats.iter().zip([&xs, &v]) {
            let want = two_pass_sd(col);
            prop_assert!((s.sd - want).abs() <= 1e-12 * want.max(1e-300) + 1e-300, "{} vs {}", s.sd, want);
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
        }
    }

    #[test]
    fn quartile_groups_are_disjoint_and_sized(xs in prop::collection::vec(-100i32..100, 4..400)) {
        let n = xs.len();
        let cloud = PointCloud::new((0..n).map(|i| format!("r{i}")).collect(), vec!["x".into()], vec![0.0; n])
            .unwrap()
            .with_attribute("f", Attribute::Numeric(xs.iter().map(|&x| Some(x as f64)).collect()))
            .unwrap();
        let (lo, hi) = quartile_split(&cloud, "f").unwrap();
        let k = n.div_ceil(4);
        prop_assert!(lo.len() >= k && hi.len() >= k);
        let max_lo = lo.iter().map(|&r| xs[r]).max().unwrap();
        let min_hi = hi.iter().map(|&r| xs[r]).min().unwrap();
        // Ties across the cuts can only overlap when every value is equal.
        if max_lo < min_hi {
            prop_assert!(lo.iter().all(|r| !hi.contains(r)));
        } else {
            prop_assert_eq!(max_lo, min_hi);
        }
        let mut sorted = xs.clone();
        sorted.sort();
        prop_assert_eq!(max_lo, sorted[k - 1]);
        prop_assert_eq!(min_hi, sorted[n - k]);
    }

    #[test]
    fn distinct_values_split_exactly(n in 4usize..700) {
        let cloud = PointCloud::new((0..n).map(|i| format!("r{i}")).collect(), vec!["x".into()], vec![0.0; n])
            .unwrap()
            .with_attribute("f", Attribute::Numeric((0..n).rev().map(|i| Some(i as f64)).collect()))
            .unwrap();
        let (lo, hi) = quartile_split(&cloud, "f").unwrap();
        prop_assert_eq!(lo.len(), n.div_ceil(4));
        prop_assert_eq!(hi.len(), n.div_ceil(4));
        prop_assert!(lo.iter().all(|r| !hi.contains(r)));
    }
}

#[test]
fn six_hundred_thirty_two_rows() {
    let n = 632;
    let cloud = PointCloud::new((0..n).map(|i| format!("r{i}")).collect(), vec!["x".into()], vec![0.0; n])
        .unwrap()
        .with_attribute("f", Attribute::Numeric((0..n).map(|i| Some(i as f64 * 0.1)).collect()))
        .unwrap();
    let (lo, hi) = quartile_split(&cloud, "f").unwrap();
    assert_eq!((lo.len(), hi.len()), (158, 158));
}
