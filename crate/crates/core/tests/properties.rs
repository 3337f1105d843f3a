use esetlab::logderiv::{cartan_discs, check_cartan, log_derivative_direct, log_derivative_recursive, ZeroPoleData};
use esetlab::measure::IntervalUnion;
use esetlab::{ComplexPoint, Gauge};
use proptest::prelude::*;

fn point(r: f64) -> impl Strategy<Value = ComplexPoint> {
    (-r..r, -r..r).prop_map(|(a, b)| ComplexPoint::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_and_recursive_paths_agree(
        zeros in prop::collection::vec(point(2.0), 1..12),
        poles in prop::collection::vec(point(2.0), 0..8),
        (k, j) in (1usize..=3).prop_flat_map(|k| (Just(k), 0..k)),
        radius in 5.0f64..12.0,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let f = ZeroPoleData::from_parts(&zeros, &poles).unwrap();
        let z = ComplexPoint::from_polar(radius, theta);
        let a = log_derivative_direct(&f, k, j, z).unwrap();
        let b = log_derivative_recursive(&f, k, j, z).unwrap();
        prop_assert!((a - b).norm() <= 1e-6 * b.norm().max(1e-12), "{a} vs {b}");
    }

    #[test]
    fn union_measure_bounded_by_lengths(items in prop::collection::vec((0.0f64..100.0, 0.0f64..5.0), 0..40)) {
        let iv: Vec<(f64, f64)> = items.iter().map(|&(a, l)| (a, a + l)).collect();
        let u = IntervalUnion::from_intervals(iv.clone()).unwrap();
        let total: f64 = iv.iter().map(|(a, b)| b - a).sum();
        prop_assert!(u.measure() <= total + 1e-9);
        let longest = iv.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
        prop_assert!(u.measure() >= longest - 1e-12);
        for w in u.intervals().windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        for &(a, b) in &iv {
            if b > a {
                prop_assert!(u.contains(0.5 * (a + b)));
            }
        }
    }

    #[test]
    fn union_is_commutative(
        a in prop::collection::vec((0.0f64..50.0, 0.0f64..5.0), 0..20),
        b in prop::collection::vec((0.0f64..50.0, 0.0f64..5.0), 0..20),
    ) {
        let ua = IntervalUnion::from_intervals(a.iter().map(|&(x, l)| (x, x + l))).unwrap();
        let ub = IntervalUnion::from_intervals(b.iter().map(|&(x, l)| (x, x + l))).unwrap();
        let (x, y) = (ua.union(&ub), ub.union(&ua));
        prop_assert_eq!(x.intervals(), y.intervals());
        prop_assert!(x.measure() <= ua.measure() + ub.measure() + 1e-9);
    }

    #[test]
    fn concave_power_doubling(a in 0.05f64..0.95, x in 1.0f64..1e8) {
        let g = Gauge::concave_power(a).unwrap();
        prop_assert!(g.value(2.0 * x) <= a.exp2() * g.value(x) * (1.0 + 1e-12));
    }

    #[test]
    fn cartan_guarantees_hold(
        pts in prop::collection::vec(point(3.0), 1..30),
        d in 0.05f64..3.0,
        samples in prop::collection::vec(point(6.0), 200),
    ) {
        let discs = cartan_discs(&pts, d);
        let chk = check_cartan(&pts, d, &discs, &samples);
        prop_assert!(chk.radii_ok, "radii sum {} > 2d = {}", chk.radii_sum, 2.0 * d);
        prop_assert!(chk.violations.is_empty());
    }
}
