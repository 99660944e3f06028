use proptest::prelude::*;
use specsemi_core::harness::*;
use specsemi_core::semigroup::{Basis, KernelFamily, SequenceData, SymbolSpec, TimeGrid};
use specsemi_core::JacobiParams;

#[test]
fn unit_weight_constant_is_one() {
    let w = WeightSeq::unit(-20, 300);
    for p in [1.0, 1.2, 2.0, 5.0] {
        assert!((ap_constant(&w, p, (-20, 300)).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn power_weights_classified_by_window_doubling() {
    let inside = [
        (1.0, -0.5),
        (1.0, 0.0),
        (2.0, -0.5),
        (2.0, 0.0),
        (2.0, 0.5),
        (3.0, 0.5),
        (3.0, 1.0),
    ];
    let outside = [
        (1.0, 1.0),
        (1.0, 2.0),
        (2.0, 2.0),
        (2.0, 3.0),
        (2.0, -1.5),
        (3.0, 3.0),
        (3.0, 4.0),
    ];
    for (p, g) in inside {
        let r = ap_growth(g, p, 32, 6, 0.1).unwrap();
        assert!(r.in_class, "p={p} gamma={g}: {:?}", r.constants);
    }
    for (p, g) in outside {
        let r = ap_growth(g, p, 32, 6, 0.1).unwrap();
        assert!(!r.in_class, "p={p} gamma={g}: {:?}", r.constants);
    }
}

#[test]
fn constants_grow_with_the_window() {
    for (p, g) in [(1.0, -0.3), (2.0, 0.7), (2.0, 2.5), (4.0, -0.8)] {
        let r = ap_growth(g, p, 8, 6, 0.1).unwrap();
        assert!(
            r.constants.windows(2).all(|c| c[1] >= c[0] * (1.0 - 1e-14)),
            "{:?}",
            r.constants
        );
    }
}

#[test]
fn large_exponents_do_not_overflow() {
    // w^{-2} underflows pointwise here
    let w = WeightSeq::power(100.0, 0, 400);
    let c = ap_constant(&w, 1.5, (0, 400)).unwrap();
    assert!(c.is_finite() && c > 1.0);
}

#[test]
fn maximal_ratios_are_stable() {
    let basis = Basis::ClassicalJacobi(JacobiParams::new(0.0, 0.0).unwrap());
    let symbol = SymbolSpec::identity();
    let grid = TimeGrid::geometric(1e-3, 1e3, 80).unwrap();
    let family = KernelFamily::new(&basis, &symbol, 64, &grid.points).unwrap();
    let unit = WeightSeq::unit(0, 64);

    // no growth with the support size
    let sizes = [4i64, 8, 16];
    let maxima: Vec<f64> = sizes
        .iter()
        .map(|&s| {
            let fs = random_family(21, 30, 0, s, true);
            maximal_inequality_probe(&family, &grid, &unit, 2.0, &fs)
                .unwrap()
                .max
        })
        .collect();
    let xs: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = maxima.iter().map(|m| m.ln()).collect();
    let slope = {
        let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
        xs.iter()
            .zip(&ys)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
    };
    assert!(slope <= 0.1, "{maxima:?}");
    assert!(maxima.iter().all(|&m| m >= 1.0 && m <= 10.0));

    // delta shift
    let d: Vec<f64> = [6i64, 12, 24]
        .iter()
        .map(|&n| maximal_ratio(&family, &grid, &unit, 2.0, &SequenceData::delta(n)).unwrap())
        .collect();
    assert!(d.iter().all(|x| (x / d[0] - 1.0).abs() <= 0.1), "{d:?}");

    // an A_2 weight
    let w = WeightSeq::power(0.5, 0, 64);
    let fs = random_family(4, 30, 0, 16, true);
    let stats = maximal_inequality_probe(&family, &grid, &w, 2.0, &fs).unwrap();
    assert!(stats.max < 10.0 && stats.min >= 1.0);

    // weak type at p = 1 with an A_1 weight
    let w = WeightSeq::power(-0.5, 0, 64);
    let stats = maximal_inequality_probe(&family, &grid, &w, 1.0, &fs).unwrap();
    assert!(stats.max.is_finite() && stats.max < 10.0);
}

#[test]
fn kernel_report_needs_a_range() {
    assert!(KernelEstimator::new(KernelRanges { lo: 0, hi: 1 })
        .finish()
        .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weak_norm_below_l1(vals in prop::collection::vec(-5.0f64..5.0, 1..40), g in -0.9f64..2.0) {
        let n = vals.len() as i64;
        let f = SequenceData::new((0..n).collect(), vals);
        let w = WeightSeq::power(g, 0, n - 1);
        let weak = weak_norm(&f, &w).unwrap();
        let l1 = weighted_norm(&f, &w, 1.0).unwrap();
        prop_assert!(weak <= l1 * (1.0 + 1e-14));
    }

    #[test]
    fn ap_constant_at_least_one(g in -0.95f64..3.0, p in 1.0f64..4.0, len in 1i64..60) {
        let w = WeightSeq::power(g, 0, len);
        prop_assert!(ap_constant(&w, p, (0, len)).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn ap_constant_monotone(g in -0.95f64..3.0, p in 1.0f64..4.0, len in 2i64..60) {
        let w = WeightSeq::power(g, -len, 2 * len);
        let small = ap_constant(&w, p, (0, len)).unwrap();
        let big = ap_constant(&w, p, (-len, 2 * len)).unwrap();
        prop_assert!(big >= small * (1.0 - 1e-14));
    }
}
