use proptest::prelude::*;
use specsemi_core::dunkl::DunklSystem;
use specsemi_core::exceptional::ExceptionalSystem;
use specsemi_core::fourier;
use specsemi_core::harness::random_family;
use specsemi_core::jacobi;
use specsemi_core::semigroup::*;
use specsemi_core::{IndexSet, JacobiParams, Poly};

fn legendre() -> Basis {
    Basis::ClassicalJacobi(JacobiParams::new(0.0, 0.0).unwrap())
}

fn all_bases() -> Vec<Basis> {
    vec![
        legendre(),
        Basis::Exceptional(ExceptionalSystem::worked_example()),
        Basis::Dunkl(DunklSystem::new(JacobiParams::new(0.0, 0.0).unwrap()).unwrap()),
        Basis::FourierOracle,
    ]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[test]
fn time_zero_is_identity() {
    for basis in all_bases() {
        let symbol = basis.natural_symbol();
        let k = build_kernel(&basis, &symbol, 0.0, 64, None).unwrap();
        assert!(
            k.identity_defect() <= 1e-10,
            "{}: {:e}",
            basis.kind().name(),
            k.identity_defect()
        );
    }
}

#[test]
fn kernel_entries_and_rows_are_bounded() {
    for basis in all_bases() {
        let symbol = basis.natural_symbol();
        for t in [0.01, 1.0, 50.0] {
            let k = build_kernel(&basis, &symbol, t, 40, None).unwrap();
            assert!(k.max_abs_entry() <= 1.0 + 1e-12);
            assert!(k.max_row_norm() <= 1.0 + 1e-10);
            assert!(k.entries.asymmetry() == 0.0);
        }
    }
}

#[test]
fn contraction_on_the_default_grid() {
    let grid = TimeGrid::default_geometric();
    for basis in all_bases() {
        let symbol = basis.natural_symbol();
        let family = KernelFamily::new(&basis, &symbol, 64, &grid.points).unwrap();
        let index = family.index();
        let lo = if index.is_integers() { -32 } else { 0 };
        for f in random_family(11, 40, lo, 32, false) {
            let dense = f.to_dense(index).unwrap();
            let n0 = norm(&dense);
            for u in family.apply_all(&dense, &grid.points).unwrap() {
                assert!(norm(&u) <= n0 * (1.0 + 1e-12), "{}", basis.kind().name());
                assert!(dot(&u, &dense) >= -1e-10);
            }
        }
    }
}

#[test]
fn semigroup_law_on_the_inner_half() {
    for basis in all_bases() {
        let symbol = basis.natural_symbol();
        for (t1, t2) in [(0.5, 1.5), (3.0, 7.0)] {
            let k1 = build_kernel(&basis, &symbol, t1, 96, None).unwrap();
            let k2 = build_kernel(&basis, &symbol, t2, 96, None).unwrap();
            let k12 = build_kernel(&basis, &symbol, t1 + t2, 96, None).unwrap();
            let r = compose_check(&k1, &k2, &k12, 32).unwrap();
            assert!(r <= 1e-8, "{} ({t1},{t2}): {r:e}", basis.kind().name());
        }
        let z = build_kernel(&basis, &symbol, 0.0, 20, None).unwrap();
        assert!(compose_check(&z, &z, &z, 10).unwrap() < 1e-12);
    }
}

#[test]
fn fourier_kernel_is_the_bessel_kernel() {
    let basis = Basis::FourierOracle;
    let symbol = SymbolSpec::identity();
    for t in [0.1, 1.0, 10.0] {
        let k = build_kernel(&basis, &symbol, t, 32, None).unwrap();
        for n in -16..=16i64 {
            for m in -16..=16i64 {
                let e = fourier::bessel_kernel(n, m, t);
                assert!((k.get(n, m).unwrap() - e).abs() <= 1e-10, "t={t} ({n},{m})");
            }
        }
    }
}

#[test]
fn fourier_composition_is_bessel_addition() {
    let basis = Basis::FourierOracle;
    let symbol = SymbolSpec::identity();
    let k1 = build_kernel(&basis, &symbol, 0.7, 64, None).unwrap();
    let k2 = build_kernel(&basis, &symbol, 1.9, 64, None).unwrap();
    let mut k12 = build_kernel(&basis, &symbol, 2.6, 64, None).unwrap();
    let index = k12.index;
    for a in 0..index.size() {
        for b in 0..index.size() {
            k12.entries[(a, b)] = fourier::bessel_kernel(index.index_at(a), index.index_at(b), 2.6);
        }
    }
    assert!(compose_check(&k1, &k2, &k12, 32).unwrap() <= 1e-9);
}

#[test]
fn large_time_kernel_vanishes() {
    // K_t(0, 0) ~ t^{-e}: e = a + 1 when s_M - s vanishes to first order
    // against (1 - x)^a, and e = a / 2 for the exceptional symbol, whose
    // distance to Q(1) is quadratic in 1 - x.
    let cases = [
        (
            Basis::ClassicalJacobi(JacobiParams::new(3.0, 0.0).unwrap()),
            4.0,
        ),
        (legendre(), 1.0),
        (
            Basis::Exceptional(ExceptionalSystem::worked_example()),
            0.75,
        ),
        (
            Basis::Dunkl(DunklSystem::new(JacobiParams::new(0.0, 0.0).unwrap()).unwrap()),
            1.0,
        ),
        (Basis::FourierOracle, 0.5),
    ];
    for (basis, e) in cases {
        let symbol = basis.natural_symbol();
        let big = build_kernel(&basis, &symbol, 1e6, 10, None).unwrap();
        let mid = build_kernel(&basis, &symbol, 1e5, 10, None).unwrap();
        let rate = (big.get(0, 0).unwrap() / mid.get(0, 0).unwrap()).log10();
        assert!(
            (rate + e).abs() < 0.02,
            "{}: rate {rate}",
            basis.kind().name()
        );
        if e >= 2.0 {
            assert!(
                big.max_abs_entry() <= 1e-8,
                "{}: {:e}",
                basis.kind().name(),
                big.max_abs_entry()
            );
        }
    }
}

#[test]
fn order_policy_guards_large_times() {
    let basis = legendre();
    let symbol = SymbolSpec::identity();
    let b = basis.sample(&symbol, 16, 64).unwrap();
    assert!(b.kernel(b.t_limit).is_ok());
    assert!(matches!(
        b.kernel(b.t_limit * 1.01),
        Err(specsemi_core::Error::QuadratureTooLow { .. })
    ));
}

#[test]
fn strong_continuity() {
    let basis = legendre();
    let symbol = SymbolSpec::identity();
    // first coefficients of e^x in the Legendre basis
    let rule = specsemi_core::quadrature::build_quadrature(0.0, 0.0, 20).unwrap();
    let p = JacobiParams::new(0.0, 0.0).unwrap();
    let coeffs: Vec<f64> = (0..5)
        .map(|n| rule.integrate(|x| x.exp() * jacobi::eval_jacobi(&p, n, x)))
        .collect();
    let f = SequenceData::new((0..5).collect(), coeffs);
    let d = |t: f64| {
        let k = build_kernel(&basis, &symbol, t, 16, None).unwrap();
        let w = apply_semigroup(&k, &f).unwrap();
        let dense = f.to_dense(k.index).unwrap();
        norm(
            &w.values
                .iter()
                .zip(&dense)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        )
    };
    let vals: Vec<f64> = [1.0, 0.1, 0.01, 0.001].iter().map(|&t| d(t)).collect();
    assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    assert!(vals[3] <= vals[0] && vals[3] <= 0.1 * f.norm2());
}

#[test]
fn classical_generator_is_the_jacobi_matrix() {
    let p = JacobiParams::new(0.4, 1.1).unwrap();
    let gen = build_generator(&Basis::ClassicalJacobi(p), &SymbolSpec::identity(), 30).unwrap();
    assert_eq!(gen.bandwidth, 1);
    for n in 0..=30 {
        assert!((gen.u(n, 0) - jacobi::recurrence_b(&p, n)).abs() < 1e-13);
        assert!((gen.u(n, 1) - jacobi::recurrence_a(&p, n + 1)).abs() < 1e-13);
    }
    let st = limit_stencil(&gen, 1e-2).unwrap();
    let scaled: Vec<f64> = st.coeffs.iter().map(|c| 2.0 * c).collect();
    for (c, e) in scaled.iter().zip([1.0, -2.0, 1.0]) {
        assert!((c - e).abs() < 1e-2, "{scaled:?}");
    }
}

#[test]
fn constant_symbol_has_zero_stencil() {
    let symbol = SymbolSpec::new(Poly::constant(0.3));
    let gen = build_generator(&legendre(), &symbol, 20).unwrap();
    let st = limit_stencil(&gen, 1e-12).unwrap();
    assert!(st.coeffs.iter().all(|c| c.abs() < 1e-14));
}

#[test]
fn generator_bands_are_symmetric() {
    for basis in all_bases() {
        let symbol = basis.natural_symbol();
        let gen = build_generator(&basis, &symbol, 60).unwrap();
        assert!(gen.symmetry_residual() <= 1e-10, "{}", basis.kind().name());
    }
}

#[test]
fn evolution_methods_agree() {
    let cases = [
        (
            Basis::Exceptional(ExceptionalSystem::worked_example()),
            128usize,
        ),
        (legendre(), 128),
        (Basis::FourierOracle, 64),
        (
            Basis::Dunkl(DunklSystem::new(JacobiParams::new(0.0, 0.0).unwrap()).unwrap()),
            64,
        ),
    ];
    for (basis, n) in cases {
        let symbol = basis.natural_symbol();
        let ev = Evolution::new(&basis, &symbol, n).unwrap();
        let index = ev.index();
        let f = SequenceData::new(vec![0, 1, 2, 5], vec![1.0, -0.5, 0.25, 0.8]);
        let dense = f.to_dense(index).unwrap();
        for t in [0.0, 0.5, 2.0, 5.0] {
            let (_, _, d) = ev.compare(&dense, t).unwrap();
            assert!(d <= 1e-7, "{} t={t}: {d:e}", basis.kind().name());
        }
    }
}

#[test]
fn evolution_of_a_delta_on_the_circle() {
    let basis = Basis::FourierOracle;
    let ev = Evolution::new(&basis, &SymbolSpec::identity(), 48).unwrap();
    let u = evolve_ivp(&ev, &SequenceData::delta(0), 1.5, EvolveMethod::BandExpm).unwrap();
    for n in -10..=10 {
        assert!((u.get(n) - fourier::bessel_kernel(n, 0, 1.5)).abs() < 1e-12);
    }
    let u0 = evolve_ivp(&ev, &SequenceData::delta(0), 0.0, EvolveMethod::Kernel).unwrap();
    assert!((u0.get(0) - 1.0).abs() < 1e-12 && u0.get(1).abs() < 1e-12);
}

#[test]
fn ivp_residual_is_small() {
    for basis in all_bases() {
        let symbol = basis.natural_symbol();
        let ev = Evolution::new(&basis, &symbol, 64).unwrap();
        let f = SequenceData::new(vec![0, 3, 4], vec![0.5, 1.0, -0.7]);
        let dense = f.to_dense(ev.index()).unwrap();
        for t in [0.01, 1.0, 8.0] {
            let r = ivp_residual(&ev, &dense, t, 1e-4).unwrap();
            assert!(r <= 1e-4, "{} t={t}: {r:e}", basis.kind().name());
        }
    }
}

#[test]
fn maximal_operator_basics() {
    let grid = TimeGrid::default_geometric();
    let basis = legendre();
    let symbol = SymbolSpec::identity();
    let family = KernelFamily::new(&basis, &symbol, 64, &grid.points).unwrap();
    let w = maximal_operator(&family, &SequenceData::delta(0), &grid).unwrap();
    assert!((w.get(0) - 1.0).abs() < 1e-12);

    let fine = grid.refined();
    assert_eq!(fine.points.len(), 2 * grid.points.len() - 1);
    let fine_family = KernelFamily::new(&basis, &symbol, 64, &fine.points).unwrap();
    for f in random_family(3, 5, 0, 32, false) {
        let a = maximal_operator(&family, &f, &grid).unwrap();
        let b = maximal_operator(&fine_family, &f, &fine).unwrap();
        let rel = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
            / b.values.iter().copied().fold(0.0, f64::max);
        assert!(rel <= 1e-6, "refinement changed W_* f by {rel:e}");
        assert!(a
            .values
            .iter()
            .zip(f.to_dense(family.index()).unwrap())
            .all(|(m, v)| *m >= v.abs()));
    }
}

#[test]
fn index_ordering_round_trips() {
    let idx = IndexSet::Integers(7);
    for p in 0..idx.size() {
        assert_eq!(idx.position(idx.index_at(p)), Some(p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernels_are_contractive(a in -0.5f64..2.0, b in -0.5f64..2.0, t in 0.0f64..200.0, seed in 0u64..1000) {
        let basis = Basis::ClassicalJacobi(JacobiParams::new(a, b).unwrap());
        let symbol = SymbolSpec::identity();
        let k = build_kernel(&basis, &symbol, t, 32, None).unwrap();
        prop_assert!(k.max_row_norm() <= 1.0 + 1e-10);
        let f = &random_family(seed, 1, 0, 32, false)[0];
        let w = apply_semigroup(&k, f).unwrap();
        prop_assert!(w.norm2() <= f.norm2() * (1.0 + 1e-12));
    }

    #[test]
    fn half_time_square_is_positive(t in 0.0f64..50.0, seed in 0u64..1000) {
        let basis = Basis::Dunkl(DunklSystem::new(JacobiParams::new(0.5, -0.5).unwrap()).unwrap());
        let symbol = SymbolSpec::identity();
        let k = build_kernel(&basis, &symbol, t, 24, None).unwrap();
        let f = &random_family(seed, 1, -24, 24, false)[0];
        let w = apply_semigroup(&k, f).unwrap();
        let dense = f.to_dense(k.index).unwrap();
        prop_assert!(dot(&w.values, &dense) >= -1e-10);
    }
}
