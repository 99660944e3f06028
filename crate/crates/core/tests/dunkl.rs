use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specsemi_core::dunkl::{self, DunklSystem};
use specsemi_core::harness::{Envelope, KernelEstimator, KernelRanges};
use specsemi_core::jacobi;
use specsemi_core::quadrature::build_quadrature;
use specsemi_core::semigroup::{build_kernel, Basis, KernelFamily, SymbolSpec, TimeGrid};
use specsemi_core::{IndexSet, JacobiParams};

fn system(a: f64, b: f64) -> DunklSystem {
    DunklSystem::new(JacobiParams::new(a, b).unwrap()).unwrap()
}

const PARAMS: [(f64, f64); 4] = [(0.0, 0.0), (0.5, -0.5), (1.5, 0.5), (-0.5, -0.5)];

/// `int_{-pi}^{pi} F A` through `x = cos t` on both half circles.
fn circle_integral<F: Fn(f64) -> f64>(sys: &DunklSystem, order: usize, f: F) -> f64 {
    let p = sys.params();
    let rule = build_quadrature(p.alpha(), p.beta(), order).unwrap();
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            total += w * f(sign * x.acos());
        }
    }
    total
}

#[test]
fn orthonormal_up_to_forty() {
    for (a, b) in PARAMS {
        let s = system(a, b);
        let mut worst: f64 = 0.0;
        for n in -40..=40i64 {
            for m in (n.max(-40))..=40i64 {
                let re = circle_integral(&s, 60, |t| {
                    let (ar, ai) = dunkl::eval_psi_orthonormal(&s, n, t);
                    let (br, bi) = dunkl::eval_psi_orthonormal(&s, m, t);
                    ar * br + ai * bi
                });
                worst = worst.max((re - if n == m { 1.0 } else { 0.0 }).abs());
            }
        }
        assert!(worst <= 1e-9, "({a},{b}): {worst:e}");
    }
}

#[test]
fn psi_values() {
    let s = system(1.5, 0.5);
    let p = s.params();
    let (r, i) = dunkl::eval_psi(&s, 0, 0.7);
    assert!((r - jacobi::eval_jacobi(&p, 0, 0.0) / 2f64.sqrt()).abs() < 1e-15 && i == 0.0);
    for k in [1i64, 4, -6] {
        let (r, i) = dunkl::eval_psi(&s, k, 0.0);
        let expect = jacobi::eval_jacobi(&p, k.unsigned_abs() as usize, 1.0) / 2f64.sqrt();
        assert!((r - expect).abs() < 1e-12 && i.abs() < 1e-15);
    }
    for k in 1..6i64 {
        let (r1, i1) = dunkl::eval_psi(&s, k, 1.1);
        let (r2, i2) = dunkl::eval_psi(&s, -k, 1.1);
        assert!((r1 - r2).abs() < 1e-15 && (i1 + i2).abs() < 1e-15);
    }
    assert!((s.lambda(3) - (3.0 * (3.0 + p.rho())).sqrt()).abs() < 1e-15);
}

#[test]
fn six_term_recurrence_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (a, b) in PARAMS {
        let s = system(a, b);
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            for k in -50..=50i64 {
                let r = dunkl::six_term_residual(&s, k, t);
                assert!(r <= 1e-10, "({a},{b}) k={k} t={t}: {r:e}");
            }
        }
    }
}

#[test]
fn block_coefficients_limits() {
    let s = system(0.5, -0.5);
    let c = s.block_coeffs(4000);
    assert!((c.c - 0.5).abs() < 1e-3);
    assert!(c.c_star.abs() < 1e-3 && c.d.abs() < 1e-3 && c.d_star.abs() < 1e-3);
    let z = system(0.7, 0.7).block_coeffs(9);
    assert!(z.d == 0.0 && z.d_star == 0.0);
}

#[test]
fn mcos_matches_quadrature_and_is_symmetric() {
    for (a, b) in PARAMS {
        let s = system(a, b);
        let n_max = 12;
        let gen = dunkl::build_mcos(&s, n_max).unwrap();
        assert!(gen.symmetry_residual() <= 1e-12);
        let idx = IndexSet::Integers(n_max);
        let mut worst: f64 = 0.0;
        for pa in 0..idx.size() {
            for k in -3..=3i64 {
                let pb = pa as i64 + k;
                if pb < 0 || pb as usize >= idx.size() {
                    continue;
                }
                let (n, m) = (idx.index_at(pa), idx.index_at(pb as usize));
                let q = circle_integral(&s, 40, |t| {
                    let (ar, ai) = dunkl::eval_psi_orthonormal(&s, n, t);
                    let (br, bi) = dunkl::eval_psi_orthonormal(&s, m, t);
                    t.cos() * (ar * br + ai * bi)
                });
                worst = worst.max((gen.u(pa, k) - q).abs());
            }
        }
        assert!(worst <= 1e-10, "({a},{b}): {worst:e}");
        // orthonormal (0, 1) entry is a_1 / sqrt 2
        let a1 = jacobi::recurrence_a(&s.params(), 1);
        assert!((gen.u(0, 1) - a1 / 2f64.sqrt()).abs() < 1e-14);
    }
}

#[test]
fn mcos_rows_tend_to_the_block_limit() {
    let s = system(0.5, -0.5);
    let gen = dunkl::build_mcos(&s, 2000).unwrap();
    let row = 2 * 1500 - 1;
    let expect = [0.0, 0.5, 0.0, 0.0, 0.0, 0.5, 0.0];
    for (k, e) in (-3..=3i64).zip(expect) {
        assert!((gen.u(row, k) - e).abs() < 1e-3, "k={k}: {}", gen.u(row, k));
    }
}

#[test]
fn kernel_decomposition_matches_direct_quadrature() {
    for (a, b) in PARAMS {
        let s = system(a, b);
        for t in [0.0, 0.1, 1.0, 10.0] {
            let d = dunkl::dunkl_kernel(&s, t, 16, None).unwrap();
            let q = dunkl::dunkl_kernel_direct(&s, t, 16, 128).unwrap();
            assert!(
                d.entries.max_abs_diff(&q.entries) <= 1e-9,
                "({a},{b}) t={t}"
            );
            let j = build_kernel(
                &Basis::ClassicalJacobi(s.params()),
                &SymbolSpec::identity(),
                t,
                16,
                None,
            )
            .unwrap();
            assert!((d.get(0, 0).unwrap() - j.get(0, 0).unwrap()).abs() < 1e-14);
        }
        assert!(
            dunkl::dunkl_kernel(&s, 0.0, 16, None)
                .unwrap()
                .identity_defect()
                <= 1e-10
        );
    }
}

#[test]
fn kernel_is_real() {
    let s = system(0.5, -0.5);
    for t in [0.1, 1.0, 5.0] {
        for n in -6..=6i64 {
            for m in -6..=6i64 {
                assert!(
                    dunkl::dunkl_kernel_imaginary(&s, t, n, m, 64)
                        .unwrap()
                        .abs()
                        <= 1e-10
                );
            }
        }
    }
}

#[test]
fn lambda_and_laplacian_eigen_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (a, b) in PARAMS {
        let s = system(a, b);
        for _ in 0..40 {
            let t: f64 = rng.gen_range(0.05..3.09) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            for k in -30..=30i64 {
                let r = dunkl::lambda_eigen_residual(&s, k, t).unwrap();
                assert!(r <= 1e-8, "({a},{b}) k={k} t={t}: {r:e}");
                let r = dunkl::dj_residual(&s, k, t).unwrap();
                assert!(
                    r <= 1e-6 * (1.0 + s.lambda(k).powi(2)),
                    "({a},{b}) k={k} t={t}: {r:e}"
                );
            }
        }
        assert_eq!(dunkl::lambda_eigen_residual(&s, 0, 1.0).unwrap(), 0.0);
    }
    assert!(dunkl::lambda_eigen_residual(&system(0.0, 0.0), 2, 0.0).is_err());
}

#[test]
fn decay_and_constants() {
    let basis = Basis::Dunkl(system(0.0, 0.0));
    let symbol = SymbolSpec::identity();
    let grid = TimeGrid::geometric(1e-3, 1e3, 60).unwrap();
    let mut constants = Vec::new();
    for n in [64usize, 128] {
        let family = KernelFamily::new(&basis, &symbol, n, &grid.points).unwrap();
        let mut est = KernelEstimator::new(KernelRanges {
            lo: 1,
            hi: n as i64 - 1,
        });
        let mut env = Envelope::new(family.index());
        for &t in &grid.points {
            let k = family.kernel(t).unwrap();
            est.observe(&k).unwrap();
            env.observe(&k).unwrap();
        }
        let r = est.finish().unwrap();
        constants.push((r.c1, r.c2));
        if n == 128 {
            assert!(env.kernel_slope(64).unwrap().unwrap().slope <= -0.85);
            assert!(env.difference_slope(64).unwrap().unwrap().slope <= -1.8);
        }
    }
    assert!(constants[1].0 <= 2.0 * constants[0].0 && constants[1].1 <= 2.0 * constants[0].1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn six_term_anywhere(a in -0.5f64..3.0, b in -0.5f64..3.0, k in -80i64..80, t in -3.1f64..3.1) {
        let s = system(a, b);
        prop_assert!(dunkl::six_term_residual(&s, k, t) <= 1e-9);
    }

    #[test]
    fn kernel_symmetric_under_conjugation(a in -0.5f64..2.0, b in -0.5f64..2.0, t in 0.0f64..20.0) {
        // psi_{-k} = conj psi_k gives K(-n, -m) = K(n, m)
        let s = system(a, b);
        let k = dunkl::dunkl_kernel(&s, t, 8, None).unwrap();
        for n in -8..=8i64 {
            for m in -8..=8i64 {
                prop_assert!((k.get(n, m).unwrap() - k.get(-n, -m).unwrap()).abs() < 1e-13);
            }
        }
    }
}
