//! The `verify` suites. Each returns one row per check; the analysis grids
//! and sample sizes are fixed here so that a report depends only on the
//! config.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use specsemi_core::dunkl::{self, DunklSystem};
use specsemi_core::exceptional::{self, ExceptionalSystem};
use specsemi_core::fourier;
use specsemi_core::harness::{
    ap_growth, maximal_inequality_probe, random_family, Envelope, KernelEstimateReport,
    KernelEstimator, KernelRanges, SlopeFit, WeightSeq,
};
use specsemi_core::quadrature::build_quadrature;
use specsemi_core::semigroup::{
    build_generator, build_kernel, compose_check, limit_stencil, Basis, Evolution, KernelFamily,
    SequenceData, TimeGrid,
};

use crate::config::{index_bounds, Resolved, SystemKind};
use crate::report::{Relation, ReportRow, Scope};
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Proposition1,
    Lemma1,
    Lemma2,
    Stencil,
    Maximal,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Proposition1 => "proposition1",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Stencil => "stencil",
            Suite::Maximal => "maximal",
        }
    }

    /// The system a suite is restricted to.
    pub fn required_system(self) -> Option<SystemKind> {
        match self {
            Suite::Lemma1 | Suite::Stencil => Some(SystemKind::Exceptional),
            Suite::Lemma2 => Some(SystemKind::Dunkl),
            Suite::Proposition1 | Suite::Maximal => None,
        }
    }
}

pub const IDENTITY_TOL: f64 = 1e-10;
pub const SEMIGROUP_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = -1e-10;
pub const CONTRACTION_SLACK: f64 = 1e-12;
pub const CONTRACTION_SAMPLES: usize = 200;
pub const EVOLVE_TOL: f64 = 1e-7;
pub const BESSEL_TOL: f64 = 1e-10;
pub const KERNEL_SLOPE_MAX: f64 = -1.0 + 0.15;
pub const DIFFERENCE_SLOPE_MAX: f64 = -2.0 + 0.2;
pub const GROWTH_MAX: f64 = 2.0;
pub const DUNKL_DECOMPOSITION_TOL: f64 = 1e-9;
pub const EXCEPTIONAL_DECOMPOSITION_TOL: f64 = 1e-8;
pub const SIGMA_TOL: f64 = 1e-8;
pub const SIX_TERM_TOL: f64 = 1e-10;
pub const LAMBDA_TOL: f64 = 1e-8;
pub const STENCIL_TOL: f64 = 0.05;
pub const STENCIL_ROW: usize = 500;
pub const DRIFT_MAX: f64 = 0.1;
pub const AP_THRESHOLD: f64 = 0.1;

/// Runs a suite after checking it fits the configured system.
pub fn run(suite: Suite, cfg: &Resolved) -> Result<Vec<ReportRow>> {
    if let Some(sys) = suite.required_system() {
        if cfg.system() != sys {
            return Err(CliError::Config(format!(
                "suite {} requires system {}, got {}",
                suite.name(),
                sys.name(),
                cfg.system().name()
            )));
        }
    }
    match suite {
        Suite::Proposition1 => proposition1(cfg),
        Suite::Lemma1 => lemma1(cfg),
        Suite::Lemma2 => lemma2(cfg),
        Suite::Stencil => stencil(cfg),
        Suite::Maximal => maximal(cfg),
    }
}

struct Rows<'a> {
    cfg: &'a Resolved,
    echo: BTreeMap<String, f64>,
    rows: Vec<ReportRow>,
}

impl<'a> Rows<'a> {
    fn new(cfg: &'a Resolved) -> Self {
        Self {
            cfg,
            echo: cfg.echo(),
            rows: Vec::new(),
        }
    }

    fn push(
        &mut self,
        experiment: &str,
        metric: &str,
        measured: f64,
        rel: Relation,
        tol: f64,
    ) -> &mut ReportRow {
        let row = ReportRow::new(
            experiment,
            self.cfg.system().name(),
            metric,
            measured,
            rel,
            tol,
        )
        .params(&self.echo);
        self.rows.push(row);
        self.rows.last_mut().expect("just pushed")
    }
}

trait RowExt {
    fn with(&mut self, key: &str, value: f64) -> &mut Self;
    fn scoped(&mut self, scope: Scope) -> &mut Self;
}

impl RowExt for ReportRow {
    fn with(&mut self, key: &str, value: f64) -> &mut Self {
        self.parameters.insert(key.into(), value);
        self
    }

    fn scoped(&mut self, scope: Scope) -> &mut Self {
        self.scope = scope;
        self
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Support of the random test sequences: the inner half of the window.
fn inner_half(cfg: &Resolved) -> (i64, i64) {
    let h = (cfg.n() / 2) as i64;
    if cfg.index().is_integers() {
        (-h, h)
    } else {
        (0, h)
    }
}

fn proposition1(cfg: &Resolved) -> Result<Vec<ReportRow>> {
    let (basis, symbol, n) = (&cfg.basis, &cfg.symbol, cfg.n());
    let mut out = Rows::new(cfg);

    let k0 = build_kernel(basis, symbol, 0.0, n, None)?;
    out.push(
        "prop1.identity",
        "max|K_0-I|",
        k0.identity_defect(),
        Relation::Le,
        IDENTITY_TOL,
    );

    let small = build_kernel(basis, symbol, 1e-8, n, None)?;
    out.push(
        "prop1.continuity",
        "max|K_t-I|",
        small.identity_defect(),
        Relation::Le,
        1e-6,
    )
    .with("t", 1e-8);

    for t in [0.01, 1.0, 50.0] {
        let k = build_kernel(basis, symbol, t, n, None)?;
        out.push(
            "prop1.entry_bound",
            "max|K_t(n;m)|",
            k.max_abs_entry(),
            Relation::Le,
            1.0 + 1e-12,
        )
        .with("t", t);
        out.push(
            "prop1.row_bound",
            "max_n ||K_t(n;.)||_2",
            k.max_row_norm(),
            Relation::Le,
            1.0 + 1e-10,
        )
        .with("t", t);
    }

    // contraction and positivity over the default grid
    let grid = TimeGrid::default_geometric();
    let family = KernelFamily::new(basis, symbol, n, &grid.points)?;
    let index = family.index();
    let (lo, hi) = inner_half(cfg);
    let fs = random_family(cfg.config.seed, CONTRACTION_SAMPLES, lo, hi, false);
    let stats = fs
        .par_iter()
        .map(|f| -> Result<(usize, f64, f64)> {
            let dense = f.to_dense(index)?;
            let n0 = dot(&dense, &dense).sqrt();
            let mut violations = 0;
            let (mut worst_ratio, mut min_inner) = (0.0f64, f64::INFINITY);
            for u in family.apply_all(&dense, &grid.points)? {
                let nu = dot(&u, &u).sqrt();
                if nu > n0 * (1.0 + CONTRACTION_SLACK) {
                    violations += 1;
                }
                worst_ratio = worst_ratio.max(nu / n0);
                min_inner = min_inner.min(dot(&u, &dense));
            }
            Ok((violations, worst_ratio, min_inner))
        })
        .collect::<Result<Vec<_>>>()?;
    let violating = stats.iter().filter(|s| s.0 > 0).count();
    let worst = stats.iter().fold(0.0f64, |m, s| m.max(s.1));
    let min_inner = stats.iter().fold(f64::INFINITY, |m, s| m.min(s.2));
    out.push(
        "prop1.contraction",
        "violating_samples",
        violating as f64,
        Relation::Le,
        0.0,
    )
    .with("samples", fs.len() as f64)
    .with("t_points", grid.points.len() as f64)
    .with("max_norm_ratio", worst);
    out.push(
        "prop1.positivity",
        "min<W_t f;f>",
        min_inner,
        Relation::Ge,
        POSITIVITY_TOL,
    )
    .with("samples", fs.len() as f64)
    .with("t_points", grid.points.len() as f64);

    let inner = n / 2;
    for (t1, t2) in [(0.5, 1.5), (3.0, 7.0)] {
        let k1 = build_kernel(basis, symbol, t1, n, None)?;
        let k2 = build_kernel(basis, symbol, t2, n, None)?;
        let k12 = build_kernel(basis, symbol, t1 + t2, n, None)?;
        let r = compose_check(&k1, &k2, &k12, inner)?;
        out.push(
            "prop1.semigroup",
            "max|K_s K_t-K_(s+t)|",
            r,
            Relation::Le,
            SEMIGROUP_TOL,
        )
        .with("s", t1)
        .with("t", t2)
        .with("inner", inner as f64);
    }

    // both ways of solving du/dt = G u
    let evolution = Evolution::new(basis, symbol, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.config.seed ^ 0x5eed);
    let (flo, fhi) = {
        let q = (n / 4) as i64;
        if index.is_integers() {
            (-q, q)
        } else {
            (0, q)
        }
    };
    let random = SequenceData::new(
        (flo..=fhi).collect(),
        (flo..=fhi).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    );
    for (label, f) in [(0.0, SequenceData::delta(0)), (1.0, random)] {
        let dense = f.to_dense(index)?;
        for t in [0.1, 1.0, 5.0] {
            let (_, banded, d) = evolution.compare(&dense, t)?;
            out.push(
                "prop1.evolve",
                "max|u_kernel-u_band|",
                d,
                Relation::Le,
                EVOLVE_TOL,
            )
            .with("t", t)
            .with("random_f", label);
            if cfg.system() == SystemKind::FourierOracle && label == 0.0 {
                let e = (0..index.size())
                    .filter(|&p| index.in_inner_half(index.index_at(p)))
                    .map(|p| (banded[p] - fourier::bessel_kernel(index.index_at(p), 0, t)).abs())
                    .fold(0.0, f64::max);
                out.push(
                    "prop1.bessel_evolve",
                    "max|u_band-e^{-t}I_n(t)|",
                    e,
                    Relation::Le,
                    EVOLVE_TOL,
                )
                .with("t", t);
            }
        }
    }

    if cfg.system() == SystemKind::FourierOracle {
        let reach = 32.min(2 * n) as i64;
        for t in [0.1, 1.0, 10.0] {
            let k = build_kernel(basis, symbol, t, n, None)?;
            let mut worst: f64 = 0.0;
            for a in 0..index.size() {
                for b in 0..index.size() {
                    let (i, j) = (index.index_at(a), index.index_at(b));
                    if (i - j).abs() <= reach {
                        worst =
                            worst.max((k.entries[(a, b)] - fourier::bessel_kernel(i, j, t)).abs());
                    }
                }
            }
            out.push(
                "prop1.bessel_kernel",
                "max|K_t-e^{-t}I_(n-m)(t)|",
                worst,
                Relation::Le,
                BESSEL_TOL,
            )
            .with("t", t)
            .with("reach", reach as f64);
        }
    }
    Ok(out.rows)
}

/// Analysis grid for the kernel estimates.
pub fn lemma_grid() -> TimeGrid {
    TimeGrid::geometric(1e-3, 1e3, 61).expect("valid grid")
}

struct DecayStudy {
    base: KernelEstimateReport,
    doubled: KernelEstimateReport,
    envelope_kernel: Option<SlopeFit>,
    envelope_difference: Option<SlopeFit>,
    fixed: Vec<(f64, Option<SlopeFit>, Option<SlopeFit>)>,
}

/// Constants at extents `N` and `2N`; slopes anchored at `n = N` in the
/// `2N` tables, both for `sup_t |K_t|` and at fixed `t`.
fn decay_study(cfg: &Resolved, lo: i64) -> Result<DecayStudy> {
    let grid = lemma_grid();
    let n = cfg.n();
    let mut reports = Vec::new();
    let mut envelope = None;
    for extent in [n, 2 * n] {
        let family = KernelFamily::new(&cfg.basis, &cfg.symbol, extent, &grid.points)?;
        let tables = grid
            .points
            .par_iter()
            .map(|&t| family.kernel(t))
            .collect::<specsemi_core::Result<Vec<_>>>()?;
        let mut est = KernelEstimator::new(KernelRanges {
            lo,
            hi: extent as i64 - 1,
        });
        for k in &tables {
            est.observe(k)?;
        }
        reports.push(est.finish()?);
        if extent == 2 * n {
            let mut env = Envelope::new(family.index());
            for k in &tables {
                env.observe(k)?;
            }
            envelope = Some(env);
        }
    }
    let env = envelope.expect("doubled extent visited");
    let anchor = n as i64;
    let mut fixed = Vec::new();
    for t in [0.1, 1.0, 10.0] {
        let k = build_kernel(&cfg.basis, &cfg.symbol, t, 2 * n, None)?;
        let mut e = Envelope::new(k.index);
        e.observe(&k)?;
        fixed.push((t, e.kernel_slope(anchor)?, e.difference_slope(anchor)?));
    }
    let doubled = reports.pop().expect("two reports");
    let base = reports.pop().expect("two reports");
    Ok(DecayStudy {
        base,
        doubled,
        envelope_kernel: env.kernel_slope(anchor)?,
        envelope_difference: env.difference_slope(anchor)?,
        fixed,
    })
}

fn decay_rows(out: &mut Rows, prefix: &str, study: &DecayStudy, scope: Scope) {
    let n = out.cfg.n() as f64;
    let (b, d) = (&study.base, &study.doubled);
    out.push(
        &format!("{prefix}.diagonal"),
        "sup_t max_n|K_t(n;n)|",
        b.diag_max.max(d.diag_max),
        Relation::Le,
        1.0 + 1e-12,
    )
    .scoped(scope);
    out.push(
        &format!("{prefix}.c1_growth"),
        "C1(2N)/C1(N)",
        d.c1 / b.c1,
        Relation::Le,
        GROWTH_MAX,
    )
    .with("C1(N)", b.c1)
    .with("C1(2N)", d.c1)
    .scoped(scope);
    out.push(
        &format!("{prefix}.c2_growth"),
        "C2(2N)/C2(N)",
        d.c2 / b.c2,
        Relation::Le,
        GROWTH_MAX,
    )
    .with("C2(N)", b.c2)
    .with("C2(2N)", d.c2)
    .scoped(scope);
    let mut slope_row = |name: &str, fit: &Option<SlopeFit>, tol: f64, t: Option<f64>| {
        let (s, points, rms) = fit.as_ref().map_or((f64::NAN, 0.0, f64::NAN), |f| {
            (f.slope, f.points as f64, f.rms)
        });
        let row = out
            .push(
                &format!("{prefix}.{name}"),
                "log-log slope",
                s,
                Relation::Le,
                tol,
            )
            .with("anchor", n)
            .with("extent", 2.0 * n)
            .with("points", points)
            .with("rms", rms)
            .scoped(scope);
        if let Some(t) = t {
            row.with("t", t);
        }
    };
    slope_row(
        "kernel_slope_envelope",
        &study.envelope_kernel,
        KERNEL_SLOPE_MAX,
        None,
    );
    slope_row(
        "difference_slope_envelope",
        &study.envelope_difference,
        DIFFERENCE_SLOPE_MAX,
        None,
    );
    for (t, k, dd) in &study.fixed {
        slope_row("kernel_slope_fixed_t", k, KERNEL_SLOPE_MAX, Some(*t));
        slope_row(
            "difference_slope_fixed_t",
            dd,
            DIFFERENCE_SLOPE_MAX,
            Some(*t),
        );
    }
}

/// `alpha > 3/2, beta >= -1/2` is the hypothesis; `alpha = 3/2` is the
/// boundary case of the worked example.
pub fn lemma1_scope(alpha: f64, beta: f64) -> Scope {
    if beta < -0.5 || alpha < 1.5 {
        Scope::OutOfScope
    } else if alpha == 1.5 {
        Scope::Boundary
    } else {
        Scope::InScope
    }
}

pub fn lemma2_scope(alpha: f64, beta: f64) -> Scope {
    if alpha >= -0.5 && beta >= -0.5 {
        Scope::InScope
    } else {
        Scope::OutOfScope
    }
}

fn exceptional_system(cfg: &Resolved) -> &ExceptionalSystem {
    match &cfg.basis {
        Basis::Exceptional(s) => s,
        _ => unreachable!("checked by run"),
    }
}

fn dunkl_system(cfg: &Resolved) -> &DunklSystem {
    match &cfg.basis {
        Basis::Dunkl(s) => s,
        _ => unreachable!("checked by run"),
    }
}

fn lemma1(cfg: &Resolved) -> Result<Vec<ReportRow>> {
    let sys = exceptional_system(cfg);
    let base = sys.base();
    let scope = lemma1_scope(base.alpha(), base.beta());
    let mut out = Rows::new(cfg);

    out.push(
        "lemma1.riccati",
        "relative defect",
        sys.riccati_defect(),
        Relation::Le,
        1e-12,
    )
    .with("lambda_tilde", sys.lambda_tilde());

    let reach = 20;
    for t in [0.0, 0.1, 1.0, 10.0, 100.0] {
        let a = exceptional::exceptional_kernel(sys, t, reach, None)?;
        let b = exceptional::exceptional_kernel_direct(sys, t, reach, 256)?;
        out.push(
            "lemma1.decomposition",
            "max|K1+K2-K_direct|",
            a.entries.max_abs_diff(&b.entries),
            Relation::Le,
            EXCEPTIONAL_DECOMPOSITION_TOL,
        )
        .with("t", t)
        .with("reach", reach as f64);
    }

    let (wa, wb) = sys.weight_exponents();
    let rule = build_quadrature(wa, wb, 80)?;
    let worst = (0..=30)
        .map(|k| {
            let q = rule.integrate(|x| {
                let v = sys.eval_unnormalised(k, x) / sys.b_tilde().eval(x);
                v * v
            });
            (q.sqrt() - sys.sigma(k)).abs() / sys.sigma(k)
        })
        .fold(0.0, f64::max);
    out.push(
        "lemma1.sigma",
        "max rel|sigma_k-||P_k||| k<=30",
        worst,
        Relation::Le,
        SIGMA_TOL,
    );

    let study = decay_study(cfg, 0)?;
    decay_rows(&mut out, "lemma1", &study, scope);
    Ok(out.rows)
}

fn lemma2(cfg: &Resolved) -> Result<Vec<ReportRow>> {
    let sys = dunkl_system(cfg);
    let p = sys.params();
    let scope = lemma2_scope(p.alpha(), p.beta());
    let mut out = Rows::new(cfg);

    let reach = 16;
    for t in [0.1, 1.0] {
        let a = dunkl::dunkl_kernel(sys, t, reach, None)?;
        let b = dunkl::dunkl_kernel_direct(sys, t, reach, 128)?;
        out.push(
            "lemma2.decomposition",
            "max|K_D-K_direct|",
            a.entries.max_abs_diff(&b.entries),
            Relation::Le,
            DUNKL_DECOMPOSITION_TOL,
        )
        .with("t", t)
        .with("reach", reach as f64);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.config.seed ^ 0xd0c1);
    let pi = std::f64::consts::PI;
    let points: Vec<f64> = (0..100).map(|_| rng.gen_range(-pi..pi)).collect();
    let six = points
        .iter()
        .flat_map(|&t| (-50..=50i64).map(move |k| dunkl::six_term_residual(sys, k, t)))
        .fold(0.0, f64::max);
    out.push(
        "lemma2.six_term",
        "max residual |k|<=50",
        six,
        Relation::Le,
        SIX_TERM_TOL,
    )
    .with("points", points.len() as f64);

    // Lambda is singular at t = 0, +-pi
    let points: Vec<f64> = (0..100)
        .map(|_| rng.gen_range(0.05..pi - 0.05) * if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let mut lam: f64 = 0.0;
    for &t in &points {
        for k in -30..=30i64 {
            lam = lam.max(dunkl::lambda_eigen_residual(sys, k, t)?);
        }
    }
    out.push(
        "lemma2.lambda",
        "max residual |k|<=30",
        lam,
        Relation::Le,
        LAMBDA_TOL,
    )
    .with("points", points.len() as f64);

    let study = decay_study(cfg, 0)?;
    decay_rows(&mut out, "lemma2", &study, scope);
    Ok(out.rows)
}

const PRINTED_U: [f64; 4] = [-3.0 / 8.0, 9.0 / 16.0, -3.0 / 16.0, 1.0 / 48.0];

fn is_worked_example(sys: &ExceptionalSystem) -> bool {
    let w = ExceptionalSystem::worked_example();
    sys.base() == w.base() && sys.b() == w.b() && sys.bw() == w.bw()
}

fn stencil(cfg: &Resolved) -> Result<Vec<ReportRow>> {
    let sys = exceptional_system(cfg);
    let mut out = Rows::new(cfg);
    let gen = build_generator(&cfg.basis, &cfg.symbol, STENCIL_ROW)?;
    let st = limit_stencil(&gen, f64::INFINITY)?;
    out.push(
        "stencil.cauchy",
        "max|row(n)-row(n/2)|",
        st.cauchy_defect,
        Relation::Le,
        1e-3,
    )
    .with("row", st.row as f64);

    // the limit row of M_s is the cosine expansion of s(cos th)
    let c = cfg.symbol.s.chebyshev_coeffs();
    let l = gen.bandwidth as i64;
    let oracle = |k: i64| -> f64 {
        let j = k.unsigned_abs() as usize;
        let v = c.get(j).copied().unwrap_or(0.0);
        let u = if j == 0 { v } else { 0.5 * v };
        if k == 0 {
            u - cfg.symbol.s_max
        } else {
            u
        }
    };
    for (i, k) in (-l..=l).enumerate() {
        let target = 48.0 * oracle(k);
        let measured = 48.0 * st.coeffs[i];
        out.push(
            "stencil.coefficient",
            "|48 g_k-48 G_k|",
            (measured - target).abs(),
            Relation::Le,
            STENCIL_TOL,
        )
        .with("k", k as f64)
        .with("48g_k", measured)
        .with("target", target);
    }

    if is_worked_example(sys) {
        let q1 = sys.q_poly().eval(1.0);
        out.push(
            "stencil.printed_u3",
            "|48 U_3-1|",
            (48.0 * PRINTED_U[3] - 1.0).abs(),
            Relation::Le,
            0.0,
        );
        out.push(
            "stencil.printed_center",
            "|48(U_0-Q(1))+38|",
            (48.0 * (PRINTED_U[0] - q1) + 38.0).abs(),
            Relation::Le,
            0.0,
        )
        .with("Q(1)", q1);
        let diff = PRINTED_U
            .iter()
            .enumerate()
            .map(|(j, u)| {
                (oracle(j as i64) + if j == 0 { cfg.symbol.s_max } else { 0.0 } - u).abs()
            })
            .fold(0.0, f64::max);
        out.push(
            "stencil.printed_table",
            "max|U_j-printed|",
            diff,
            Relation::Le,
            1e-15,
        );
        let rows = PRINTED_U
            .iter()
            .enumerate()
            .map(|(j, u)| (gen.u(STENCIL_ROW, j as i64) - u).abs())
            .fold(0.0, f64::max);
        out.push(
            "stencil.printed_rows",
            "max|U_j(500)-printed|",
            rows,
            Relation::Le,
            1e-3,
        );
    }
    Ok(out.rows)
}

/// Power weights in `A_p` (or `A_1` for `p = 1`).
pub fn in_ap_theory(gamma: f64, p: f64) -> bool {
    if p == 1.0 {
        gamma > -1.0 && gamma <= 0.0
    } else {
        gamma > -1.0 && gamma < p - 1.0
    }
}

fn ap_boundary(gamma: f64, p: f64) -> bool {
    gamma == -1.0 || (p > 1.0 && gamma == p - 1.0)
}

pub const MAXIMAL_SAMPLES: usize = 40;
pub const SUPPORTS: [i64; 2] = [8, 16];

/// `sup n` in the window of positive random sequences with `s + 1` sites.
fn support_family(cfg: &Resolved, s: i64, seed: u64) -> Vec<SequenceData> {
    if cfg.index().is_integers() {
        random_family(seed, MAXIMAL_SAMPLES, -s / 2, s - s / 2, true)
    } else {
        random_family(seed, MAXIMAL_SAMPLES, 0, s, true)
    }
}

fn probe_max(
    family: &KernelFamily,
    grid: &TimeGrid,
    w: &WeightSeq,
    p: f64,
    fs: &[SequenceData],
) -> Result<f64> {
    let ratios = fs
        .par_iter()
        .map(|f| {
            maximal_inequality_probe(family, grid, w, p, std::slice::from_ref(f)).map(|s| s.max)
        })
        .collect::<specsemi_core::Result<Vec<_>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

fn maximal(cfg: &Resolved) -> Result<Vec<ReportRow>> {
    let mut out = Rows::new(cfg);
    let n = cfg.n();
    let grid = TimeGrid::default_geometric();
    let fine = grid.refined();
    let family = KernelFamily::new(&cfg.basis, &cfg.symbol, n, &fine.points)?;
    let (lo, hi) = index_bounds(cfg.index());
    let unit = WeightSeq::unit(lo, hi);
    let seed = cfg.config.seed;

    let fs = support_family(cfg, SUPPORTS[0], seed);
    let fs2 = support_family(cfg, SUPPORTS[1], seed);
    let c = probe_max(&family, &grid, &unit, 2.0, &fs)?;
    let c_fine = probe_max(&family, &fine, &unit, 2.0, &fs)?;
    let c_wide = probe_max(&family, &grid, &unit, 2.0, &fs2)?;
    out.push(
        "maximal.lower",
        "C=max||W_*f||_2/||f||_2",
        c,
        Relation::Ge,
        1.0 - 1e-12,
    )
    .with("support", SUPPORTS[0] as f64)
    .with("samples", fs.len() as f64);
    out.push("maximal.finite", "C", c, Relation::Le, f64::MAX)
        .with("support", SUPPORTS[0] as f64);
    out.push(
        "maximal.grid_drift",
        "|C_refined/C-1|",
        (c_fine / c - 1.0).abs(),
        Relation::Le,
        DRIFT_MAX,
    )
    .with("C", c)
    .with("C_refined", c_fine)
    .with("t_points", grid.points.len() as f64);
    out.push(
        "maximal.support_drift",
        "|C(2s)/C(s)-1|",
        (c_wide / c - 1.0).abs(),
        Relation::Le,
        DRIFT_MAX,
    )
    .with("C(s)", c)
    .with("C(2s)", c_wide)
    .with("support", SUPPORTS[0] as f64);

    // window-doubling classification of power weights
    let w = &cfg.config.weight;
    let mut panel = vec![
        (-0.5, 1.0),
        (0.5, 1.0),
        (-0.5, 2.0),
        (0.5, 2.0),
        (-1.5, 2.0),
        (2.0, 2.0),
        (3.0, 2.0),
        (1.0, 3.0),
        (3.0, 3.0),
    ];
    let configured = (w.gamma(), w.p);
    if !panel.contains(&configured) {
        panel.push(configured);
    }
    for (gamma, p) in panel {
        let g = ap_growth(gamma, p, 32, 6, AP_THRESHOLD)?;
        let expect_in = in_ap_theory(gamma, p);
        let (rel, metric) = if expect_in {
            (Relation::Le, "last doubling growth (expect in)")
        } else {
            (Relation::Gt, "last doubling growth (expect out)")
        };
        let scope = if ap_boundary(gamma, p) {
            Scope::Boundary
        } else {
            Scope::InScope
        };
        out.push(
            "maximal.ap_class",
            metric,
            g.last_ratio - 1.0,
            rel,
            AP_THRESHOLD,
        )
        .with("gamma", gamma)
        .with("p", p)
        .with("window", *g.windows.last().expect("windows") as f64)
        .with("A_p(window)", *g.constants.last().expect("constants"))
        .scoped(scope);
    }

    // configured weight: bounded and stable under support doubling
    let (gamma, p) = configured;
    let weight = w.on(cfg.index());
    let cw = probe_max(&family, &grid, &weight, p, &fs)?;
    let cw_wide = probe_max(&family, &grid, &weight, p, &fs2)?;
    let scope = if in_ap_theory(gamma, p) {
        Scope::InScope
    } else {
        Scope::OutOfScope
    };
    let metric = if p == 1.0 {
        "|C_w(2s)/C_w(s)-1| weak type"
    } else {
        "|C_w(2s)/C_w(s)-1|"
    };
    out.push(
        "maximal.weighted_support_drift",
        metric,
        (cw_wide / cw - 1.0).abs(),
        Relation::Le,
        DRIFT_MAX,
    )
    .with("gamma", gamma)
    .with("p", p)
    .with("C_w(s)", cw)
    .with("C_w(2s)", cw_wide)
    .scoped(scope);
    Ok(out.rows)
}
