use std::path::{Path, PathBuf};

use rayon::prelude::*;
use specsemi_core::harness::{maximal_ratio, random_family};
use specsemi_core::semigroup::{
    maximal_operator, Evolution, EvolveMethod, KernelFamily, KernelTable,
};

use crate::config::{index_bounds, Resolved, RunConfig};
use crate::output::{ensure_dir, sci, t_label, write_csv};
use crate::report::write_report;
use crate::suites::{self, Suite, EVOLVE_TOL};
use crate::{exit, CliError, Result};

/// Where output goes: `--out`, then `output_dir`, then `./specsemi-out`.
pub fn output_dir(cfg: &RunConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("specsemi-out"))
}

/// What a command did, for the caller to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<PathBuf>,
    pub message: String,
}

fn kernel_tables(cfg: &Resolved) -> Result<Vec<KernelTable>> {
    let times = &cfg.grid.points;
    let tables = match cfg.config.quad_order {
        Some(order) => {
            let builder = cfg.basis.sample(&cfg.symbol, cfg.n(), order)?;
            times
                .par_iter()
                .map(|&t| builder.kernel(t))
                .collect::<specsemi_core::Result<Vec<_>>>()
        }
        None => {
            let family = KernelFamily::new(&cfg.basis, &cfg.symbol, cfg.n(), times)?;
            times.par_iter().map(|&t| family.kernel(t)).collect()
        }
    };
    Ok(tables?)
}

pub fn kernel(cfg: &Resolved, dir: &Path) -> Result<Outcome> {
    ensure_dir(dir)?;
    let (lo, hi) = index_bounds(cfg.index());
    let mut files = Vec::new();
    for k in kernel_tables(cfg)? {
        let path = dir.join(format!("kernel_t{}.csv", t_label(k.t)));
        let rows = (lo..=hi).flat_map(|n| {
            let k = &k;
            (lo..=hi)
                .map(move |m| format!("{n},{m},{}", sci(k.get(n, m).expect("inside the window"))))
        });
        write_csv(&path, "n,m,K", rows)?;
        files.push(path);
    }
    Ok(Outcome {
        code: exit::PASS,
        message: format!("wrote {} kernel tables", files.len()),
        files,
    })
}

pub fn evolve(cfg: &Resolved, dir: &Path) -> Result<Outcome> {
    let f = cfg.initial()?;
    ensure_dir(dir)?;
    let index = cfg.index();
    let dense = f.to_dense(index)?;
    let evolution = Evolution::new(&cfg.basis, &cfg.symbol, cfg.n())?;
    let fixed = match cfg.config.quad_order {
        Some(order) => Some(cfg.basis.sample(&cfg.symbol, cfg.n(), order)?),
        None => None,
    };
    let solutions = cfg
        .grid
        .points
        .par_iter()
        .map(|&t| -> specsemi_core::Result<(f64, Vec<f64>, Vec<f64>)> {
            let a = match &fixed {
                Some(b) => b.apply(&dense, t)?,
                None => evolution.solve(&dense, t, EvolveMethod::Kernel)?,
            };
            let b = evolution.solve(&dense, t, EvolveMethod::BandExpm)?;
            Ok((t, a, b))
        })
        .collect::<specsemi_core::Result<Vec<_>>>()?;
    let (lo, hi) = index_bounds(index);
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for (t, a, b) in &solutions {
        for n in lo..=hi {
            let p = index.position(n).expect("inside the window");
            let d = (a[p] - b[p]).abs();
            if index.in_inner_half(n) {
                worst = worst.max(d);
            }
            lines.push(format!(
                "{n},{},{},{},{},{}",
                sci(*t),
                sci(a[p]),
                sci(a[p]),
                sci(b[p]),
                sci(d)
            ));
        }
    }
    let path = dir.join("u.csv");
    write_csv(&path, "n,t,u,u_kernel,u_band,disagreement", lines)?;
    let ok = worst <= EVOLVE_TOL;
    Ok(Outcome {
        code: if ok { exit::PASS } else { exit::NUMERICAL },
        message: format!(
            "max disagreement on the inner half {worst:e} ({} {EVOLVE_TOL:e})",
            if ok { "within" } else { "exceeds" }
        ),
        files: vec![path],
    })
}

pub const PROBE_SAMPLES: usize = 32;

pub fn maximal(cfg: &Resolved, dir: &Path) -> Result<Outcome> {
    let f = cfg.initial()?;
    ensure_dir(dir)?;
    let index = cfg.index();
    let family = KernelFamily::new(&cfg.basis, &cfg.symbol, cfg.n(), &cfg.grid.points)?;
    let wf = maximal_operator(&family, &f, &cfg.grid)?;
    let (lo, hi) = index_bounds(index);
    let path = dir.join("maximal.csv");
    write_csv(
        &path,
        "n,f,Wstar_f",
        (lo..=hi).map(|n| format!("{n},{},{}", sci(f.get(n)), sci(wf.get(n)))),
    )?;

    let w = &cfg.config.weight;
    let weight = w.on(index);
    let q = (cfg.n() / 4) as i64;
    let (flo, fhi) = if index.is_integers() { (-q, q) } else { (0, q) };
    let fs = random_family(cfg.config.seed, PROBE_SAMPLES, flo, fhi, true);
    let ratios = fs
        .par_iter()
        .map(|f| maximal_ratio(&family, &cfg.grid, &weight, w.p, f))
        .collect::<specsemi_core::Result<Vec<_>>>()?;
    let probe = dir.join("maximal_probe.csv");
    write_csv(
        &probe,
        "sample,gamma,p,ratio",
        ratios
            .iter()
            .enumerate()
            .map(|(i, r)| format!("{i},{},{},{}", sci(w.gamma()), sci(w.p), sci(*r))),
    )?;
    let c = ratios.iter().copied().fold(0.0, f64::max);
    Ok(Outcome {
        code: exit::PASS,
        message: format!("empirical constant {c:.6} over {} samples", ratios.len()),
        files: vec![path, probe],
    })
}

pub fn verify(cfg: &Resolved, suite: Suite, dir: &Path) -> Result<Outcome> {
    let rows = suites::run(suite, cfg)?;
    ensure_dir(dir)?;
    let pass = write_report(dir, suite.name(), &cfg.config, &rows)?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.blocking_failure())
        .map(|r| {
            format!(
                "  FAIL {} {} = {:e} ({} {:e})",
                r.experiment,
                r.metric,
                r.measured,
                r.relation.symbol(),
                r.tolerance
            )
        })
        .collect();
    let mut message = format!(
        "{}: {}/{} rows pass",
        suite.name(),
        rows.iter().filter(|r| r.pass).count(),
        rows.len()
    );
    for f in failed {
        message.push('\n');
        message.push_str(&f);
    }
    Ok(Outcome {
        code: if pass { exit::PASS } else { exit::CHECK_FAILED },
        files: vec![dir.join("report.json"), dir.join("report.csv")],
        message,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Kernel,
    Evolve,
    Maximal,
    Verify,
}

/// Loads the config and dispatches.
pub fn run(
    cmd: Command,
    config: &Path,
    suite: Option<Suite>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let raw = RunConfig::load(config)?;
    let cfg = raw.resolve()?;
    let dir = output_dir(&raw, out);
    match cmd {
        Command::Kernel => kernel(&cfg, &dir),
        Command::Evolve => evolve(&cfg, &dir),
        Command::Maximal => maximal(&cfg, &dir),
        Command::Verify => {
            let suite = suite.ok_or_else(|| CliError::Config("verify needs --suite".into()))?;
            verify(&cfg, suite, &dir)
        }
    }
}
