use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use specsemi_core::dunkl::DunklSystem;
use specsemi_core::exceptional::{self, ExceptionalSystem};
use specsemi_core::harness::WeightSeq;
use specsemi_core::semigroup::{Basis, SequenceData, SymbolSpec, TimeGrid};
use specsemi_core::{IndexSet, JacobiParams, Poly};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Jacobi,
    Exceptional,
    Dunkl,
    FourierOracle,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Jacobi => "jacobi",
            SystemKind::Exceptional => "exceptional",
            SystemKind::Dunkl => "dunkl",
            SystemKind::FourierOracle => "fourier_oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: GridScale,
}

fn default_scale() -> GridScale {
    GridScale::Geometric
}

impl Default for TGridSpec {
    fn default() -> Self {
        Self {
            min: 1e-4,
            max: 1e4,
            points: 257,
            scale: GridScale::Geometric,
        }
    }
}

impl TGridSpec {
    /// Geometric grids get `t = 0` in front; linear ones start at `min`
    /// (and also get `0` when `min > 0`).
    pub fn build(&self) -> Result<TimeGrid> {
        let g = match self.scale {
            GridScale::Geometric => TimeGrid::geometric(self.min, self.max, self.points),
            GridScale::Linear => TimeGrid::linear(self.min, self.max, self.points),
        };
        g.map_err(|e| CliError::Config(format!("t_grid: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Unit,
    Power,
}

/// `w(n) = (1 + |n|)^gamma` (or `1`) used with exponent `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    #[serde(default = "default_weight_kind")]
    pub kind: WeightKind,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "default_p")]
    pub p: f64,
}

fn default_weight_kind() -> WeightKind {
    WeightKind::Unit
}

fn default_p() -> f64 {
    2.0
}

impl Default for WeightSpec {
    fn default() -> Self {
        Self {
            kind: WeightKind::Unit,
            gamma: 0.0,
            p: 2.0,
        }
    }
}

impl WeightSpec {
    pub fn gamma(&self) -> f64 {
        match self.kind {
            WeightKind::Unit => 0.0,
            WeightKind::Power => self.gamma,
        }
    }

    pub fn on(&self, index: IndexSet) -> WeightSeq {
        let (lo, hi) = index_bounds(index);
        match self.kind {
            WeightKind::Unit => WeightSeq::unit(lo, hi),
            WeightKind::Power => WeightSeq::power(self.gamma, lo, hi),
        }
    }
}

/// Initial data for `evolve` and `maximal`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FSpec {
    /// `delta_n`.
    Delta(i64),
    Inline {
        n: Vec<i64>,
        values: Vec<f64>,
    },
    /// Header `n,f`; relative paths are taken from the config's directory.
    Csv(PathBuf),
}

impl Default for FSpec {
    fn default() -> Self {
        FSpec::Delta(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bw_coeffs: Option<Vec<f64>>,
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    /// Fixed quadrature order for kernel tables; the order policy when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    #[serde(default)]
    pub t_grid: TGridSpec,
    #[serde(default)]
    pub weight: WeightSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FSpec>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_n() -> usize {
    64
}

pub const MAX_N: usize = 4096;

/// A validated config with every default filled in.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub basis: Basis,
    pub symbol: SymbolSpec,
    pub grid: TimeGrid,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// A config for `system` with all defaults.
    pub fn for_system(system: SystemKind) -> Self {
        Self::from_json(&format!("{{\"system\": \"{}\"}}", system.name())).expect("minimal config")
    }

    /// Fills defaults, validates and builds the basis.
    pub fn resolve(&self) -> Result<Resolved> {
        let mut cfg = self.clone();
        let bad = |msg: String| Err(CliError::Config(msg));
        if cfg.n < 4 || cfg.n > MAX_N {
            return bad(format!("N = {} must lie in 4..={MAX_N}", cfg.n));
        }
        let (da, db) = match cfg.system {
            SystemKind::Exceptional => (1.5, 0.5),
            _ => (0.0, 0.0),
        };
        match cfg.system {
            SystemKind::FourierOracle => {
                if cfg.alpha.is_some() || cfg.beta.is_some() {
                    return bad("fourier_oracle takes no alpha/beta".into());
                }
            }
            _ => {
                cfg.alpha.get_or_insert(da);
                cfg.beta.get_or_insert(db);
            }
        }
        if cfg.system != SystemKind::Exceptional
            && (cfg.b_coeffs.is_some() || cfg.bw_coeffs.is_some())
        {
            return bad("b_coeffs/bw_coeffs only apply to the exceptional system".into());
        }
        if cfg.b_coeffs.is_some() != cfg.bw_coeffs.is_some() {
            return bad("b_coeffs and bw_coeffs must be given together".into());
        }
        let params = || {
            JacobiParams::new(cfg.alpha.unwrap_or(da), cfg.beta.unwrap_or(db))
                .map_err(|e| CliError::Config(e.to_string()))
        };
        let basis = match cfg.system {
            SystemKind::Jacobi => Basis::ClassicalJacobi(params()?),
            SystemKind::Dunkl => Basis::Dunkl(
                DunklSystem::new(params()?).map_err(|e| CliError::Config(e.to_string()))?,
            ),
            SystemKind::FourierOracle => Basis::FourierOracle,
            SystemKind::Exceptional => {
                let base = params()?;
                let sys = match (&cfg.b_coeffs, &cfg.bw_coeffs) {
                    (Some(b), Some(bw)) => {
                        if b.iter().chain(bw).any(|c| !c.is_finite()) {
                            return bad("b_coeffs/bw_coeffs must be finite".into());
                        }
                        exceptional::make_system(base, Poly::new(b.clone()), Poly::new(bw.clone()))
                    }
                    _ => ExceptionalSystem::first_seed(base),
                }
                .map_err(|e| CliError::Config(format!("exceptional system: {e}")))?;
                cfg.b_coeffs = Some(sys.b().coeffs().to_vec());
                cfg.bw_coeffs = Some(sys.bw().coeffs().to_vec());
                Basis::Exceptional(sys)
            }
        };
        let symbol = basis.natural_symbol();
        if let Some(order) = cfg.quad_order {
            if order <= cfg.n {
                return bad(format!("quad_order = {order} must exceed N = {}", cfg.n));
            }
        }
        let g = &cfg.t_grid;
        if !(g.min.is_finite() && g.max.is_finite()) || g.points > 100_000 {
            return bad("t_grid needs finite bounds and at most 100000 points".into());
        }
        let grid = g.build()?;
        let w = &cfg.weight;
        if !(w.p >= 1.0 && w.p.is_finite()) {
            return bad(format!("weight.p = {} must be at least 1", w.p));
        }
        if !w.gamma.is_finite() || w.gamma.abs() > 64.0 {
            return bad(format!("weight.gamma = {} out of range", w.gamma));
        }
        if cfg.f.is_none() {
            cfg.f = Some(FSpec::default());
        }
        Ok(Resolved {
            config: cfg,
            basis,
            symbol,
            grid,
        })
    }
}

impl Resolved {
    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn index(&self) -> IndexSet {
        self.basis.index_set(self.config.n)
    }

    pub fn system(&self) -> SystemKind {
        self.config.system
    }

    /// `alpha`, `beta`, `N` for report rows.
    pub fn echo(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        if let Some(a) = self.config.alpha {
            m.insert("alpha".into(), a);
        }
        if let Some(b) = self.config.beta {
            m.insert("beta".into(), b);
        }
        m.insert("N".into(), self.config.n as f64);
        m
    }

    /// The initial sequence, checked against the window.
    pub fn initial(&self) -> Result<SequenceData> {
        let f = match self.config.f.clone().unwrap_or_default() {
            FSpec::Delta(n) => SequenceData::delta(n),
            FSpec::Inline { n, values } => {
                if n.len() != values.len() {
                    return Err(CliError::Config(
                        "f.inline: n and values differ in length".into(),
                    ));
                }
                SequenceData::new(n, values)
            }
            FSpec::Csv(path) => read_f_csv(&self.config.base_dir.join(path))?,
        };
        if f.values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("f has non-finite values".into()));
        }
        let index = self.index();
        if let Some(&n) = f.indices.iter().find(|&&n| index.position(n).is_none()) {
            return Err(CliError::Config(format!(
                "f has support at {n}, outside the window"
            )));
        }
        Ok(f)
    }
}

fn read_f_csv(path: &Path) -> Result<SequenceData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some("n,f") {
        return Err(CliError::Config(format!(
            "{}: header must be n,f",
            path.display()
        )));
    }
    let (mut idx, mut vals) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let err = || CliError::Config(format!("{}: bad row {}", path.display(), i + 2));
        let (a, b) = line.split_once(',').ok_or_else(err)?;
        idx.push(a.trim().parse::<i64>().map_err(|_| err())?);
        vals.push(b.trim().parse::<f64>().map_err(|_| err())?);
    }
    Ok(SequenceData::new(idx, vals))
}

/// Smallest and largest index of a window.
pub fn index_bounds(index: IndexSet) -> (i64, i64) {
    let n = index.n_max() as i64;
    if index.is_integers() {
        (-n, n)
    } else {
        (0, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let r = RunConfig::for_system(SystemKind::Exceptional)
            .resolve()
            .unwrap();
        assert_eq!(r.config.alpha, Some(1.5));
        assert_eq!(r.config.b_coeffs.as_deref(), Some(&[1.0, -1.5, 0.5][..]));
        assert_eq!(r.config.n, 64);
        assert_eq!(r.grid.points.len(), 258);
        assert_eq!(r.config.f, Some(FSpec::Delta(0)));
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"system": "jacobi", "alpha": -1.5}"#,
            r#"{"system": "jacobi", "N": 2}"#,
            r#"{"system": "jacobi", "colour": 1}"#,
            r#"{"system": "circle"}"#,
            r#"{"system": "fourier_oracle", "alpha": 0.0}"#,
            r#"{"system": "jacobi", "b_coeffs": [1.0, -1.0], "bw_coeffs": [1.0]}"#,
            r#"{"system": "exceptional", "b_coeffs": [1.0, -1.5, 0.5], "bw_coeffs": [-0.5, -0.25]}"#,
            r#"{"system": "dunkl", "t_grid": {"min": 0.0, "max": 1.0, "points": 5}}"#,
            r#"{"system": "dunkl", "weight": {"kind": "power", "gamma": 0.5, "p": 0.5}}"#,
            r#"{"system": "jacobi", "quad_order": 10}"#,
        ] {
            let r = RunConfig::from_json(text).and_then(|c| c.resolve());
            assert!(matches!(r, Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn initial_data_must_fit() {
        let cfg =
            RunConfig::from_json(r#"{"system": "jacobi", "N": 8, "f": {"delta": -1}}"#).unwrap();
        assert!(cfg.resolve().unwrap().initial().is_err());
        let cfg = RunConfig::from_json(
            r#"{"system": "dunkl", "N": 8, "f": {"inline": {"n": [-2, 3], "values": [1.0, 0.5]}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.resolve().unwrap().initial().unwrap().get(3), 0.5);
    }
}
