use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::output::{sci, write_csv, write_text};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    fn holds(self, measured: f64, tolerance: f64) -> bool {
        match self {
            Relation::Le => measured <= tolerance,
            Relation::Ge => measured >= tolerance,
            Relation::Gt => measured > tolerance,
        }
    }
}

/// Whether the parameters satisfy the hypotheses of the estimate a row
/// checks. Failing `OutOfScope` rows are reported but do not fail a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scope {
    #[serde(rename = "in-scope")]
    InScope,
    #[serde(rename = "boundary")]
    Boundary,
    #[serde(rename = "out-of-scope-params")]
    OutOfScope,
}

impl Scope {
    pub fn name(self) -> &'static str {
        match self {
            Scope::InScope => "in-scope",
            Scope::Boundary => "boundary",
            Scope::OutOfScope => "out-of-scope-params",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub system: String,
    pub parameters: BTreeMap<String, f64>,
    pub metric: String,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
    pub scope: Scope,
}

impl ReportRow {
    pub fn new(
        experiment: &str,
        system: &str,
        metric: &str,
        measured: f64,
        relation: Relation,
        tolerance: f64,
    ) -> Self {
        Self {
            experiment: experiment.into(),
            system: system.into(),
            parameters: BTreeMap::new(),
            metric: metric.into(),
            measured,
            relation,
            tolerance,
            // NaN never passes
            pass: relation.holds(measured, tolerance),
            scope: Scope::InScope,
        }
    }

    pub fn params(mut self, echo: &BTreeMap<String, f64>) -> Self {
        self.parameters
            .extend(echo.iter().map(|(k, v)| (k.clone(), *v)));
        self
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.into(), value);
        self
    }

    pub fn scope(mut self, scope: Scope) -> Self {
        self.scope = scope;
        self
    }

    /// Counts against the exit status.
    pub fn blocking_failure(&self) -> bool {
        !self.pass && self.scope != Scope::OutOfScope
    }

    fn csv_line(&self) -> String {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.system,
            params.join(";"),
            self.metric,
            sci(self.measured),
            self.relation.symbol(),
            sci(self.tolerance),
            self.pass,
            self.scope.name()
        )
    }
}

pub const CSV_HEADER: &str =
    "experiment,system,parameters,metric,measured,relation,tolerance,pass,scope";

#[derive(Serialize)]
struct Summary {
    rows: usize,
    failed: usize,
    failed_out_of_scope: usize,
    pass: bool,
}

#[derive(Serialize)]
struct ReportFile<'a, C: Serialize> {
    suite: &'a str,
    config: &'a C,
    summary: Summary,
    rows: &'a [ReportRow],
}

/// Writes `report.json` and `report.csv`; returns whether the run passes.
pub fn write_report<C: Serialize>(
    dir: &Path,
    suite: &str,
    config: &C,
    rows: &[ReportRow],
) -> Result<bool> {
    let failed = rows.iter().filter(|r| !r.pass).count();
    let blocking = rows.iter().filter(|r| r.blocking_failure()).count();
    let file = ReportFile {
        suite,
        config,
        summary: Summary {
            rows: rows.len(),
            failed,
            failed_out_of_scope: failed - blocking,
            pass: blocking == 0,
        },
        rows,
    };
    let mut json = serde_json::to_string_pretty(&file).expect("report serialises");
    json.push('\n');
    write_text(&dir.join("report.json"), &json)?;
    write_csv(
        &dir.join("report.csv"),
        CSV_HEADER,
        rows.iter().map(ReportRow::csv_line),
    )?;
    Ok(blocking == 0)
}
