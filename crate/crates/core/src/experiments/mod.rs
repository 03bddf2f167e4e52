//! Table reproduction, theorem verification suites and counterexample
//! replay, with replayable JSON reports.

mod enumerate;
mod instance;
mod report;
mod suites;
mod tables;

pub use enumerate::{
    all_words, canonical_form, enum_cap, enumerate_canonical_collections, DEFAULT_ENUM_CAP,
    ENUM_CAP_ENV,
};
pub use instance::{check_instance, digits, Expect, Instance, P2_FORMS};
pub use report::{replay, Failure, VerificationReport};
pub use suites::{
    min_period_hypothesis, random_oracle_sets, run_counterexamples, table_survivor_sets,
    verify_extremal, verify_bracket, verify_min_period, verify_oracles, verify_p2_theorem,
    verify_r_order, verify_table_orderings, MinPeriodConfig, OracleConfig, ROrderConfig,
    SuiteMode,
};
pub use tables::{
    parse_cell, reproduce_table, table_csv, table_data, table_spec, CellStatus, Erratum, RowSpec,
    TableData, TableRow, TableSpec,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TABLE_TOL: f64 = 5e-4;

/// One suite of an experiments config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum SuiteConfig {
    Tables {
        #[serde(default = "all_tables")]
        ids: Vec<u32>,
        #[serde(default = "default_tol")]
        tolerance: f64,
    },
    P2Theorem {
        q_max: u32,
    },
    ROrder(ROrderConfig),
    MinPeriod(MinPeriodConfig),
    Counterexamples,
    TableOrderings,
    Bracket {
        samples: usize,
        seed: u64,
    },
    Extremal {
        p: usize,
        q: u32,
    },
    Oracle(OracleConfig),
}

fn all_tables() -> Vec<u32> {
    vec![1, 2, 3, 4, 5]
}

fn default_tol() -> f64 {
    DEFAULT_TABLE_TOL
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub suites: Vec<SuiteConfig>,
    #[serde(default)]
    pub output_json: Option<String>,
    #[serde(default)]
    pub output_csv: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExperimentOutput {
    pub tables: Vec<TableRow>,
    pub reports: Vec<VerificationReport>,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
            && self
                .tables
                .iter()
                .all(|r| r.status != CellStatus::Fail)
    }

    /// One line per report, then the table rows.
    pub fn to_csv(&self) -> String {
        let mut s = reports_csv(&self.reports);
        if !self.tables.is_empty() {
            s.push_str(&table_csv(&self.tables));
        }
        s
    }
}

pub fn reports_csv(reports: &[VerificationReport]) -> String {
    let mut s = String::from("theorem,instances,failures,violations,exploratory,seed,passed\n");
    for r in reports {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.theorem,
            r.instances,
            r.failures.len(),
            r.violations.len(),
            r.exploratory,
            r.seed.map(|x| x.to_string()).unwrap_or_default(),
            r.passed()
        ));
    }
    s
}

pub fn run_suite(s: &SuiteConfig, out: &mut ExperimentOutput) -> Result<()> {
    match s {
        SuiteConfig::Tables { ids, tolerance } => {
            for &id in ids {
                out.tables.extend(reproduce_table(id, *tolerance)?);
            }
        }
        SuiteConfig::P2Theorem { q_max } => out.reports.push(verify_p2_theorem(*q_max)?),
        SuiteConfig::ROrder(c) => out.reports.push(verify_r_order(c)?),
        SuiteConfig::MinPeriod(c) => out.reports.push(verify_min_period(c)?),
        SuiteConfig::Counterexamples => out.reports.push(run_counterexamples()?),
        SuiteConfig::TableOrderings => out.reports.push(verify_table_orderings()?),
        SuiteConfig::Bracket { samples, seed } => out.reports.push(verify_bracket(*samples, *seed)?),
        SuiteConfig::Extremal { p, q } => out.reports.push(verify_extremal(*p, *q)?),
        SuiteConfig::Oracle(c) => out.reports.push(verify_oracles(c)?),
    }
    Ok(())
}

/// Runs every suite of a config and writes the requested output files.
pub fn run_config(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::default();
    for s in &cfg.suites {
        run_suite(s, &mut out)?;
    }
    let write = |path: &str, text: String| {
        std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("writing {path}: {e}")))
    };
    if let Some(p) = &cfg.output_json {
        write(p, serde_json::to_string_pretty(&out).expect("serializable"))?;
    }
    if let Some(p) = &cfg.output_csv {
        write(p, out.to_csv())?;
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("experiments config: {e}")))
}
