//! Batch experiment runner: JSON configs in, JSON reports and CSV summaries out.
//!
//! Reports are deterministic given the config and seed; the only varying
//! field is `timestamp`, which [`RunReport::masked_json`] zeroes.

mod config;
mod experiments;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

pub use config::{
    AutoCutoff, CutoffSpec, ExperimentConfig, ExperimentKind, DEFAULT_CUTOFF_TOLERANCE, DEFAULT_DT, DEFAULT_FD_STEP,
};
pub use experiments::{reduce, truncation_artifact_defect, ENTRY_TOLERANCE, MATRIX_TOLERANCE, MAX_DIMENSION};

use crate::bridge::EquivalenceReport;
use crate::error::{Error, Result};
use crate::extended::{survey_csv, SurveyRow};
use crate::fock::BasisDescriptor;

/// Environment variable naming the output root.
pub const OUTPUT_ENV: &str = "FOCKBRIDGE_OUT";
/// Output root when [`OUTPUT_ENV`] is unset.
pub const DEFAULT_OUTPUT_ROOT: &str = "fockbridge-out";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT))
}

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub kind: ExperimentKind,
    pub version: String,
    pub config: ExperimentConfig,
    pub basis: BasisDescriptor,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<EquivalenceReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub survey: Vec<SurveyRow>,
    /// Seconds since the Unix epoch; the only nondeterministic field.
    pub timestamp: u64,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// JSON with the timestamp zeroed.
    pub fn masked_json(&self) -> Result<String> {
        Self { timestamp: 0, ..self.clone() }.to_json()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(EquivalenceReport::CSV_HEADER);
        out.push('\n');
        for c in &self.checks {
            out.push_str(&c.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &EquivalenceReport> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Run one experiment in memory.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    let name = config.name();
    let context = |e: Error| e.context(format!("experiment {name}"));
    let prepared = experiments::prepare(config).map_err(context)?;
    let mut survey = Vec::new();
    let checks = match config.kind {
        ExperimentKind::VerifyAlgebra => experiments::verify_algebra(config, &prepared),
        ExperimentKind::VerifyEq8 => experiments::verify_eq8(&prepared),
        ExperimentKind::VerifyEq9 => experiments::verify_eq9(config, &prepared),
        ExperimentKind::VerifyEq6 => experiments::verify_eq6(config, &prepared),
        ExperimentKind::Eq10Gap => experiments::eq10(config, &prepared),
        ExperimentKind::ZeroPoint => experiments::zero_point(&prepared),
        ExperimentKind::ExtendedSurvey => experiments::extended_survey(config, &prepared).map(|(checks, rows)| {
            survey = rows;
            checks
        }),
    }
    .map_err(context)?;
    Ok(RunReport {
        name,
        kind: config.kind,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        basis: prepared.basis.into(),
        samples: prepared.ensemble.as_ref().map_or(0, |e| e.len()),
        passed: checks.iter().all(|c| c.passed),
        checks,
        survey,
        timestamp: unix_time(),
    })
}

/// Report stem under `root`: the config's `output` if set, else its name.
fn report_stem(report: &RunReport, root: &Path) -> PathBuf {
    root.join(report.config.output.clone().unwrap_or_else(|| report.name.clone()))
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Write `<stem>.json`, `<stem>.csv` and, for surveys, `<stem>-survey.csv`.
pub fn write_report(report: &RunReport, root: &Path) -> Result<Vec<PathBuf>> {
    let stem = report_stem(report, root);
    if let Some(dir) = stem.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut written = vec![with_suffix(&stem, ".json"), with_suffix(&stem, ".csv")];
    std::fs::write(&written[0], report.to_json()?)?;
    std::fs::write(&written[1], report.to_csv())?;
    if !report.survey.is_empty() {
        written.push(with_suffix(&stem, "-survey.csv"));
        std::fs::write(&written[2], survey_csv(&report.survey))?;
    }
    Ok(written)
}

/// Load, run and persist one config file.
pub fn run_file(path: &Path, root: &Path) -> Result<RunReport> {
    let config = ExperimentConfig::load(path)?;
    let report = run(&config)?;
    write_report(&report, root)?;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub config: String,
    pub name: Option<String>,
    pub status: EntryStatus,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed_checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    /// Sorted by config file name.
    pub entries: Vec<SuiteEntry>,
    pub timestamp: u64,
}

impl SuiteReport {
    /// Any error gives [`EXIT_USAGE`]; otherwise any failure gives [`EXIT_CHECK_FAILED`].
    pub fn exit_code(&self) -> i32 {
        if self.errors > 0 {
            EXIT_USAGE
        } else if self.failed > 0 {
            EXIT_CHECK_FAILED
        } else {
            EXIT_PASS
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn masked_json(&self) -> Result<String> {
        Self { timestamp: 0, ..self.clone() }.to_json()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("config,name,status,failed_checks,error\n");
        for e in &self.entries {
            let status = match e.status {
                EntryStatus::Pass => "pass",
                EntryStatus::Fail => "fail",
                EntryStatus::Error => "error",
            };
            let error = e.error.as_deref().unwrap_or("").replace(['"', '\n'], " ");
            out.push_str(&format!(
                "{},{},{},{},\"{}\"\n",
                e.config,
                e.name.as_deref().unwrap_or(""),
                status,
                e.failed_checks.join(";"),
                error
            ));
        }
        out
    }
}

/// `*.json` files directly inside `dir`, sorted by file name.
pub fn suite_configs(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::Config(format!("config directory {} does not exist", dir.display())));
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(paths)
}

fn suite_entry(path: &Path, root: &Path) -> SuiteEntry {
    let config = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match run_file(path, root) {
        Ok(report) => SuiteEntry {
            config,
            name: Some(report.name.clone()),
            status: if report.passed { EntryStatus::Pass } else { EntryStatus::Fail },
            failed_checks: report.failed_checks().map(|c| c.experiment.clone()).collect(),
            error: None,
        },
        Err(e) => SuiteEntry { config, name: None, status: EntryStatus::Error, failed_checks: Vec::new(), error: Some(e.to_string()) },
    }
}

/// Run every config in `dir` concurrently, then write `suite.json` and
/// `suite.csv` under `root`. Entry order is config name order.
pub fn suite(dir: &Path, root: &Path) -> Result<SuiteReport> {
    let paths = suite_configs(dir)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(paths.len().max(1));
    let mut entries: Vec<Option<SuiteEntry>> = vec![None; paths.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<_> = entries.chunks_mut(paths.len().div_ceil(workers).max(1)).collect();
        let mut offset = 0;
        for chunk in chunks {
            let start = offset;
            offset += chunk.len();
            let paths = &paths;
            scope.spawn(move || {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(suite_entry(&paths[start + i], root));
                }
            });
        }
    });
    let entries: Vec<SuiteEntry> = entries.into_iter().flatten().collect();
    let count = |s: EntryStatus| entries.iter().filter(|e| e.status == s).count();
    let report = SuiteReport {
        passed: count(EntryStatus::Pass),
        failed: count(EntryStatus::Fail),
        errors: count(EntryStatus::Error),
        entries,
        timestamp: unix_time(),
    };
    std::fs::create_dir_all(root)?;
    std::fs::write(root.join("suite.json"), report.to_json()?)?;
    std::fs::write(root.join("suite.csv"), report.to_csv())?;
    Ok(report)
}
