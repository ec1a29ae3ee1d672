//! JSON reports. Field order is fixed by the struct layouts and quantity
//! maps are sorted, so two runs on the same input differ only in
//! `generated_at`.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pcg::{PcgReport, PcgSeries, StepOutcome};
use crate::verify::{summarize, CheckReport, Summary};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub version: String,
    pub generated_at: String,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl SuiteReport {
    /// Stamped with the current UTC time.
    pub fn new(checks: Vec<CheckReport>) -> Self {
        Self::at(checks, chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
    }

    pub fn at(checks: Vec<CheckReport>, generated_at: String) -> Self {
        SuiteReport {
            version: VERSION.into(),
            generated_at,
            summary: summarize(&checks),
            checks,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesStepRecord {
    pub order: usize,
    pub witnesses: usize,
    pub checks: StepOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesRecord {
    pub version: String,
    pub group: String,
    pub word: String,
    pub base_order: usize,
    pub steps: Vec<SeriesStepRecord>,
    pub ok: bool,
    pub failures: Vec<String>,
}

impl SeriesRecord {
    pub fn new(s: &PcgSeries, report: &PcgReport) -> Self {
        let g = s.group();
        SeriesRecord {
            version: VERSION.into(),
            group: g.display_name(),
            word: s.word().to_string(),
            base_order: s.base().order(),
            steps: s
                .steps()
                .iter()
                .zip(&report.per_step)
                .map(|(st, &checks)| SeriesStepRecord {
                    order: st.subgroup.order(),
                    witnesses: st.witnesses.len(),
                    checks,
                })
                .collect(),
            ok: report.ok,
            failures: report
                .failures
                .iter()
                .map(|f| match f.witness {
                    Some(x) => format!("step {}: {} ({})", f.step, f.condition, g.perm(x)),
                    None => format!("step {}: {}", f.step, f.condition),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
