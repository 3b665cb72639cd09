use super::HarnessError;
use crate::inequalities::{InequalityReport, Verdict};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One row of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub max_vars: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    pub seed: u64,
}

impl From<&InequalityReport> for SummaryRow {
    fn from(r: &InequalityReport) -> Self {
        SummaryRow {
            name: r.name.clone(),
            m: r.m,
            n: r.n,
            max_vars: r.max_vars,
            lhs: r.lhs.value,
            rhs: r.rhs_base.value,
            constant: r.constant,
            ratio: r.ratio,
            verdict: r.verdict,
            seed: r.seed,
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

pub(crate) struct OutputDir {
    root: PathBuf,
    pub written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: PathBuf) -> Result<Self, HarnessError> {
        fs::create_dir_all(&root).map_err(|e| io_error(&root, e))?;
        Ok(OutputDir {
            root,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), HarnessError> {
        let path = self.root.join(name);
        let mut f = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
        f.write_all(bytes).map_err(|e| io_error(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    pub fn jsonl<T: Serialize>(&mut self, name: &str, records: &[T]) -> Result<(), HarnessError> {
        let mut out = String::new();
        for r in records {
            out.push_str(&serde_json::to_string(r).map_err(|e| HarnessError::Io(e.to_string()))?);
            out.push('\n');
        }
        self.write(name, out.as_bytes())
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| HarnessError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
        self.write(name, &bytes)
    }

    /// CSV with a header decided at run time.
    pub fn csv_records(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let to_io = |e: csv::Error| HarnessError::Io(e.to_string());
        w.write_record(header).map_err(to_io)?;
        for r in rows {
            w.write_record(r).map_err(to_io)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
        self.write(name, &bytes)
    }
}

/// Parses `summary.csv` back into rows.
pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_error(path, e))?;
    r.deserialize().collect::<Result<_, _>>().map_err(|e| io_error(path, e))
}

/// Parses a JSON-lines report file back into reports.
pub fn read_reports(path: &Path) -> Result<Vec<InequalityReport>, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    text.lines()
        .map(|l| serde_json::from_str(l).map_err(|e| io_error(path, e)))
        .collect()
}
