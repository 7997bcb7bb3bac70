//! Privacy parameters, noisy releases and the append-only budget ledger.
//!
//! Releases compose sequentially: the ledger's spend is the plain sum of the
//! epsilons of its entries. A ledger may be backed by a newline-delimited JSON
//! file held under an exclusive advisory lock; in that case every release is
//! written and synced to the file before the noisy value is handed back.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dp::laplace::laplace_sample;
use crate::dp::RngStream;
use crate::error::{Error, Result};

/// Slack for float round-off when comparing the running spend to a cap.
const CAP_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    epsilon: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon.is_finite() {
            Ok(Self { epsilon })
        } else {
            Err(Error::arg(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )))
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    Laplace,
}

/// A value that has crossed the privacy boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyRelease {
    pub timestamp: String,
    pub mechanism: Mechanism,
    pub sensitivity: f64,
    pub epsilon: f64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub purpose: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetStatus {
    pub spent: f64,
    pub remaining: Option<f64>,
    pub releases: usize,
}

struct LedgerFile {
    path: PathBuf,
    file: File,
}

pub struct BudgetLedger {
    cap: Option<f64>,
    entries: Vec<NoisyRelease>,
    sink: Option<LedgerFile>,
}

impl std::fmt::Debug for BudgetLedger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BudgetLedger")
            .field("cap", &self.cap)
            .field("entries", &self.entries.len())
            .field("file", &self.sink.as_ref().map(|s| &s.path))
            .finish()
    }
}

fn check_cap(cap: Option<f64>) -> Result<()> {
    match cap {
        Some(c) if !(c > 0.0 && c.is_finite()) => {
            Err(Error::arg(format!("budget cap must be positive, got {c}")))
        }
        _ => Ok(()),
    }
}

impl BudgetLedger {
    /// In-memory ledger.
    pub fn new(cap: Option<f64>) -> Result<Self> {
        check_cap(cap)?;
        Ok(Self {
            cap,
            entries: Vec::new(),
            sink: None,
        })
    }

    /// Open (or create) a file-backed ledger and hold an exclusive lock on it
    /// until the ledger is dropped. Concurrent processes serialize here.
    pub fn open(path: &Path, cap: Option<f64>) -> Result<Self> {
        check_cap(cap)?;
        let file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        file.lock().map_err(|e| Error::io(path, e))?;
        let entries = read_entries(&file, path)?;
        let ledger = Self {
            cap,
            entries,
            sink: Some(LedgerFile {
                path: path.to_owned(),
                file,
            }),
        };
        if let Some(c) = cap {
            if ledger.spent() > c + CAP_SLACK {
                log::warn!(
                    "ledger {} already spends {} which exceeds the cap {c}",
                    path.display(),
                    ledger.spent()
                );
            }
        }
        Ok(ledger)
    }

    /// In-memory ledger seeded with earlier entries, e.g. from [`Self::load`].
    pub fn from_entries(cap: Option<f64>, entries: Vec<NoisyRelease>) -> Result<Self> {
        check_cap(cap)?;
        Ok(Self {
            cap,
            entries,
            sink: None,
        })
    }

    /// Read a ledger file under a shared lock without keeping it open.
    pub fn load(path: &Path) -> Result<Vec<NoisyRelease>> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        file.lock_shared().map_err(|e| Error::io(path, e))?;
        read_entries(&file, path)
    }

    pub fn cap(&self) -> Option<f64> {
        self.cap
    }

    pub fn entries(&self) -> &[NoisyRelease] {
        &self.entries
    }

    pub fn spent(&self) -> f64 {
        self.entries.iter().map(|e| e.epsilon).sum()
    }

    pub fn remaining(&self) -> Option<f64> {
        self.cap.map(|c| (c - self.spent()).max(0.0))
    }

    /// Refuse `epsilon` if it would push the spend over the cap.
    pub fn check(&self, epsilon: f64) -> Result<()> {
        if let Some(cap) = self.cap {
            let spent = self.spent();
            if spent + epsilon > cap + CAP_SLACK {
                return Err(Error::BudgetRefused {
                    requested: epsilon,
                    spent,
                    cap,
                });
            }
        }
        Ok(())
    }

    fn record(&mut self, release: NoisyRelease) -> Result<usize> {
        if let Some(sink) = &mut self.sink {
            let mut line = serde_json::to_string(&release)
                .map_err(|e| Error::Format(format!("ledger record: {e}")))?;
            line.push('\n');
            sink.file
                .write_all(line.as_bytes())
                .and_then(|()| sink.file.sync_data())
                .map_err(|e| Error::io(&sink.path, e))?;
        }
        self.entries.push(release);
        Ok(self.entries.len() - 1)
    }
}

fn read_entries(mut file: &File, path: &Path) -> Result<Vec<NoisyRelease>> {
    file.seek(SeekFrom::Start(0))
        .map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: NoisyRelease = serde_json::from_str(&line)
            .map_err(|e| Error::Format(format!("{} line {}: {e}", path.display(), i + 1)))?;
        entries.push(entry);
    }
    Ok(entries)
}

/// Release `true_value` through the Laplace mechanism at scale
/// `sensitivity / epsilon`. The budget is checked before any noise is drawn,
/// and the entry is recorded (and persisted, for file-backed ledgers) before
/// the release is returned. The value is never clamped or rounded.
pub fn release_scalar(
    true_value: f64,
    sensitivity: f64,
    params: PrivacyParams,
    ledger: &mut BudgetLedger,
    stream: &mut RngStream,
) -> Result<NoisyRelease> {
    release_scalar_for(true_value, sensitivity, params, ledger, stream, "")
}

pub fn release_scalar_for(
    true_value: f64,
    sensitivity: f64,
    params: PrivacyParams,
    ledger: &mut BudgetLedger,
    stream: &mut RngStream,
    purpose: &str,
) -> Result<NoisyRelease> {
    if !(sensitivity > 0.0 && sensitivity.is_finite()) {
        return Err(Error::arg(format!(
            "sensitivity must be positive, got {sensitivity}"
        )));
    }
    if !true_value.is_finite() {
        return Err(Error::arg("true value is not finite"));
    }
    let epsilon = params.epsilon();
    ledger.check(epsilon)?;
    if ledger.cap.is_none() {
        log::warn!("releasing with epsilon {epsilon} against a ledger with no budget cap");
    }
    let noise = laplace_sample(stream, sensitivity / epsilon)?;
    let release = NoisyRelease {
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
        mechanism: Mechanism::Laplace,
        sensitivity,
        epsilon,
        value: true_value + noise,
        purpose: purpose.to_owned(),
    };
    ledger.record(release.clone())?;
    Ok(release)
}

pub fn budget_status(ledger: &BudgetLedger) -> BudgetStatus {
    BudgetStatus {
        spent: ledger.spent(),
        remaining: ledger.remaining(),
        releases: ledger.entries().len(),
    }
}
