//! Verification records, CSV rendering and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::Suite;
use crate::error::Result;

/// Where the expected value of a record comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Closed-form value.
    Analytic,
    /// An independent computation.
    Oracle,
    /// Agreement across resolutions or repetitions.
    Stability,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Oracle => "oracle",
            Provenance::Stability => "stability",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub case: String,
    /// The mathematical statement the record tests.
    pub claim: String,
    pub provenance: Provenance,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Record {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(
        case: impl Into<String>,
        claim: &str,
        provenance: Provenance,
        measured: f64,
        tolerance: f64,
    ) -> Self {
        let pass = measured <= tolerance;
        Self { case: case.into(), claim: claim.into(), provenance, measured, tolerance, pass }
    }

    /// Passes when `measured ≥ tolerance`.
    pub fn at_least(
        case: impl Into<String>,
        claim: &str,
        provenance: Provenance,
        measured: f64,
        tolerance: f64,
    ) -> Self {
        let pass = measured >= tolerance;
        Self { case: case.into(), claim: claim.into(), provenance, measured, tolerance, pass }
    }

    /// Explicit outcome for checks that are not a single comparison.
    pub fn check(
        case: impl Into<String>,
        claim: &str,
        provenance: Provenance,
        measured: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        Self { case: case.into(), claim: claim.into(), provenance, measured, tolerance, pass }
    }

    /// A failed computation.
    pub fn error(case: impl Into<String>, claim: &str, err: &crate::Error) -> Self {
        Self {
            case: format!("{} [error: {err}]", case.into()),
            claim: claim.into(),
            provenance: Provenance::Oracle,
            measured: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
        }
    }

    /// First 16 hex digits of the SHA-256 of the case and claim.
    pub fn inputs_digest(&self) -> String {
        let h = Sha256::digest(format!("{}\u{1f}{}", self.case, self.claim).as_bytes());
        h.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub records: Vec<Record>,
}

pub const CSV_COLUMNS: &str = "case,claim,provenance,inputs_digest,measured,tolerance,pass";

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.to_string() }
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    /// Column header and rows; identical inputs give identical bytes.
    pub fn csv_body(&self) -> String {
        let mut s = String::from(CSV_COLUMNS);
        s.push('\n');
        for r in &self.records {
            let _ = writeln!(
                s,
                "{},{},{},{},{:e},{:e},{}",
                quote(&r.case),
                quote(&r.claim),
                r.provenance.name(),
                r.inputs_digest(),
                r.measured,
                r.tolerance,
                r.pass
            );
        }
        s
    }

    pub fn csv(&self, stamp: &Stamp) -> String {
        format!("{}# suite={}\n{}", stamp.header(), self.suite, self.csv_body())
    }
}

/// Comment lines placed above every CSV body.
#[derive(Debug, Clone, PartialEq)]
pub struct Stamp {
    pub config_digest: String,
    pub environment: String,
    pub timestamp: u64,
}

impl Stamp {
    pub fn now(config_digest: String) -> Self {
        let timestamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let environment = format!(
            "hormander {} {}-{} threads={}",
            env!("CARGO_PKG_VERSION"),
            std::env::consts::OS,
            std::env::consts::ARCH,
            rayon::current_num_threads()
        );
        Self { config_digest, environment, timestamp }
    }

    pub fn header(&self) -> String {
        format!("# config_digest={}\n# env={}\n# timestamp={}\n", self.config_digest, self.environment, self.timestamp)
    }
}

/// Drops the leading `#` comment lines.
pub fn strip_header(csv: &str) -> &str {
    let mut rest = csv;
    while rest.starts_with('#') {
        rest = rest.find('\n').map_or("", |i| &rest[i + 1..]);
    }
    rest
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
