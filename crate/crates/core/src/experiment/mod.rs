//! Config-driven verification runs: suites, CSV reports and SVG plots.
//!
//! Output layout under `output_dir`:
//!
//! ```text
//! config.toml          normalized config
//! <suite>.csv          one file per suite
//! summary.csv          record counts per suite
//! plots/<name>.svg
//! ```

pub mod config;
pub mod report;
pub mod suites;
pub mod svg;

use std::path::PathBuf;

pub use config::{ExperimentConfig, Suite, Tolerances, validate_config};
pub use report::{Provenance, Record, Stamp, SuiteReport, strip_header, write_atomic};

use crate::error::Result;

#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<SuiteReport>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(SuiteReport::all_pass)
    }
}

/// Runs the configured suites in order. Each suite's CSV and plots are
/// written as soon as the suite finishes.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    // Dense factorizations run single-threaded so results do not depend on the
    // thread count; parallelism comes from independent cases.
    faer::set_global_parallelism(faer::Par::Seq);
    let out = &cfg.output_dir;
    std::fs::create_dir_all(out.join("plots"))?;
    let stamp = Stamp::now(cfg.digest());
    let mut files = Vec::new();
    let path = out.join("config.toml");
    write_atomic(&path, &cfg.normalized())?;
    files.push(path);

    let mut seen = Vec::new();
    let mut reports = Vec::new();
    for suite in &cfg.suites {
        if seen.contains(suite) {
            continue;
        }
        seen.push(*suite);
        let output = suites::run_suite(*suite, cfg);
        let rep = SuiteReport { suite: *suite, records: output.records };
        let path = out.join(format!("{suite}.csv"));
        write_atomic(&path, &rep.csv(&stamp))?;
        files.push(path);
        for plot in output.plots {
            let path = out.join("plots").join(format!("{}.svg", plot.name));
            write_atomic(&path, &plot.svg)?;
            files.push(path);
        }
        reports.push(rep);
    }
    let mut summary = format!("{}suite,records,passed,failed\n", stamp.header());
    for r in &reports {
        summary.push_str(&format!("{},{},{},{}\n", r.suite, r.records.len(), r.passed(), r.records.len() - r.passed()));
    }
    let path = out.join("summary.csv");
    write_atomic(&path, &summary)?;
    files.push(path);
    Ok(RunOutcome { reports, files })
}
