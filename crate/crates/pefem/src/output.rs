//! CSV, markdown and log-log renderings of a [`ConvergenceReport`].

use pefem_core::analyze::ConvergenceReport;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const CSV_HEADER: &str = "level,h,delta_h,dofs,l2_error,h1_error,l2_rate_pairwise,h1_rate_pairwise";

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("report has no levels")]
    EmptyReport,
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn non_empty(report: &ConvergenceReport) -> Result<(), OutputError> {
    if report.levels.is_empty() {
        Err(OutputError::EmptyReport)
    } else {
        Ok(())
    }
}

/// `log(e_{i−1} / e_i) / log(h_{i−1} / h_i)`, empty for the first level.
fn pairwise(report: &ConvergenceReport, i: usize, h1: bool) -> String {
    if i == 0 {
        return String::new();
    }
    let (a, b) = (&report.levels[i - 1], &report.levels[i]);
    let (ea, eb) = if h1 { (a.h1_error, b.h1_error) } else { (a.l2_error, b.l2_error) };
    format!("{:.4}", (ea / eb).ln() / (a.h / b.h).ln())
}

pub fn csv(report: &ConvergenceReport) -> Result<String, OutputError> {
    non_empty(report)?;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (i, l) in report.levels.iter().enumerate() {
        writeln!(
            out,
            "{},{:.6e},{:.6e},{},{:.6e},{:.6e},{},{}",
            l.level,
            l.h,
            l.delta_h,
            l.dofs,
            l.l2_error,
            l.h1_error,
            pairwise(report, i, false),
            pairwise(report, i, true)
        )
        .unwrap();
    }
    Ok(out)
}

/// Table with `h`, both errors and a closing `Rate` row of least-squares
/// slopes over all levels, followed by the gate verdict.
pub fn markdown(report: &ConvergenceReport) -> Result<String, OutputError> {
    non_empty(report)?;
    let plan = &report.plan;
    let mut out = String::new();
    writeln!(out, "### {} / {} / {}, k = {}\n", plan.domain, plan.method, plan.preset, plan.degree).unwrap();
    writeln!(out, "| h | L2 error | H1 error |").unwrap();
    writeln!(out, "|---|---|---|").unwrap();
    for l in &report.levels {
        writeln!(out, "| {:.6} | {:.5e} | {:.5e} |", l.h, l.l2_error, l.h1_error).unwrap();
    }
    match report.fits() {
        Ok((l2, h1)) => writeln!(out, "| Rate | {:.4} | {:.4} |", l2.slope, h1.slope).unwrap(),
        Err(_) => writeln!(out, "| Rate | - | - |").unwrap(),
    }
    let gate = report.gate();
    writeln!(out, "\n{}: {}", if gate.passed { "PASS" } else { "FAIL" }, gate.detail).unwrap();
    Ok(out)
}

/// `h error` pairs for the L² error, one per line.
pub fn loglog(report: &ConvergenceReport) -> Result<String, OutputError> {
    non_empty(report)?;
    let mut out = String::new();
    for l in &report.levels {
        writeln!(out, "{:.6e} {:.6e}", l.h, l.l2_error).unwrap();
    }
    Ok(out)
}

/// Paths written by [`emit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub markdown: PathBuf,
    pub loglog: PathBuf,
}

/// Writes `<stem>.csv`, `<stem>.md` and `<stem>.dat` into `dir`, creating it
/// if needed. Nothing is written for an empty report.
pub fn emit(report: &ConvergenceReport, dir: &Path, stem: &str) -> Result<Artifacts, OutputError> {
    let (c, m, d) = (csv(report)?, markdown(report)?, loglog(report)?);
    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
        move |source| OutputError::Io { path: path.to_path_buf(), source }
    }
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let artifacts = Artifacts {
        csv: dir.join(format!("{stem}.csv")),
        markdown: dir.join(format!("{stem}.md")),
        loglog: dir.join(format!("{stem}.dat")),
    };
    for (path, text) in [(&artifacts.csv, c), (&artifacts.markdown, m), (&artifacts.loglog, d)] {
        std::fs::write(path, text).map_err(io(path))?;
    }
    Ok(artifacts)
}
