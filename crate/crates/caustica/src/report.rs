//! Artifact writers: sweep CSV/JSON, fit reports, and a gnuplot script that
//! reproduces the log-log figure without any graphics dependency.

use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::sweep::{ExponentFit, SweepTable};

/// Fit summary written next to the sweep table.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub sup_fit: ExponentFit,
    pub count_fit: Option<ExponentFit>,
    pub asserted_max_slope: Option<f64>,
    pub slope_within_bound: Option<bool>,
    pub rows: usize,
    pub failures: usize,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Gnuplot script with inline data: points of the sweep plus the fitted
/// power law.
pub fn gnuplot_script(table: &SweepTable, fit: &ExponentFit, title: &str) -> String {
    let mut s = String::new();
    s.push_str("set logscale xy\n");
    s.push_str("set xlabel 'lambda'\n");
    s.push_str("set ylabel 'sqrt sup'\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str(&format!(
        "m = {:.12e}\nb = {:.12e}\nf(x) = exp(b)*x**m\n",
        fit.slope, fit.intercept
    ));
    s.push_str(&format!(
        "plot '-' using 1:2 with points pt 7 title 'measured', f(x) with lines title 'fit slope {:.4}'\n",
        fit.slope
    ));
    for r in &table.rows {
        s.push_str(&format!("{:.12e} {:.12e}\n", r.lambda, r.sup_sqrt));
    }
    s.push_str("e\n");
    s
}
