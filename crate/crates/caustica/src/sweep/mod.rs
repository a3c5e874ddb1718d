//! Sweep orchestration: evaluate bands at a grid of (λ, δ) levels, measure
//! region sups and per-band diagnostics, fit growth exponents, and keep the
//! persistent zero/eigenvalue cache.

mod cache;

use rayon::prelude::*;
use serde::Serialize;

use crate::bands::{check_caustic_spacing, check_gap, BandEvaluator, CutoffSpec, SpacingRegion};
use crate::error::{Error, Result};
use crate::norms::{sup_over_region, Region};

pub use cache::Cache;

/// δ = coefficient·λ^exponent. The default is the theorem width λ^{-1/3};
/// overriding the rule (or listing explicit widths in the config) gives the
/// exploratory δ-sweep mode, which asserts nothing.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaRule {
    pub exponent: f64,
    pub coefficient: f64,
}

impl Default for DeltaRule {
    fn default() -> Self {
        DeltaRule {
            exponent: -1.0 / 3.0,
            coefficient: 1.0,
        }
    }
}

impl DeltaRule {
    pub fn delta(&self, lambda: f64) -> f64 {
        self.coefficient * lambda.powf(self.exponent)
    }
}

/// Something that can produce an evaluable band at a level.
pub trait BandProvider: Sync {
    fn build(
        &self,
        lambda: f64,
        delta: f64,
        cutoff: &CutoffSpec,
    ) -> Result<Box<dyn BandEvaluator + Send>>;
}

/// Per-level measurement settings.
#[derive(Debug, Clone, Serialize)]
pub struct SweepOptions {
    pub cutoff: CutoffSpec,
    /// Cone for the per-row gap check: modes with |n| <= mu_max·λ_ν.
    pub gap_mu_max: f64,
    /// μ-window for the per-row interior caustic-spacing figure.
    pub spacing_window: (f64, f64),
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            cutoff: CutoffSpec::default(),
            gap_mu_max: 0.95,
            spacing_window: (0.3, 0.9),
        }
    }
}

/// One sweep row. Wall time is carried for logs but excluded from the
/// deterministic serializations (CSV): two runs of one config must produce
/// bit-identical tables.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub delta: f64,
    pub sup_sqrt: f64,
    pub argmax: f64,
    /// Band cardinality counted with the ±n multiplicity.
    pub band_count: usize,
    /// Stored (n, k) pairs.
    pub stored_modes: usize,
    pub min_caustic_gap: Option<f64>,
    /// min gap normalized by 1/λ over the spacing window.
    pub spacing_normalized: Option<f64>,
    pub gap_injective: bool,
    #[serde(skip_serializing)]
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// (λ, error message) for rows that failed.
    pub failures: Vec<(f64, String)>,
}

impl SweepTable {
    /// CSV with a header row; deterministic (no timings).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "lambda,delta,sup_sqrt,argmax,band_count,stored_modes,min_caustic_gap,spacing_normalized,gap_injective\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{},{},{},{},{}\n",
                r.lambda,
                r.delta,
                r.sup_sqrt,
                r.argmax,
                r.band_count,
                r.stored_modes,
                r.min_caustic_gap
                    .map_or(String::new(), |g| format!("{g:.17e}")),
                r.spacing_normalized
                    .map_or(String::new(), |g| format!("{g:.17e}")),
                r.gap_injective,
            ));
        }
        out
    }
}

/// Log-spaced, off-lattice λ grid: anchor·lo·(hi/lo)^{i/(count-1)}. The
/// anchor multiplier keeps levels away from eigenvalues so sup measurements
/// do not straddle membership flips.
pub fn log_spaced_lambdas(lo: f64, hi: f64, count: usize, anchor: f64) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    if count == 1 {
        return vec![lo * anchor];
    }
    let ratio = hi / lo;
    (0..count)
        .map(|i| anchor * lo * ratio.powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Run one row: band, sup, and per-band checks.
fn run_row(
    provider: &dyn BandProvider,
    lambda: f64,
    delta: f64,
    region: &Region,
    opts: &SweepOptions,
) -> Result<SweepRow> {
    let start = std::time::Instant::now();
    let eval = provider.build(lambda, delta, &opts.cutoff)?;
    let result = sup_over_region(eval.as_ref(), region);
    let band = eval.band();
    let gap = check_gap(band, opts.gap_mu_max);
    let spacing = check_caustic_spacing(
        band,
        SpacingRegion::Interior {
            mu_lo: opts.spacing_window.0,
            mu_hi: opts.spacing_window.1,
        },
    );
    Ok(SweepRow {
        lambda,
        delta,
        sup_sqrt: result.sup_value.sqrt(),
        argmax: result.argmax,
        band_count: band.counted_size(),
        stored_modes: band.len(),
        min_caustic_gap: spacing.min_gap,
        spacing_normalized: spacing.normalized_min_gap,
        gap_injective: gap.injective,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Sweep the given (λ, δ) levels concurrently; results are merged in level
/// order so the table is independent of the worker count. Individual row
/// failures are recorded and the sweep continues, unless more than 20% of
/// the rows fail.
pub fn run_sweep(
    provider: &dyn BandProvider,
    levels: &[(f64, f64)],
    region: &Region,
    opts: &SweepOptions,
) -> Result<SweepTable> {
    region.validate()?;
    for w in levels.windows(2) {
        // λ strictly increases, except in width-sweep mode (fixed λ) where
        // δ must increase instead.
        let ordered = w[1].0 > w[0].0 || (w[1].0 == w[0].0 && w[1].1 > w[0].1);
        if !ordered {
            return Err(Error::config(
                "sweep levels must increase strictly in (lambda, delta)",
            ));
        }
    }
    let results: Vec<(f64, Result<SweepRow>)> = levels
        .par_iter()
        .map(|&(lambda, delta)| (lambda, run_row(provider, lambda, delta, region, opts)))
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (lambda, res) in results {
        match res {
            Ok(row) => rows.push(row),
            Err(e) => failures.push((lambda, e.to_string())),
        }
    }
    if !levels.is_empty() && failures.len() * 5 > levels.len() {
        return Err(Error::numerical(format!(
            "sweep aborted: {}/{} rows failed; first failure at λ={}: {}",
            failures.len(),
            levels.len(),
            failures[0].0,
            failures[0].1
        )));
    }
    Ok(SweepTable { rows, failures })
}

/// Ordinary least squares of log y against log x.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residual standard error of log y.
    pub residual_se: f64,
    pub samples: usize,
}

/// Fit log y = slope·log x + intercept; needs at least `min_samples` points
/// (8 for any asserted fit).
pub fn fit_loglog(points: &[(f64, f64)], min_samples: usize) -> Result<ExponentFit> {
    let filtered: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .collect();
    if filtered.len() < min_samples.max(3) {
        return Err(Error::InsufficientData(format!(
            "log-log fit needs >= {} positive samples, got {}",
            min_samples.max(3),
            filtered.len()
        )));
    }
    let n = filtered.len() as f64;
    let logs: Vec<(f64, f64)> = filtered.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "log-log fit: degenerate abscissa".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs
        .iter()
        .map(|&(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let dof = (logs.len() - 2).max(1) as f64;
    Ok(ExponentFit {
        slope,
        intercept,
        residual_se: (ss_res / dof).sqrt(),
        samples: filtered.len(),
    })
}

/// Fit of log √sup against log λ over a sweep table.
pub fn fit_exponent(table: &SweepTable) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.lambda, r.sup_sqrt)).collect();
    fit_loglog(&pts, 8)
}

/// Fit of log band_count against log λ (the counting exponent).
pub fn fit_band_count(table: &SweepTable) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = table
        .rows
        .iter()
        .map(|r| (r.lambda, r.band_count as f64))
        .collect();
    fit_loglog(&pts, 8)
}
