//! Run configuration: flat JSON, fully validated before any computation.
//! The shipped schema file (docs/config-schema.json) documents every field.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bands::CutoffSpec;
use crate::disk::DiskSpectrum;
use crate::error::{Error, Result};
use crate::norms::Region;
use crate::revolution::{RevolutionProfile, RevSpectrum, SolverOptions, TableProfile};
use crate::sweep::{Cache, DeltaRule};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Disk {
        #[serde(default)]
        n_min_fraction: f64,
    },
    Revolution {
        profile: ProfileConfig,
        #[serde(default = "default_cone_eps")]
        cone_eps: f64,
        #[serde(default)]
        include_axis: bool,
        #[serde(default)]
        grid_points: Option<usize>,
        #[serde(default = "default_truncation")]
        truncation_factor: f64,
    },
}

fn default_cone_eps() -> f64 {
    0.05
}

fn default_truncation() -> f64 {
    4.0
}

/// Named builtin ("round", "perturbed(eps)") or a sampled table CSV with
/// columns s, a, a', a''.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileConfig {
    Builtin(String),
    Table { csv: PathBuf },
}

impl ProfileConfig {
    pub fn build(&self, base_dir: &Path) -> Result<RevolutionProfile> {
        match self {
            ProfileConfig::Builtin(name) => {
                if name == "round" {
                    return Ok(RevolutionProfile::round());
                }
                if let Some(args) = name
                    .strip_prefix("perturbed(")
                    .and_then(|s| s.strip_suffix(')'))
                {
                    let eps: f64 = args.trim().parse().map_err(|_| {
                        Error::config(format!("bad perturbation strength in {name:?}"))
                    })?;
                    if !(eps.abs() < 0.25) {
                        return Err(Error::config(format!(
                            "perturbation strength {eps} breaks the single-maximum condition"
                        )));
                    }
                    return Ok(RevolutionProfile::perturbed(eps));
                }
                Err(Error::config(format!(
                    "unknown profile {name:?}; expected \"round\", \"perturbed(eps)\", or a table"
                )))
            }
            ProfileConfig::Table { csv } => {
                let path = if csv.is_absolute() {
                    csv.clone()
                } else {
                    base_dir.join(csv)
                };
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    Error::config(format!("cannot read profile table {}: {e}", path.display()))
                })?;
                let mut rows = Vec::new();
                for (i, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                    if cols.len() != 4 {
                        return Err(Error::config(format!(
                            "profile table line {} needs 4 columns (s, a, a', a'')",
                            i + 1
                        )));
                    }
                    let vals: Vec<f64> = cols
                        .iter()
                        .map(|c| {
                            c.parse::<f64>().map_err(|_| {
                                Error::config(format!("bad number {c:?} on line {}", i + 1))
                            })
                        })
                        .collect::<Result<_>>()?;
                    rows.push((vals[0], vals[1], vals[2], vals[3]));
                }
                Ok(RevolutionProfile::from_fn(Arc::new(TableProfile::new(
                    rows,
                )?)))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionConfig {
    DiskAnnulus { r_lo: f64, r_hi: f64 },
    SIntervals { intervals: Vec<(f64, f64)> },
}

impl RegionConfig {
    pub fn build(&self) -> Result<Region> {
        let region = match self {
            RegionConfig::DiskAnnulus { r_lo, r_hi } => Region::DiskAnnulus {
                r_lo: *r_lo,
                r_hi: *r_hi,
            },
            RegionConfig::SIntervals { intervals } => Region::RevolutionIntervals {
                intervals: intervals.clone(),
            },
        };
        region.validate()?;
        Ok(region)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LambdaGridConfig {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    #[serde(default = "default_anchor")]
    pub anchor: f64,
}

fn default_anchor() -> f64 {
    1.137
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaRuleConfig {
    pub exponent: f64,
    #[serde(default = "one")]
    pub coefficient: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffConfig {
    #[serde(default = "one")]
    pub plateau_half_width: f64,
    #[serde(default = "two")]
    pub support_half_width: f64,
}

fn two() -> f64 {
    2.0
}

/// Optional assertion bounds checked by the sweep command.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AssertConfig {
    /// Upper bound on the fitted log√sup / logλ slope.
    pub max_slope: Option<f64>,
    /// Expected band-count slope window (lo, hi).
    pub count_slope_window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceConfig,
    pub region: RegionConfig,
    #[serde(default)]
    pub lambda_grid: Option<LambdaGridConfig>,
    /// Explicit λ list; overrides lambda_grid when present.
    #[serde(default)]
    pub lambda_list: Option<Vec<f64>>,
    #[serde(default)]
    pub delta_rule: Option<DeltaRuleConfig>,
    /// Explicit δ list paired against a single λ (the grid's `lo`·anchor):
    /// the exploratory width-sweep mode. Makes no assertions.
    #[serde(default)]
    pub delta_list: Option<Vec<f64>>,
    #[serde(default)]
    pub cutoff: Option<CutoffConfig>,
    /// Boundary-split exponent offset (0 < alpha << 1).
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_gap_mu_max")]
    pub gap_mu_max: f64,
    #[serde(default = "default_spacing_window")]
    pub spacing_window: (f64, f64),
    /// Cone floor for the zero-asymptotics check (disk lemmas).
    #[serde(default = "default_cone_y")]
    pub cone_y_fraction: f64,
    #[serde(default)]
    pub cache_path: Option<PathBuf>,
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub assert: AssertConfig,
}

fn default_alpha() -> f64 {
    0.1
}

fn default_gap_mu_max() -> f64 {
    0.95
}

fn default_spacing_window() -> (f64, f64) {
    (0.3, 0.9)
}

fn default_cone_y() -> f64 {
    0.3
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(grid) = &self.lambda_grid {
            if !(grid.lo > 0.0 && grid.hi >= grid.lo) {
                return Err(Error::config(format!(
                    "lambda_grid needs 0 < lo <= hi, got [{}, {}]",
                    grid.lo, grid.hi
                )));
            }
            if grid.anchor <= 0.0 {
                return Err(Error::config("lambda_grid.anchor must be positive"));
            }
        }
        if let Some(list) = &self.lambda_list {
            for &l in list {
                if !(l > 0.0) || !l.is_finite() {
                    return Err(Error::config(format!("lambda_list entry {l} invalid")));
                }
            }
        }
        if self.lambda_grid.is_none() && self.lambda_list.is_none() {
            return Err(Error::config("one of lambda_grid or lambda_list is required"));
        }
        if let Some(rule) = &self.delta_rule {
            if rule.coefficient <= 0.0 {
                return Err(Error::config("delta_rule.coefficient must be positive"));
            }
        }
        if let Some(list) = &self.delta_list {
            if list.iter().any(|&d| !(d > 0.0)) {
                return Err(Error::config("delta_list entries must be positive"));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::config(format!(
                "alpha must lie in (0, 0.5), got {}",
                self.alpha
            )));
        }
        if !(self.gap_mu_max > 0.0) {
            return Err(Error::config("gap_mu_max must be positive"));
        }
        if !(self.spacing_window.0 < self.spacing_window.1) {
            return Err(Error::config("spacing_window must be increasing"));
        }
        match &self.surface {
            SurfaceConfig::Disk { n_min_fraction } => {
                if !(0.0..1.0).contains(n_min_fraction) {
                    return Err(Error::config(format!(
                        "n_min_fraction must lie in [0, 1), got {n_min_fraction}"
                    )));
                }
            }
            SurfaceConfig::Revolution {
                cone_eps,
                truncation_factor,
                ..
            } => {
                if !(*cone_eps > 0.0) {
                    return Err(Error::config("cone_eps must be positive"));
                }
                if !(*truncation_factor >= 1.0) {
                    return Err(Error::config("truncation_factor must be >= 1"));
                }
            }
        }
        self.region.build().map(|_| ())
    }

    /// The (λ, δ) levels this config sweeps.
    pub fn levels(&self) -> Result<Vec<(f64, f64)>> {
        let rule = self
            .delta_rule
            .as_ref()
            .map(|r| DeltaRule {
                exponent: r.exponent,
                coefficient: r.coefficient,
            })
            .unwrap_or_default();
        if let Some(deltas) = &self.delta_list {
            // Width sweep at a single level.
            let lambda = match (&self.lambda_list, &self.lambda_grid) {
                (Some(list), _) if !list.is_empty() => list[0],
                (_, Some(grid)) => grid.lo * grid.anchor,
                _ => return Err(Error::config("delta_list needs a lambda")),
            };
            let mut ds = deltas.clone();
            ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
            return Ok(ds.into_iter().map(|d| (lambda, d)).collect());
        }
        let lambdas = match (&self.lambda_list, &self.lambda_grid) {
            (Some(list), _) => {
                let mut ls = list.clone();
                ls.sort_by(|a, b| a.partial_cmp(b).unwrap());
                ls
            }
            (_, Some(grid)) => {
                crate::sweep::log_spaced_lambdas(grid.lo, grid.hi, grid.count, grid.anchor)
            }
            _ => unreachable!("validated"),
        };
        Ok(lambdas.into_iter().map(|l| (l, rule.delta(l))).collect())
    }

    pub fn cutoff(&self) -> CutoffSpec {
        self.cutoff
            .as_ref()
            .map(|c| CutoffSpec {
                plateau_half_width: c.plateau_half_width,
                support_half_width: c.support_half_width,
            })
            .unwrap_or_default()
    }

    /// Resolve the cache path: CLI flag > CAUSTICA_CACHE > config field.
    pub fn resolve_cache(
        &self,
        cli_path: Option<&Path>,
        seedless: bool,
    ) -> Result<Option<Arc<Cache>>> {
        if seedless {
            return Ok(Some(Arc::new(Cache::in_memory())));
        }
        let path = cli_path
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("CAUSTICA_CACHE").map(PathBuf::from))
            .or_else(|| self.cache_path.clone());
        match path {
            Some(p) => Ok(Some(Arc::new(Cache::open(&p)?))),
            None => Ok(None),
        }
    }
}

/// The two spectrum sources a config can denote.
pub enum BuiltSurface {
    Disk(DiskSpectrum),
    Revolution(RevSpectrum),
}

impl SurfaceConfig {
    pub fn build(&self, base_dir: &Path, cache: Option<Arc<Cache>>) -> Result<BuiltSurface> {
        match self {
            SurfaceConfig::Disk { n_min_fraction } => Ok(BuiltSurface::Disk(DiskSpectrum {
                n_min_fraction: *n_min_fraction,
                cache,
            })),
            SurfaceConfig::Revolution {
                profile,
                cone_eps,
                include_axis,
                grid_points,
                truncation_factor,
            } => {
                let profile = profile.build(base_dir)?;
                let report = crate::revolution::validate_profile(&profile, 10_000);
                if !report.passed {
                    let failed: Vec<&str> = report
                        .clauses
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.name.as_str())
                        .collect();
                    return Err(Error::config(format!(
                        "profile is not a simple surface of revolution (failed: {})",
                        failed.join(", ")
                    )));
                }
                Ok(BuiltSurface::Revolution(RevSpectrum {
                    profile,
                    cone_eps: *cone_eps,
                    include_axis: *include_axis,
                    opts: SolverOptions {
                        grid_points: *grid_points,
                        truncation_factor: *truncation_factor,
                    },
                    cache,
                }))
            }
        }
    }
}
