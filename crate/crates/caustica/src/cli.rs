//! Command implementations behind the `caustica` binary. Each returns the
//! process exit code: 0 success, 1 check failure, 2 config error.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bands::{
    check_caustic_spacing, check_gap, check_zero_asymptotics, BandEvaluator, CutoffSpec,
    SpacingRegion,
};
use crate::config::{BuiltSurface, RunConfig};
use crate::disk::disk_band_spectrum;
use crate::error::{Error, Result};
use crate::norms::{
    abc_decomposition, envelope_ratio, region_grid, shadow_decay_max, sup_over_region,
};
use crate::report::{gnuplot_script, write_json, write_text, FitReport};
use crate::revolution::{genericity_check, rev_band_spectrum};
use crate::specfun::{
    airy_ai, airy_zero, bessel_j, bessel_j_prime, bessel_zero, olver_p0, AiryZeroTable,
};
use crate::sweep::{fit_band_count, fit_exponent, fit_loglog, run_sweep, BandProvider, SweepOptions};
use crate::tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Shared CLI overrides.
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub cache: Option<PathBuf>,
    pub seedless: bool,
}

fn config_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

struct DiskProvider(crate::disk::DiskSpectrum);

impl BandProvider for DiskProvider {
    fn build(
        &self,
        lambda: f64,
        delta: f64,
        cutoff: &CutoffSpec,
    ) -> Result<Box<dyn BandEvaluator + Send>> {
        Ok(Box::new(disk_band_spectrum(&self.0, lambda, delta, cutoff)?))
    }
}

struct RevProvider(crate::revolution::RevSpectrum);

impl BandProvider for RevProvider {
    fn build(
        &self,
        lambda: f64,
        delta: f64,
        cutoff: &CutoffSpec,
    ) -> Result<Box<dyn BandEvaluator + Send>> {
        Ok(Box::new(rev_band_spectrum(&self.0, lambda, delta, cutoff)?))
    }
}

fn built_provider(surface: BuiltSurface) -> Box<dyn BandProvider> {
    match surface {
        BuiltSurface::Disk(s) => Box::new(DiskProvider(s)),
        BuiltSurface::Revolution(s) => Box::new(RevProvider(s)),
    }
}

/// One line of the specfun verification table.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn lcg_stream(seed: u64) -> impl FnMut() -> f64 {
    let mut state = seed;
    move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// The specfun invariant suite. `perturb_ai` shifts every Airy evaluation
/// inside the suite; the fault-injection test uses it to prove the exit
/// code flips (set via CAUSTICA_TEST_PERTURB_AI).
pub fn specfun_suite(perturb_ai: f64) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let ai = |x: f64| airy_ai(x).map(|v| v + perturb_ai);

    // Pinned first zeros.
    let j01 = bessel_zero(0, 1).map(|z| z.value).unwrap_or(f64::NAN);
    lines.push(CheckLine {
        name: "j0_first_zero".into(),
        passed: (j01 - 2.40482555769577277).abs() <= 1e-10,
        detail: format!("j_{{0,1}} = {j01:.15}"),
    });
    let a1 = airy_zero(1).unwrap_or(f64::NAN);
    lines.push(CheckLine {
        name: "airy_first_zero".into(),
        passed: (a1 - 2.33810741045976704).abs() <= 1e-10,
        detail: format!("a_1 = {a1:.15}"),
    });

    // Airy ODE residual, 200 deterministic random points in [-20, 5],
    // five-point central second derivative at step 1e-3.
    let mut rand = lcg_stream(0x5eed5eed5eed5eed);
    let h = 1e-3;
    let mut worst_ode = 0.0f64;
    let mut ode_ok = true;
    for _ in 0..200 {
        let x = -20.0 + 25.0 * rand();
        let d2 = (|| -> Result<f64> {
            Ok((-ai(x - 2.0 * h)? + 16.0 * ai(x - h)? - 30.0 * ai(x)? + 16.0 * ai(x + h)?
                - ai(x + 2.0 * h)?)
                / (12.0 * h * h))
        })();
        match d2 {
            Ok(d2) => {
                let resid = (d2 - x * ai(x).unwrap()).abs();
                worst_ode = worst_ode.max(resid);
                if resid > 1e-8 {
                    ode_ok = false;
                }
            }
            Err(_) => ode_ok = false,
        }
    }
    lines.push(CheckLine {
        name: "airy_ode_residual".into(),
        passed: ode_ok,
        detail: format!("max |Ai'' - x·Ai| = {worst_ode:.3e} (<= 1e-8)"),
    });

    // Airy zero residuals |Ai(-a_k) + perturbation| <= 1e-12 on a sample.
    let mut zero_ok = true;
    let mut worst_zero = 0.0f64;
    for k in [1u32, 2, 5, 17, 100, 1000] {
        let r = airy_zero(k)
            .and_then(|a| ai(-a))
            .map(f64::abs)
            .unwrap_or(f64::NAN);
        worst_zero = worst_zero.max(r);
        if !(r <= 1e-12) {
            zero_ok = false;
        }
    }
    lines.push(CheckLine {
        name: "airy_zero_residuals".into(),
        passed: zero_ok,
        detail: format!("max |Ai(-a_k)| = {worst_zero:.3e} (<= 1e-12)"),
    });

    // Bessel three-term recurrence, 500 deterministic random (n, x).
    let mut rand = lcg_stream(0xbe55e1be55e1be55);
    let mut rec_ok = true;
    let mut worst_rec = 0.0f64;
    for _ in 0..500 {
        let n = 1 + (rand() * 999.0) as u32;
        let x = 0.5 + rand() * 1999.5;
        let jm = bessel_j(n - 1, x).unwrap();
        let j = bessel_j(n, x).unwrap();
        let jp = bessel_j(n + 1, x).unwrap();
        let resid = (jm + jp - 2.0 * n as f64 / x * j).abs();
        // Relative to the local amplitude, not to J_n itself (which may sit
        // near a zero).
        let scale = jm.abs().max(j.abs()).max(jp.abs()).max(1e-300);
        let rel = resid / scale;
        worst_rec = worst_rec.max(rel);
        if rel > 1e-9 {
            rec_ok = false;
        }
    }
    lines.push(CheckLine {
        name: "bessel_recurrence".into(),
        passed: rec_ok,
        detail: format!("max relative residual = {worst_rec:.3e} (<= 1e-9)"),
    });

    // Bessel zero residuals across regimes.
    let mut bzero_ok = true;
    let mut worst_bzero = 0.0f64;
    for (n, k) in [(0u32, 7u32), (3, 2), (25, 4), (200, 1), (1000, 12)] {
        let r = bessel_zero(n, k)
            .and_then(|z| bessel_j(n, z.value))
            .map(f64::abs)
            .unwrap_or(f64::NAN);
        worst_bzero = worst_bzero.max(r);
        if !(r <= 1e-12) {
            bzero_ok = false;
        }
    }
    lines.push(CheckLine {
        name: "bessel_zero_residuals".into(),
        passed: bzero_ok,
        detail: format!("max |J_n(λ_{{k,n}})| = {worst_bzero:.3e} (<= 1e-12)"),
    });

    // Olver consistency: slope of log max_k|λ_{k,n} - n·p0(a_k/n^{2/3})|
    // against log n.
    let airy_table = AiryZeroTable::new(500).expect("airy table");
    let mut pts = Vec::new();
    for n in [50u32, 100, 200, 400, 800] {
        let nf = n as f64;
        let mut worst = 0.0f64;
        for k in 1..=airy_table.count() as u32 {
            let a_k = airy_table.get(k).unwrap();
            let t = a_k / nf.powf(2.0 / 3.0);
            if t > 2.0 {
                break;
            }
            let lam = bessel_zero(n, k).map(|z| z.value).unwrap_or(f64::NAN);
            let pred = nf * olver_p0(t).unwrap();
            worst = worst.max((lam - pred).abs());
        }
        pts.push((nf, worst));
    }
    let olver = fit_loglog(&pts, 5);
    let (olver_ok, olver_detail) = match olver {
        Ok(fit) => (
            fit.slope <= -0.9,
            format!("olver residual slope = {:.4} (<= -0.9)", fit.slope),
        ),
        Err(e) => (false, format!("fit failed: {e}")),
    };
    lines.push(CheckLine {
        name: "olver_residual_slope".into(),
        passed: olver_ok,
        detail: olver_detail,
    });

    // p0 sanity: value at zero and monotonicity.
    let p0_ok = (olver_p0(0.0).unwrap() - 1.0).abs() <= 1e-15 && {
        let mut prev = 1.0;
        let mut ok = true;
        for i in 1..200 {
            let v = olver_p0(0.05 * i as f64).unwrap();
            if v < prev - 1e-14 {
                ok = false;
            }
            prev = v;
        }
        ok
    };
    lines.push(CheckLine {
        name: "olver_p0_monotone".into(),
        passed: p0_ok,
        detail: "p0(0) = 1, nondecreasing on [0, 10]".into(),
    });

    // J' consistency against the recurrence form at mixed orders.
    let mut jp_ok = true;
    for (n, x) in [(5u32, 7.0), (80, 95.5), (500, 510.0)] {
        let direct = bessel_j_prime(n, x).unwrap();
        let via = 0.5 * (bessel_j(n - 1, x).unwrap() - bessel_j(n + 1, x).unwrap());
        if (direct - via).abs() > 1e-12 {
            jp_ok = false;
        }
    }
    lines.push(CheckLine {
        name: "bessel_prime_consistency".into(),
        passed: jp_ok,
        detail: "J' matches (J_{n-1} - J_{n+1})/2".into(),
    });

    lines
}

/// `caustica specfun-check`
pub fn cmd_specfun_check(json: bool) -> i32 {
    let perturb = std::env::var("CAUSTICA_TEST_PERTURB_AI")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .unwrap_or(0.0);
    let lines = specfun_suite(perturb);
    if json {
        println!("{}", serde_json::to_string_pretty(&lines).unwrap());
    } else {
        for l in &lines {
            println!(
                "{:<26} {}  {}",
                l.name,
                if l.passed { "PASS" } else { "FAIL" },
                l.detail
            );
        }
    }
    if lines.iter().all(|l| l.passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn apply_overrides(config: &mut RunConfig, overrides: &CliOverrides) {
    if let Some(out) = &overrides.out {
        config.out_dir = out.clone();
    }
    if let Some(w) = overrides.workers {
        config.workers = w;
    }
}

/// `caustica sweep --config ...`
pub fn cmd_sweep(config_path: &Path, overrides: &CliOverrides) -> i32 {
    let mut config = match RunConfig::from_file(config_path) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    apply_overrides(&mut config, overrides);
    match sweep_inner(&config, config_path, overrides) {
        Ok(ok) => {
            if ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e @ Error::Config(_)) => config_error(&e),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

fn sweep_inner(config: &RunConfig, config_path: &Path, overrides: &CliOverrides) -> Result<bool> {
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    let cache = config.resolve_cache(overrides.cache.as_deref(), overrides.seedless)?;
    let surface = config.surface.build(base_dir, cache.clone())?;
    let provider = built_provider(surface);
    let region = config.region.build()?;
    let levels = config.levels()?;
    let opts = SweepOptions {
        cutoff: config.cutoff(),
        gap_mu_max: config.gap_mu_max,
        spacing_window: config.spacing_window,
    };

    let table = run_sweep(provider.as_ref(), &levels, &region, &opts)?;
    let sup_fit = fit_exponent(&table);
    let count_fit = fit_band_count(&table).ok();

    let out = &config.out_dir;
    std::fs::create_dir_all(out)?;
    write_text(&out.join("sweep.csv"), &table.to_csv())?;
    write_json(&out.join("sweep.json"), &table)?;

    let mut all_ok = table.failures.is_empty();
    for row in &table.rows {
        if !row.gap_injective {
            eprintln!("gap check failed at λ = {}", row.lambda);
            all_ok = false;
        }
    }
    match &sup_fit {
        Ok(fit) => {
            println!(
                "sup exponent: slope = {:.4} over {} levels (residual se {:.3e})",
                fit.slope, fit.samples, fit.residual_se
            );
            if let Some(count) = &count_fit {
                println!("band-count exponent: slope = {:.4}", count.slope);
            }
            let slope_ok = config.assert.max_slope.map(|b| fit.slope <= b);
            if let Some(bound) = config.assert.max_slope {
                let ok = fit.slope <= bound;
                println!(
                    "slope bound: {:.4} <= {:.4}: {}",
                    fit.slope,
                    bound,
                    if ok { "PASS" } else { "FAIL" }
                );
                all_ok &= ok;
            }
            if let Some((lo, hi)) = config.assert.count_slope_window {
                let ok = count_fit
                    .as_ref()
                    .map(|c| c.slope >= lo && c.slope <= hi)
                    .unwrap_or(false);
                println!(
                    "count slope window [{lo:.3}, {hi:.3}]: {}",
                    if ok { "PASS" } else { "FAIL" }
                );
                all_ok &= ok;
            }
            write_json(
                &out.join("fit.json"),
                &FitReport {
                    sup_fit: *fit,
                    count_fit,
                    asserted_max_slope: config.assert.max_slope,
                    slope_within_bound: slope_ok,
                    rows: table.rows.len(),
                    failures: table.failures.len(),
                },
            )?;
            write_text(
                &out.join("plot.gp"),
                &gnuplot_script(&table, fit, "projector sup growth"),
            )?;
        }
        Err(e) => {
            eprintln!("fit unavailable: {e}");
            if config.assert.max_slope.is_some() {
                all_ok = false;
            }
        }
    }
    for (lambda, msg) in &table.failures {
        eprintln!("row λ = {lambda} failed: {msg}");
    }
    if let Some(cache) = &cache {
        eprintln!(
            "cache: {} hits, {} misses",
            cache.hit_count(),
            cache.miss_count()
        );
    }
    Ok(all_ok)
}

/// JSON verdicts of a single-λ lemma run.
#[derive(Debug, Serialize)]
pub struct LemmaReport {
    pub lambda: f64,
    pub delta: f64,
    pub surface: String,
    pub band_count: usize,
    pub stored_modes: usize,
    /// Which μ convention the caustic figures use.
    pub mu_convention: &'static str,
    pub gap: serde_json::Value,
    pub gap_pass: bool,
    pub interior_spacing: serde_json::Value,
    pub interior_spacing_pass: bool,
    pub boundary_spacing: Option<serde_json::Value>,
    pub boundary_spacing_pass: Option<bool>,
    pub zero_asymptotics: Option<serde_json::Value>,
    pub zero_asymptotics_pass: Option<bool>,
    pub zero_asymptotics_note: Option<String>,
    pub envelope: serde_json::Value,
    pub envelope_pass: bool,
    pub shadow_leak: f64,
    pub shadow_pass: bool,
    pub abc: Vec<serde_json::Value>,
    pub abc_pass: Option<bool>,
    pub sup: f64,
    pub argmax: f64,
}

/// `caustica lemmas --config ... --lambda X`
pub fn cmd_lemmas(config_path: &Path, lambda: f64, overrides: &CliOverrides) -> i32 {
    let mut config = match RunConfig::from_file(config_path) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    if !(lambda > 0.0) || !lambda.is_finite() {
        return config_error(&Error::config(format!("lambda must be positive, got {lambda}")));
    }
    apply_overrides(&mut config, overrides);
    match lemmas_inner(&config, config_path, lambda, overrides) {
        Ok(ok) => {
            if ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e @ Error::Config(_)) => config_error(&e),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

fn lemmas_inner(
    config: &RunConfig,
    config_path: &Path,
    lambda: f64,
    overrides: &CliOverrides,
) -> Result<bool> {
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    let cache = config.resolve_cache(overrides.cache.as_deref(), overrides.seedless)?;
    let surface = config.surface.build(base_dir, cache)?;
    let region = config.region.build()?;
    let delta = config
        .delta_rule
        .as_ref()
        .map(|r| r.coefficient * lambda.powf(r.exponent))
        .unwrap_or_else(|| lambda.powf(-1.0 / 3.0));
    let cutoff = config.cutoff();

    let is_disk = matches!(surface, BuiltSurface::Disk(_));
    let (eval, disk_band): (Box<dyn BandEvaluator + Send>, Option<crate::disk::DiskBand>) =
        match surface {
            BuiltSurface::Disk(s) => {
                let db = disk_band_spectrum(&s, lambda, delta, &cutoff)?;
                (Box::new(db.clone()), Some(db))
            }
            BuiltSurface::Revolution(s) => {
                (Box::new(rev_band_spectrum(&s, lambda, delta, &cutoff)?), None)
            }
        };
    let band = eval.band();

    let gap = check_gap(band, config.gap_mu_max);
    let gap_pass = gap.injective;

    let interior = check_caustic_spacing(
        band,
        SpacingRegion::Interior {
            mu_lo: config.spacing_window.0,
            mu_hi: config.spacing_window.1,
        },
    );
    let interior_pass = interior.trivial_pass
        || interior.normalized_min_gap.unwrap_or(0.0) >= 0.5 * tolerances::INTERIOR_SPACING_C;

    let (boundary, boundary_pass) = if is_disk {
        let eps = lambda.powf(-1.0 / 3.0);
        let report = check_caustic_spacing(band, SpacingRegion::Boundary { eps });
        let pass = report.trivial_pass
            || report.normalized_min_gap.unwrap_or(0.0) >= 0.5 * tolerances::BOUNDARY_SPACING_C;
        (Some(report), Some(pass))
    } else {
        (None, None)
    };

    let (zero_asym, zero_pass, zero_note) = if let Some(db) = &disk_band {
        let k_max = db.band.modes.iter().map(|m| m.nu.k).max().unwrap_or(1);
        let airy = AiryZeroTable::new(k_max + 1)?;
        let report = check_zero_asymptotics(&db.band, &airy, config.cone_y_fraction)?;
        let pass = (report.inspected == 0
            || report.max_residual * report.n_min as f64 <= tolerances::OLVER_RESIDUAL_C)
            && report.max_pair_ratio <= tolerances::ZERO_PAIR_RATIO_C;
        (Some(report), Some(pass), None)
    } else {
        (
            None,
            None,
            Some("zero asymptotics apply to disk bands only; reported unsupported".to_string()),
        )
    };

    let grid = region_grid(eval.as_ref(), &region);
    let envelope = envelope_ratio(eval.as_ref(), &grid, 0.05);
    let envelope_pass = envelope.max_ratio <= 2.0 * tolerances::ENVELOPE_RATIO_CAL
        && envelope.far_zone_max_abs <= tolerances::FAR_ZONE_ABS;
    let shadow = shadow_decay_max(eval.as_ref(), &region, 0.05);
    let shadow_pass = shadow <= tolerances::SHADOW_LEAK;

    let (abc_reports, abc_pass) = if let Some(db) = &disk_band {
        let mut reports = Vec::new();
        let mut pass = true;
        let l89 = lambda.powf(8.0 / 9.0);
        let l23a = lambda.powf(2.0 / 3.0 + config.alpha);
        let split = lambda.powf(-2.0 / 3.0 + config.alpha);
        for r in [1.0 - lambda.powf(-1.0 / 3.0), 1.0 - split, 1.0] {
            let report = abc_decomposition(db, r, config.alpha)?;
            if report.total > 0.0 {
                pass &= report.sum_a <= tolerances::ABC_A_FRACTION * report.total;
            }
            pass &= report.sum_c <= tolerances::ABC_C_OVER_L89 * l89;
            let eta = 1.0 - r;
            if eta >= split {
                pass &= report.sum_b <= tolerances::ABC_B_OVER_L89 * l89;
            } else {
                pass &= report.sum_b <= tolerances::ABC_B_OVER_L23A * l23a;
            }
            reports.push(serde_json::to_value(&report)?);
        }
        (reports, Some(pass))
    } else {
        (Vec::new(), None)
    };

    let sup = sup_over_region(eval.as_ref(), &region);

    let report = LemmaReport {
        lambda,
        delta,
        surface: if is_disk { "disk".into() } else { "revolution".into() },
        band_count: band.counted_size(),
        stored_modes: band.len(),
        mu_convention: "per-mode: mu = |n|/lambda_nu",
        gap: serde_json::to_value(&gap)?,
        gap_pass,
        interior_spacing: serde_json::to_value(&interior)?,
        interior_spacing_pass: interior_pass,
        boundary_spacing: boundary.map(|b| serde_json::to_value(&b)).transpose()?,
        boundary_spacing_pass: boundary_pass,
        zero_asymptotics: zero_asym.map(|z| serde_json::to_value(&z)).transpose()?,
        zero_asymptotics_pass: zero_pass,
        zero_asymptotics_note: zero_note,
        envelope: serde_json::to_value(&envelope)?,
        envelope_pass,
        shadow_leak: shadow,
        shadow_pass,
        abc: abc_reports,
        abc_pass,
        sup: sup.sup_value,
        argmax: sup.argmax,
    };

    std::fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join(format!("lemmas_{lambda}.json"));
    write_json(&path, &report)?;

    let all = gap_pass
        && interior_pass
        && boundary_pass.unwrap_or(true)
        && zero_pass.unwrap_or(true)
        && envelope_pass
        && shadow_pass
        && abc_pass.unwrap_or(true);
    for (name, ok) in [
        ("gap", gap_pass),
        ("interior_spacing", interior_pass),
        ("boundary_spacing", boundary_pass.unwrap_or(true)),
        ("zero_asymptotics", zero_pass.unwrap_or(true)),
        ("envelope", envelope_pass),
        ("shadow", shadow_pass),
        ("abc", abc_pass.unwrap_or(true)),
    ] {
        println!("{name:<18} {}", if ok { "PASS" } else { "FAIL" });
    }
    println!("report: {}", path.display());
    Ok(all)
}

/// `caustica genericity --config ...`
pub fn cmd_genericity(config_path: &Path, overrides: &CliOverrides) -> i32 {
    let mut config = match RunConfig::from_file(config_path) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    apply_overrides(&mut config, overrides);
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    let profile = match &config.surface {
        crate::config::SurfaceConfig::Revolution { profile, .. } => {
            match profile.build(base_dir) {
                Ok(p) => p,
                Err(e) => return config_error(&e),
            }
        }
        _ => {
            return config_error(&Error::config(
                "genericity check needs a revolution surface",
            ))
        }
    };
    match genericity_check(&profile) {
        Ok(report) => {
            println!("verdict: {:?}", report.verdict);
            println!(
                "inflections: {} (max |κ| = {:.3e}, noise floor {:.3e})",
                report.inflections.len(),
                report.max_abs_curvature,
                report.noise_floor
            );
            if std::fs::create_dir_all(&config.out_dir).is_ok() {
                let _ = write_json(&config.out_dir.join("genericity.json"), &report);
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}
