//! Pointwise spectral-projector sums, sup over regions, envelope bounds,
//! and the near-boundary A/B/C decomposition for the disk.

use rayon::prelude::*;
use serde::Serialize;

use crate::bands::BandEvaluator;
use crate::disk::DiskBand;
use crate::error::{Error, Result};

/// Evaluation region in the reduced radial coordinate.
#[derive(Debug, Clone, Serialize)]
pub enum Region {
    /// Annulus r ∈ [r_lo, r_hi] ⊂ (0, 1] of the disk (the center is always
    /// excluded: sums concentrate there for n = 0 and the estimates fail).
    DiskAnnulus { r_lo: f64, r_hi: f64 },
    /// Union of s-intervals of a revolution surface, each ⊂ (0, L) and
    /// expected to avoid the poles and the equator.
    RevolutionIntervals { intervals: Vec<(f64, f64)> },
}

impl Region {
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        match self {
            Region::DiskAnnulus { r_lo, r_hi } => vec![(*r_lo, *r_hi)],
            Region::RevolutionIntervals { intervals } => intervals.clone(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals().iter().any(|&(a, b)| x >= a && x <= b)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Region::DiskAnnulus { r_lo, r_hi } => {
                if !(0.0 < *r_lo && r_lo < r_hi && *r_hi <= 1.0) {
                    return Err(Error::config(format!(
                        "disk annulus needs 0 < r_lo < r_hi <= 1, got [{r_lo}, {r_hi}]"
                    )));
                }
            }
            Region::RevolutionIntervals { intervals } => {
                if intervals.is_empty() {
                    return Err(Error::config("empty revolution region"));
                }
                for &(a, b) in intervals {
                    if !(0.0 < a && a < b) {
                        return Err(Error::config(format!(
                            "revolution interval needs 0 < a < b, got [{a}, {b}]"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Result of a region sup scan.
#[derive(Debug, Clone, Serialize)]
pub struct SumResult {
    pub sup_value: f64,
    pub argmax: f64,
    /// The full scan, (coordinate, S) per grid point, in grid order.
    pub per_point: Vec<(f64, f64)>,
    /// Number of band members (multiplicity counted).
    pub term_count: usize,
    /// Whether the argmax landed on a region endpoint (caustics clustering
    /// just outside the region show up this way).
    pub argmax_on_boundary: bool,
}

/// S(x) = Σ weight·multiplicity·|φ_ν(x)|² over the band.
pub fn projector_sum<B: BandEvaluator + ?Sized>(eval: &B, x: f64) -> f64 {
    let band = eval.band();
    let mut acc = 0.0;
    for (i, m) in band.modes.iter().enumerate() {
        acc += m.weight * m.multiplicity as f64 * eval.eval_sq(i, x);
    }
    acc
}

/// Scan grid: union of a uniform grid with step λ^{-2/3}/4, every caustic
/// location inside the region, and ±λ^{-2/3}·{0.5, 1, 2} offsets around each
/// caustic (the sup lives at caustics at scale λ^{-2/3}; a blind uniform
/// grid under-measures it).
pub fn region_grid<B: BandEvaluator + ?Sized>(eval: &B, region: &Region) -> Vec<f64> {
    let band = eval.band();
    let scale = band.lambda.powf(-2.0 / 3.0);
    let step = scale / 4.0;
    let mut points = Vec::new();
    for (a, b) in region.intervals() {
        let n = ((b - a) / step).ceil() as usize;
        for i in 0..=n {
            points.push((a + i as f64 * step).min(b));
        }
        for i in 0..band.modes.len() {
            let (c1, c2) = eval.caustic_coords(i);
            for c in [c1, c2] {
                if c >= a && c <= b {
                    points.push(c);
                    for off in [0.5, 1.0, 2.0] {
                        for sgn in [-1.0, 1.0] {
                            let p = c + sgn * off * scale;
                            if p >= a && p <= b {
                                points.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    points.sort_by(|p, q| p.partial_cmp(q).unwrap());
    points.dedup();
    points
}

/// Sup of the projector sum over the region's scan grid.
pub fn sup_over_region<B: BandEvaluator + ?Sized>(eval: &B, region: &Region) -> SumResult {
    let grid = region_grid(eval, region);
    let per_point: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&x| (x, projector_sum(eval, x)))
        .collect();
    let mut sup_value = 0.0;
    let mut argmax = grid.first().copied().unwrap_or(0.0);
    for &(x, s) in &per_point {
        if s > sup_value {
            sup_value = s;
            argmax = x;
        }
    }
    let argmax_on_boundary = region
        .intervals()
        .iter()
        .any(|&(a, b)| (argmax - a).abs() < 1e-14 || (argmax - b).abs() < 1e-14);
    SumResult {
        sup_value,
        argmax,
        per_point,
        term_count: eval.band().counted_size(),
        argmax_on_boundary,
    }
}

/// ⟨t⟩ = √(1+t²).
fn jbracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Envelope diagnostics against |φ_ν(x)| ≲ λ_ν^{1/6}·⟨d(x,C_ν)λ_ν^{2/3}⟩^{-1/4}.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    /// max over samples and fold-type modes of |φ|·⟨dλ^{2/3}⟩^{1/4}/λ^{1/6}.
    pub max_ratio: f64,
    /// Where the max happened: (coordinate, n, k).
    pub arg: (f64, u32, u32),
    /// max |φ_ν(x)| over pairs with d·λ^{2/3} >= 10 (the far zone, where the
    /// derivative-term contribution is the binding one and must stay O(1)).
    pub far_zone_max_abs: f64,
    /// Sample pairs inspected.
    pub samples: usize,
}

/// Evaluate the fold envelope over sample points × band modes. Modes with
/// μ below `mu_min_fold` (pole caustics and near-axis modes, not fold-type)
/// are skipped.
pub fn envelope_ratio<B: BandEvaluator + ?Sized>(
    eval: &B,
    points: &[f64],
    mu_min_fold: f64,
) -> EnvelopeReport {
    let band = eval.band();
    let mut max_ratio = 0.0f64;
    let mut arg = (f64::NAN, 0, 0);
    let mut far_max = 0.0f64;
    let mut samples = 0usize;
    for (i, m) in band.modes.iter().enumerate() {
        if m.nu.mu < mu_min_fold {
            continue;
        }
        let lam = m.nu.lambda;
        let lam23 = lam.powf(2.0 / 3.0);
        let lam16 = lam.powf(1.0 / 6.0);
        for &x in points {
            let phi = eval.eval_sq(i, x).sqrt();
            let t = eval.caustic_distance(i, x) * lam23;
            let ratio = phi * jbracket(t).powf(0.25) / lam16;
            if ratio > max_ratio {
                max_ratio = ratio;
                arg = (x, m.nu.n, m.nu.k);
            }
            if t >= 10.0 {
                far_max = far_max.max(phi);
            }
            samples += 1;
        }
    }
    EnvelopeReport {
        max_ratio,
        arg,
        far_zone_max_abs: far_max,
        samples,
    }
}

/// Deep-shadow decay spot check: for each fold-type mode, evaluate at
/// shadow-side depths t = d·λ^{2/3} ∈ {15, 20, 30} (inside the caustic
/// circle) and report max |φ|/envelope. Super-polynomial decay puts this
/// far below any power scale.
pub fn shadow_decay_max<B: BandEvaluator + ?Sized>(
    eval: &B,
    region: &Region,
    mu_min_fold: f64,
) -> f64 {
    let band = eval.band();
    let mut worst = 0.0f64;
    for (i, m) in band.modes.iter().enumerate() {
        if m.nu.mu < mu_min_fold {
            continue;
        }
        let lam = m.nu.lambda;
        let lam23 = lam.powf(2.0 / 3.0);
        let lam16 = lam.powf(1.0 / 6.0);
        let (c1, _c2) = eval.caustic_coords(i);
        for depth in [15.0, 20.0, 30.0] {
            // Shadow side of a disk caustic is r < μ; for revolution the
            // first branch's shadow is s < s₋.
            let x = c1 - depth / lam23;
            if !region.contains(x) {
                continue;
            }
            let phi = eval.eval_sq(i, x).sqrt();
            let envelope = lam16 * jbracket(depth).powf(-0.25);
            worst = worst.max(phi / envelope);
        }
    }
    worst
}

/// Near-boundary partition of a disk band at radius r = 1 - η:
///   A: μ_j - r >  λ^{-2/3+α}              (deep shadow)
///   B: -λ^{-2/3+α} <= r - μ_j <= max(2η, λ^{-2/3+α})   (caustic zone)
///   C: r - μ_j > max(2η, λ^{-2/3+α})       (oscillatory far zone)
/// with the per-mode μ_j = |n|/λ_ν convention.
#[derive(Debug, Clone, Serialize)]
pub struct AbcReport {
    pub r: f64,
    pub alpha: f64,
    pub sum_a: f64,
    pub sum_b: f64,
    pub sum_c: f64,
    pub count_a: usize,
    pub count_b: usize,
    pub count_c: usize,
    /// Σ over the whole band (equals sum_a+sum_b+sum_c up to rounding).
    pub total: f64,
}

pub fn abc_decomposition(disk: &DiskBand, r: f64, alpha: f64) -> Result<AbcReport> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::domain(format!(
            "abc_decomposition: r must lie in (0, 1], got {r}"
        )));
    }
    let band = &disk.band;
    let lambda = band.lambda;
    let eta = 1.0 - r;
    let split = lambda.powf(-2.0 / 3.0 + alpha);
    let far = (2.0 * eta).max(split);

    let mut report = AbcReport {
        r,
        alpha,
        sum_a: 0.0,
        sum_b: 0.0,
        sum_c: 0.0,
        count_a: 0,
        count_b: 0,
        count_c: 0,
        total: 0.0,
    };
    for (i, m) in band.modes.iter().enumerate() {
        let term = m.weight * m.multiplicity as f64 * disk.eval_sq(i, r);
        let gap = r - m.nu.mu;
        report.total += term;
        if -gap > split {
            report.sum_a += term;
            report.count_a += 1;
        } else if gap > far {
            report.sum_c += term;
            report.count_c += 1;
        } else {
            report.sum_b += term;
            report.count_b += 1;
        }
    }
    Ok(report)
}

/// Coarse local-Weyl cross-check for the disk: Σ over all modes with
/// λ_ν <= λ_max of mult·|φ_ν(x)|², divided by the local Weyl density
/// λ_max²/(4π). Bounded near 1 for interior x when normalizations are right.
pub fn local_weyl_ratio(x: f64, lambda_max: f64) -> Result<f64> {
    use crate::disk::{disk_norm_const, disk_eigenfunction_sq, DiskMode};
    use crate::bands::JointEigenvalue;
    use crate::specfun::bessel_zeros_in_interval;

    let mut acc = 0.0;
    let mut n = 0u32;
    while (n as f64) < lambda_max {
        let zeros = bessel_zeros_in_interval(n, 0.0, lambda_max)?;
        if zeros.is_empty() && n > 0 {
            break;
        }
        for z in zeros {
            let mode = DiskMode {
                nu: JointEigenvalue::new(z.value, n, z.k),
                c: disk_norm_const(n, z.k, &z)?,
            };
            let mult = if n == 0 { 1.0 } else { 2.0 };
            acc += mult * disk_eigenfunction_sq(&mode, x);
        }
        n += 1;
    }
    Ok(acc / (lambda_max * lambda_max / (4.0 * std::f64::consts::PI)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands::CutoffSpec;
    use crate::disk::{disk_band_spectrum, DiskSpectrum};

    fn disk_band(lambda: f64) -> DiskBand {
        let spectrum = DiskSpectrum::new(0.0);
        let delta = lambda.powf(-1.0 / 3.0);
        disk_band_spectrum(&spectrum, lambda, delta, &CutoffSpec::default()).unwrap()
    }

    #[test]
    fn empty_band_sums_to_zero() {
        let spectrum = DiskSpectrum::new(0.0);
        let db = disk_band_spectrum(&spectrum, 5.0, 1e-6, &CutoffSpec::default()).unwrap();
        assert!(db.band.is_empty());
        assert_eq!(projector_sum(&db, 0.5), 0.0);
    }

    #[test]
    fn boundary_sum_vanishes() {
        let db = disk_band(100.0);
        let s = projector_sum(&db, 1.0);
        assert!(s <= 1e-18, "Dirichlet sum at r=1: {s}");
    }

    #[test]
    fn monotone_under_band_enlargement() {
        let spectrum = DiskSpectrum::new(0.0);
        let lambda = 150.0f64;
        let delta = lambda.powf(-1.0 / 3.0);
        let small = disk_band_spectrum(&spectrum, lambda, delta, &CutoffSpec::default()).unwrap();
        let large =
            disk_band_spectrum(&spectrum, lambda, 2.0 * delta, &CutoffSpec::default()).unwrap();
        for &r in &[0.35, 0.5, 0.82] {
            assert!(projector_sum(&large, r) >= projector_sum(&small, r) - 1e-12);
        }
    }

    #[test]
    fn sup_monotone_in_region() {
        let db = disk_band(200.0);
        let inner = sup_over_region(
            &db,
            &Region::DiskAnnulus {
                r_lo: 0.4,
                r_hi: 0.6,
            },
        );
        let outer = sup_over_region(
            &db,
            &Region::DiskAnnulus {
                r_lo: 0.3,
                r_hi: 0.7,
            },
        );
        assert!(outer.sup_value >= inner.sup_value);
        assert!(outer.per_point.len() > 10);
    }

    #[test]
    fn argmax_near_a_caustic_or_endpoint() {
        let db = disk_band(500.0);
        let region = Region::DiskAnnulus {
            r_lo: 0.3,
            r_hi: 0.7,
        };
        let result = sup_over_region(&db, &region);
        let tol = 2.0 * 500.0f64.powf(-2.0 / 3.0);
        let near_caustic = db
            .band
            .mus
            .iter()
            .any(|&mu| (result.argmax - mu).abs() <= tol);
        assert!(
            near_caustic || result.argmax_on_boundary,
            "argmax {} is neither near a caustic nor at an endpoint",
            result.argmax
        );
    }

    #[test]
    fn partition_is_complete() {
        let db = disk_band(300.0);
        for &r in &[0.95, 0.99, 1.0] {
            let report = abc_decomposition(&db, r, 0.1).unwrap();
            let direct = projector_sum(&db, r);
            let recomposed = report.sum_a + report.sum_b + report.sum_c;
            assert!(
                (recomposed - direct).abs() <= 1e-12 * direct.max(1e-300),
                "A+B+C = {recomposed} vs S = {direct}"
            );
            assert_eq!(
                report.count_a + report.count_b + report.count_c,
                db.band.len()
            );
        }
    }

    #[test]
    fn abc_rejects_bad_radius() {
        let db = disk_band(100.0);
        assert!(abc_decomposition(&db, 0.0, 0.1).is_err());
        assert!(abc_decomposition(&db, 1.5, 0.1).is_err());
    }

    #[test]
    fn envelope_ratio_is_finite_and_positive() {
        let db = disk_band(250.0);
        let region = Region::DiskAnnulus {
            r_lo: 0.3,
            r_hi: 0.7,
        };
        let grid = region_grid(&db, &region);
        let report = envelope_ratio(&db, &grid, 1e-9);
        assert!(report.max_ratio.is_finite());
        assert!(report.max_ratio > 0.0);
        assert!(report.samples > 0);
    }

    #[test]
    fn deep_shadow_is_tiny() {
        let db = disk_band(400.0);
        let region = Region::DiskAnnulus {
            r_lo: 0.2,
            r_hi: 0.9,
        };
        let worst = shadow_decay_max(&db, &region, 0.05);
        assert!(worst <= 1e-8, "shadow leak: {worst:e}");
    }

    #[test]
    fn local_weyl_density_near_one() {
        let ratio = local_weyl_ratio(0.5, 60.0).unwrap();
        assert!(
            (0.7..1.3).contains(&ratio),
            "local Weyl ratio {ratio} drifted"
        );
    }

    #[test]
    fn region_validation() {
        assert!(Region::DiskAnnulus {
            r_lo: 0.0,
            r_hi: 0.5
        }
        .validate()
        .is_err());
        assert!(Region::DiskAnnulus {
            r_lo: 0.3,
            r_hi: 0.7
        }
        .validate()
        .is_ok());
        assert!(Region::RevolutionIntervals { intervals: vec![] }
            .validate()
            .is_err());
    }
}
